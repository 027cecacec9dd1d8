#pragma once

#include <Eigen/Dense>
#include <optional>

#include "hdlasso/core.hpp"
#include "hdlasso/inference.hpp"

namespace hdlasso {

enum class PrecisionMethod { SmallPInverse, Nodewise, Graphical };

struct PopulationTruth {
    Eigen::MatrixXd Sigma0;
    Eigen::MatrixXd Theta0;
};

// Exact linearization of Θ̂ (or its de-sparsified version) around Θ₀:
//   estimate - Θ₀ = -Θ₀WΘ₀ - rem₁ [- rem₂],   W = Σ̂ - Σ₀,
// with the lemma bounds on each remainder evaluated alongside.
struct PrecisionDecomposition {
    Eigen::MatrixXd linear_term;  // -Θ₀WΘ₀
    double rem1_norm = 0.0;
    double rem1_bound = 0.0;
    bool rem1_holds = true;
    double rem2_norm = 0.0;
    double rem2_bound = 0.0;
    bool rem2_holds = true;
    double identity_gap = 0.0;  // ‖estimate - Θ₀ + Θ₀WΘ₀ + rem₁ + rem₂‖_∞
};

struct PrecisionEstimate {
    Eigen::MatrixXd theta_raw;
    Eigen::MatrixXd theta_desparsified;  // empty unless the method de-sparsifies
    PrecisionMethod method = PrecisionMethod::SmallPInverse;
    double lambda = 0.0;
    std::optional<PrecisionDecomposition> decomposition;
};

// Θ̂ = Σ̂⁻¹ for invertible Σ̂ (condition number below cond_limit).
PrecisionEstimate precision_smallp(const GramMatrix& Sigma,
                                   const std::optional<PopulationTruth>& truth = {},
                                   double cond_limit = 1e12);

// Node-wise square-root Lasso Θ̂ and its symmetrized de-sparsified version
// Θ̂ + Θ̂' - Θ̂'Σ̂Θ̂.
PrecisionEstimate desparsified_nodewise_precision(
    const Eigen::MatrixXd& X, double lambda_node,
    const std::optional<PopulationTruth>& truth = {},
    const ScaleIterOptions& opts = nodewise_default_options());

struct GraphicalOptions {
    double kkt_tol = 1e-6;
    int max_sweeps = 500;
    CdOptions cd;
};

// argmin over positive definite Θ of trace(Σ̂Θ) - log det Θ + penalty, with
// stationarity Σ̂ - Θ̂⁻¹ + λẐ = 0 (off-diagonal penalty only). Solved by
// block coordinate descent, one penalized column subproblem per node.
PrecisionEstimate graphical_lasso(const GramMatrix& Sigma, double lambda,
                                  const GraphicalOptions& opts = {});

// Θ̂_de = 2Θ̂ - Θ̂Σ̂Θ̂ for a graphical-Lasso Θ̂.
PrecisionEstimate desparsified_graphical(const Eigen::MatrixXd& Theta, const GramMatrix& Sigma,
                                         double lambda,
                                         const std::optional<PopulationTruth>& truth = {});

// Max violation of the graphical-Lasso stationarity conditions: zero
// diagonal gap, off-diagonal gaps within λ, and the sign pattern on the
// active set.
double graphical_kkt_residual(const GramMatrix& Sigma, const Eigen::MatrixXd& Theta,
                              double lambda);

// Subgradient matrix recovered from the stationarity conditions,
// Ẑ = (Θ̂⁻¹ - Σ̂)/λ clipped to [-1,1]; clip_violation reports how far the
// unclipped entries exceeded 1 and identity_gap compares the two algebraic
// forms of the de-sparsified estimator.
struct GraphicalSubgradient {
    Eigen::MatrixXd Z;
    double clip_violation = 0.0;
    double identity_gap = 0.0;
};

GraphicalSubgradient recover_graphical_subgradient(const GramMatrix& Sigma,
                                                   const Eigen::MatrixXd& Theta, double lambda);

}  // namespace hdlasso
