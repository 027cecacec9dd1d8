#pragma once

#include <Eigen/Dense>

#include "hdlasso/bounds.hpp"
#include "hdlasso/core.hpp"
#include "hdlasso/solvers.hpp"

namespace hdlasso {

// Surrogate inverse Θ̂ built from p node-wise square-root Lassos.
// Column j: Ĉ_jj = 1, Ĉ_kj = -γ̂_kj, Θ̂_j = Ĉ_j / τ̃_j² with
// τ̂_j² = ‖X_j - X_{-j}γ̂_j‖_n² and τ̃_j² = τ̂_j² + λ̲ τ̂_j ‖γ̂_j‖₁.
struct NodewiseInverse {
    Eigen::MatrixXd Theta;
    Eigen::MatrixXd C;
    Eigen::VectorXd tau_hat_sq;
    Eigen::VectorXd tau_tilde_sq;
    double lambda_node = 0.0;

    int p() const { return static_cast<int>(Theta.rows()); }
};

inline ScaleIterOptions nodewise_default_options() {
    ScaleIterOptions opts;
    opts.cd.coord_tol = 1e-12;
    opts.cd.kkt_tol = 1e-10;
    opts.sigma_tol = 1e-12;
    return opts;
}

// lambda_node = 0 reproduces the exact inverse (requires p < n and an
// invertible Gram matrix); the node-wise regressions are then plain least
// squares and Θ̂ = Σ̂⁻¹.
NodewiseInverse nodewise_sqrt_lasso(const Eigen::MatrixXd& X, double lambda_node,
                                    const ScaleIterOptions& opts = nodewise_default_options());

// Max stationarity violation across the p node regressions, evaluated at the
// per-node penalty level λ̲τ̂_j from the Gram matrix directly.
double nodewise_kkt_violation(const Eigen::MatrixXd& X, const NodewiseInverse& nw);

// De-sparsified Lasso b̂ = β̂ + Θ̂' X'(Y - Xβ̂)/n.
Eigen::VectorXd desparsify(const DesignData& data, const LassoFit& fit,
                           const NodewiseInverse& nw);

struct DesparsifiedResult {
    Eigen::VectorXd b;
    Eigen::VectorXd se;  // σ̂ τ̂_j / (τ̃_j² √n)
    Eigen::VectorXd ci_lower;
    Eigen::VectorXd ci_upper;
    double level = 0.0;
    double remainder_bound = 0.0;  // λ̲‖β̂-β⁰‖₁ in simulation mode, else caller's plug-in
    double sigma_used = 0.0;
};

DesparsifiedResult confidence_intervals(const Eigen::VectorXd& b_hat, const NodewiseInverse& nw,
                                        double sigma_hat, int n, double level,
                                        double remainder_bound = 0.0);

// Term-by-term check of the asymptotic-linearity decomposition
//   (τ̃_j²/τ̂_j)(b̂_j - β_j⁰) = v_j'ε/n + rem_j,   v_j = (τ̃_j²/τ̂_j) X Θ̂_j,
// with ‖v_j‖_n = 1 and ‖rem‖_∞ ≤ λ̲‖β̂-β⁰‖₁. Requires β⁰ and ε (simulation).
struct LinearityCheck {
    Eigen::MatrixXd v;  // n×p, column j = v_j
    Eigen::VectorXd rem;
    double bound = 0.0;
    double max_vnorm_error = 0.0;
    double identity_error = 0.0;  // max_j of the displayed identity's residual
    bool rem_within_bound = false;
};

LinearityCheck sqnorm_linearity_check(const DesignData& data, const Eigen::VectorXd& beta0,
                                      const Eigen::VectorXd& eps, const LassoFit& fit,
                                      const NodewiseInverse& nw);

// ‖β̂-β⁰‖_∞ ≤ ‖Θ₀X'ε‖_∞/n + |||Θ₀|||₁ (‖Σ̂-Σ₀‖_∞ ‖β̂-β⁰‖₁ + λ)
// for the 2λ-convention Lasso under a known population design.
BoundReport supnorm_bias_bound(const Eigen::MatrixXd& Theta0, const Eigen::MatrixXd& Sigma0,
                               const Eigen::MatrixXd& X, const Eigen::VectorXd& eps,
                               double lambda, const Eigen::VectorXd& beta_hat,
                               const Eigen::VectorXd& beta0);

// Closed-form precision matrix of the equal-correlation design
// Σ₀ = (1-ρ)I + ριι'. l1_norm is the exact ℓ1-operator norm and
// bound = 2/(1-ρ) dominates it.
struct EqualCorrelation {
    Eigen::MatrixXd Theta0;
    Eigen::MatrixXd Sigma0;
    double l1_norm = 0.0;
    double bound = 0.0;
};

EqualCorrelation equal_correlation_theta(int p, double rho);

}  // namespace hdlasso
