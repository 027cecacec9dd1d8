#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hdlasso/core.hpp"

namespace hdlasso {

enum class CompatMethod { SignEnumeration, RandomRestart };

// φ̂²(L,S) together with the minimizing direction and solver diagnostics.
// `minimizer` is the p-vector β with ‖β_S‖₁ = 1 and ‖β_{S^c}‖₁ ≤ L attaining
// value = |S| ‖Xβ_S - Xβ_{S^c}‖_n².
struct CompatibilityResult {
    double value = 0.0;
    Eigen::VectorXd minimizer;
    double L = 0.0;
    IndexSet S;
    CompatMethod method = CompatMethod::SignEnumeration;
    bool certified = false;
    double max_orthant_kkt = 0.0;
    int iterations = 0;
};

struct CompatOptions {
    int sign_cap = 12;        // exhaustive orthant enumeration up to 2^cap
    int max_iters = 50000;    // ADMM iterations per orthant
    double target_kkt = 1e-8;
    int random_patterns = 64;  // fallback sample size when |S| > sign_cap
    std::uint64_t seed = 0x636f6d706174ULL;
};

// Compatibility constant
//   φ̂²(L,S) = min { |S| ‖Xβ_S - Xβ_{S^c}‖_n² : ‖β_S‖₁ = 1, ‖β_{S^c}‖₁ ≤ L }.
// Each sign pattern of β_S turns the ℓ1 sphere into a simplex face; the
// convex subproblem per orthant is solved by ADMM with an exact active-face
// KKT polish. certified = every orthant met target_kkt.
CompatibilityResult compatibility_constant(const GramMatrix& Sigma, double L, const IndexSet& S,
                                           const CompatOptions& opts = {});

// Convenience: grams the design first.
CompatibilityResult compatibility_constant(const Eigen::MatrixXd& X, double L, const IndexSet& S,
                                           const CompatOptions& opts = {});

// Shared-factorization batch over several L values (warm-started, ascending).
std::vector<CompatibilityResult> compatibility_constants(const GramMatrix& Sigma,
                                                         const std::vector<double>& Ls,
                                                         const IndexSet& S,
                                                         const CompatOptions& opts = {});

// Sampling-only reference value for φ̂²(L,S): uniform feasible draws followed
// by localized batches with shrinking radius, never touching the
// optimization path above. Spends `samples` objective evaluations in total.
double compat_random_search_oracle(const GramMatrix& Sigma, double L, const IndexSet& S,
                                   int samples = 100000, std::uint64_t seed = 0x6f7261636cULL);

// Realized noise level max_j |ε'X_j| / n.
double lambda_max_noise(const Eigen::MatrixXd& X, const Eigen::VectorXd& eps);

// High-probability bound sqrt(2 (log(2p) + a) / n) for the maximum of p
// standardized averages; used to set the penalty level.
double theoretical_lambda(int n, int p, double a);

}  // namespace hdlasso
