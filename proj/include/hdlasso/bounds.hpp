#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>

#include "hdlasso/compat.hpp"
#include "hdlasso/core.hpp"
#include "hdlasso/solvers.hpp"

namespace hdlasso {

enum class TheoremId {
    LassoPrediction,
    LassoEll1,
    Ell1RestrictedCorollary,
    SqrtPredictionProp,
    SqrtPredictionThm,
    SqrtEll1Thm,
    SupNorm,
};

const char* theorem_name(TheoremId id);

// Both sides of one oracle inequality, evaluated on a concrete fit.
// `applicable` is false when the statement's premises fail for the given
// inputs; in that case holds is meaningless and lhs/rhs may be NaN.
struct BoundReport {
    TheoremId theorem = TheoremId::LassoPrediction;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool applicable = true;
    std::string note;
    std::map<std::string, double> inputs;
};

// Prediction / ℓ1-error inequalities for the plain Lasso fit (penalty
// convention ‖Y-Xβ‖_n² + 2λ‖β‖₁). The right side is evaluated at the
// caller's candidate β (the min over supports is analytic, not computed);
// its active set supplies S and the constant L follows the statement.
// phi2_hint short-circuits the φ̂²(L,S) computation when the caller already
// solved it (batch protocols share one factorization across theorems).
BoundReport evaluate_bound(TheoremId id, const DesignData& data, const Eigen::VectorXd& beta0,
                           const Eigen::VectorXd& eps, double lambda, double lambda_eps,
                           double delta, const Eigen::VectorXd& candidate, const LassoFit& fit,
                           const CompatOptions& copts = {},
                           std::optional<double> phi2_hint = {});

// Square-root Lasso variants (penalty ‖Y-Xβ‖_n + λ‖β‖₁). The noise levels
// λ̂₀ = ‖ε'X‖_∞ / (n‖ε̂‖_n) and λ₀ = ‖ε'X‖_∞ / (n‖ε‖_n) are the realized
// values, the tightest admissible choices.
BoundReport evaluate_bound(TheoremId id, const DesignData& data, const Eigen::VectorXd& beta0,
                           const Eigen::VectorXd& eps, double lambda, double delta,
                           const Eigen::VectorXd& candidate, const ScaleFit& fit,
                           const CompatOptions& copts = {},
                           std::optional<double> phi2_hint = {});

// ℓ1-restricted oracle
//   β* = argmin { ‖X(β-β⁰)‖_n² + λ*² |S_β| / φ̂²(L,S_β) : ‖β‖₁ ≥ ‖β⁰‖₁ }
// by exhaustive support enumeration up to support_cap. lemma_lhs/rhs report
// the post-hoc inequality λ*‖β*-β⁰‖₁ ≤ ‖X(β*-β⁰)‖_n² + λ*²|S*|/φ̂²(1,S*).
struct Ell1OracleResult {
    Eigen::VectorXd beta_star;
    double objective = 0.0;
    IndexSet support;
    double lemma_lhs = 0.0;
    double lemma_rhs = 0.0;
    bool lemma_holds = false;
};

Ell1OracleResult ell1_restricted_oracle(const DesignData& data, const Eigen::VectorXd& beta0,
                                        double lambda_star, double L, int support_cap,
                                        const CompatOptions& copts = {});

}  // namespace hdlasso
