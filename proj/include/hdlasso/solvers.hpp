#pragma once

#include <Eigen/Dense>

#include "hdlasso/core.hpp"
#include "hdlasso/errors.hpp"

namespace hdlasso {

struct CdOptions {
    double coord_tol = 1e-10;  // max coordinate change per sweep
    double kkt_tol = 1e-8;
    int max_sweeps = 100000;
};

struct ScaleIterOptions {
    CdOptions cd;
    double sigma_tol = 1e-10;
    double sigma_min = 1e-12;
    int max_iters = 500;
};

// A fitted ℓ1-penalized regression. `lambda` is in the estimator's own
// convention; `sigma` is the scale parameter (0 when the fit is not
// scale-parameterized). The gradient-scale penalty level is
// effective_lambda(): the KKT conditions read X'(Y-Xβ̂)/n = λ_eff ẑ.
struct LassoFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residual;     // Y - X beta
    Eigen::VectorXd subgradient;  // ẑ, ‖ẑ‖_∞ ≤ 1, ẑ_j = sign(β̂_j) on the active set
    double lambda = 0.0;
    double sigma = 0.0;
    int iterations = 0;
    double kkt_violation = 0.0;

    double effective_lambda() const { return sigma > 0.0 ? lambda * sigma : lambda; }
};

// Square-root / scaled Lasso result: the fit plus its two scale estimates.
struct ScaleFit {
    LassoFit base;
    double sigma_hat_sq = 0.0;    // ‖Y - Xβ̂‖_n²
    double sigma_tilde_sq = 0.0;  // ‖Y - Xβ̂‖_n² + λ_eff ‖β̂‖₁
    double fixed_point_residual = 0.0;
};

struct LassoConvergenceError : ConvergenceError {
    LassoConvergenceError(const std::string& what, double residual, int iterations,
                          Eigen::VectorXd iterate)
        : ConvergenceError(what, residual, iterations), last_iterate(std::move(iterate)) {}
    Eigen::VectorXd last_iterate;
};

// Solution of  min_β  β'Σβ - 2 b'β + 2 λ ‖β‖₁  by cyclic coordinate descent
// (coordinates in fixed ascending order). Stationarity: Σβ - b + λ ẑ = 0.
struct QuadLassoResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd gradient;  // b - Σβ at the solution (= λ ẑ when exact)
    Eigen::VectorXd subgradient;
    double kkt_violation = 0.0;
    int sweeps = 0;
};

QuadLassoResult cd_quadratic_lasso(const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& b,
                                   double lambda_eff, const CdOptions& opts = {},
                                   Eigen::VectorXd warm_start = Eigen::VectorXd());

// min ‖Y-Xβ‖_n² + 2λ‖β‖₁
LassoFit solve_lasso(const DesignData& data, double lambda, const CdOptions& opts = {});

// min ‖Y-Xβ‖_n² + 2λσ‖β‖₁ — identical to solve_lasso at penalty λσ.
LassoFit solve_lasso_scaled(const DesignData& data, double lambda, double sigma,
                            const CdOptions& opts = {});

// min ‖Y-Xβ‖_n + λ‖β‖₁, solved as the stable point β̂ = β̂(σ̂) of the
// scale-parameterized Lasso with σ̂ the residual norm.
ScaleFit solve_sqrt_lasso(const DesignData& data, double lambda,
                          const ScaleIterOptions& opts = {});

// Joint minimization over (β, σ); returns β̂ = β̂(σ̃) with
// σ̃² = ‖Y-Xβ̂‖_n² + λσ̃‖β̂‖₁ at the fixed point.
ScaleFit solve_scaled_lasso(const DesignData& data, double lambda,
                            const ScaleIterOptions& opts = {});

// Max KKT violation of a fit at penalty level lambda_eff, recomputed from the
// data (independent of any state cached in the fit).
double kkt_certificate(const DesignData& data, const LassoFit& fit, double lambda_eff);

// |Y'(Y-Xβ̂)/n - ‖Y-Xβ̂‖_n² - λσ‖β̂‖₁| for a scale-parameterized fit; small at
// convergence because the middle term plus penalty equals the correlation.
double penalized_rss_identity(const DesignData& data, const LassoFit& fit, double lambda,
                              double sigma);

}  // namespace hdlasso
