#include "hdlasso/precision.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "hdlasso/solvers.hpp"

namespace hdlasso {

namespace {

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& A, const char* what) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw SingularMatrixError(std::string(what) + ": matrix not positive definite");
    return ldlt.solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
}

// rem₁ = Θ₀W(Θ̂-Θ₀) with bound ‖Θ₀W‖_∞ |||Θ̂-Θ₀|||₁; shared by all three
// decompositions. The caller adds its own rem₂.
PrecisionDecomposition base_decomposition(const Eigen::MatrixXd& estimate,
                                          const Eigen::MatrixXd& Sigma_hat,
                                          const PopulationTruth& truth) {
    const Eigen::MatrixXd W = Sigma_hat - truth.Sigma0;
    const Eigen::MatrixXd delta = estimate - truth.Theta0;
    PrecisionDecomposition dec;
    dec.linear_term = -truth.Theta0 * W * truth.Theta0;
    const Eigen::MatrixXd rem1 = truth.Theta0 * W * delta;
    dec.rem1_norm = sup_norm(rem1);
    dec.rem1_bound = sup_norm(truth.Theta0 * W) * l1_operator_norm(delta);
    dec.rem1_holds = dec.rem1_norm <= dec.rem1_bound + 1e-10;
    return dec;
}

}  // namespace

PrecisionEstimate precision_smallp(const GramMatrix& Sigma,
                                   const std::optional<PopulationTruth>& truth,
                                   double cond_limit) {
    const Eigen::MatrixXd& S = Sigma.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo >= cond_limit)
        throw SingularMatrixError("precision_smallp: Gram matrix singular or ill-conditioned");

    PrecisionEstimate out;
    out.method = PrecisionMethod::SmallPInverse;
    out.theta_raw = inverse_spd(S, "precision_smallp");

    if (truth) {
        PrecisionDecomposition dec = base_decomposition(out.theta_raw, S, *truth);
        // close the identity exactly: Θ̂-Θ₀ = -Θ₀WΘ₀ - rem₁
        const Eigen::MatrixXd rem1_closed = -(out.theta_raw - truth->Theta0) + dec.linear_term;
        dec.rem1_norm = sup_norm(rem1_closed);
        dec.rem1_holds = dec.rem1_norm <= dec.rem1_bound + 1e-10;
        dec.identity_gap =
            sup_norm(out.theta_raw - truth->Theta0 - dec.linear_term + rem1_closed);
        out.decomposition = std::move(dec);
    }
    return out;
}

PrecisionEstimate desparsified_nodewise_precision(const Eigen::MatrixXd& X, double lambda_node,
                                                  const std::optional<PopulationTruth>& truth,
                                                  const ScaleIterOptions& opts) {
    const NodewiseInverse nw = nodewise_sqrt_lasso(X, lambda_node, opts);
    const Eigen::MatrixXd Sigma_hat = gram(X).matrix();

    PrecisionEstimate out;
    out.method = PrecisionMethod::Nodewise;
    out.lambda = lambda_node;
    out.theta_raw = nw.Theta;
    out.theta_desparsified =
        nw.Theta + nw.Theta.transpose() - nw.Theta.transpose() * (Sigma_hat * nw.Theta);

    if (truth) {
        PrecisionDecomposition dec = base_decomposition(out.theta_desparsified, Sigma_hat, *truth);
        const Eigen::MatrixXd delta = nw.Theta - truth->Theta0;
        const Eigen::MatrixXd rem1 = truth->Theta0 * (Sigma_hat - truth->Sigma0) * delta;
        const Eigen::MatrixXd rem2 =
            delta.transpose() * (Sigma_hat * nw.Theta - Eigen::MatrixXd::Identity(nw.p(), nw.p()));
        dec.rem1_norm = sup_norm(rem1);
        dec.rem1_bound = sup_norm(truth->Theta0 * (Sigma_hat - truth->Sigma0)) *
                         l1_operator_norm(delta);
        dec.rem1_holds = dec.rem1_norm <= dec.rem1_bound + 1e-10;
        dec.rem2_norm = sup_norm(rem2);
        dec.rem2_bound = lambda_node * nw.tau_tilde_sq.cwiseSqrt().cwiseInverse().maxCoeff() *
                         l1_operator_norm(delta);
        dec.rem2_holds = dec.rem2_norm <= dec.rem2_bound + 1e-10;
        dec.identity_gap = sup_norm(out.theta_desparsified - truth->Theta0 - dec.linear_term +
                                    rem1 + rem2);
        out.decomposition = std::move(dec);
    }
    return out;
}

double graphical_kkt_residual(const GramMatrix& Sigma, const Eigen::MatrixXd& Theta,
                              double lambda) {
    const int p = Sigma.p();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Theta);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        return std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd gap =
        Sigma.matrix() - ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    const double active_tol = 1e-10 * std::max(1.0, sup_norm(Theta));
    double res = 0.0;
    for (int j = 0; j < p; ++j) {
        for (int k = 0; k < p; ++k) {
            if (j == k) {
                res = std::max(res, std::abs(gap(j, j)));
            } else if (std::abs(Theta(j, k)) > active_tol) {
                res = std::max(res, std::abs(gap(j, k) + lambda * (Theta(j, k) > 0 ? 1.0 : -1.0)));
            } else {
                res = std::max(res, std::abs(gap(j, k)) - lambda);
            }
        }
    }
    return res;
}

PrecisionEstimate graphical_lasso(const GramMatrix& Sigma, double lambda,
                                  const GraphicalOptions& opts) {
    const Eigen::MatrixXd& S = Sigma.matrix();
    const int p = Sigma.p();
    if (S.diagonal().minCoeff() <= 0.0)
        throw DomainError("graphical_lasso: Gram diagonal must be strictly positive");
    if (lambda < 0.0) throw DomainError("graphical_lasso: negative penalty");

    PrecisionEstimate out;
    out.method = PrecisionMethod::Graphical;
    out.lambda = lambda;

    if (lambda == 0.0) {
        out.theta_raw = inverse_spd(S, "graphical_lasso");
        return out;
    }

    // block coordinate descent on the covariance iterate W; each column is a
    // penalized quadratic subproblem sharing the Lasso coordinate engine
    Eigen::MatrixXd W = S;
    Eigen::MatrixXd Gamma = Eigen::MatrixXd::Zero(p - 1, p);  // per-column coefficients
    Eigen::MatrixXd Theta(p, p);
    Eigen::MatrixXd W11(p - 1, p - 1);
    Eigen::VectorXd s12(p - 1);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        for (int j = 0; j < p; ++j) {
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                s12[ia] = S(a, j);
                for (int b = 0, ib = 0; b < p; ++b) {
                    if (b == j) continue;
                    W11(ia, ib) = W(a, b);
                    ++ib;
                }
                ++ia;
            }
            QuadLassoResult q = cd_quadratic_lasso(W11, s12, lambda, opts.cd, Gamma.col(j));
            Gamma.col(j) = q.beta;
            const Eigen::VectorXd w12 = W11 * Gamma.col(j);
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                W(a, j) = w12[ia];
                W(j, a) = w12[ia];
                ++ia;
            }
        }
        // recover Θ from the column fits and certify stationarity directly
        for (int j = 0; j < p; ++j) {
            double quad = 0.0;
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                quad += W(a, j) * Gamma(ia++, j);
            }
            const double theta_jj = 1.0 / (W(j, j) - quad);
            Theta(j, j) = theta_jj;
            for (int a = 0, ia = 0; a < p; ++a) {
                if (a == j) continue;
                Theta(a, j) = -Gamma(ia++, j) * theta_jj;
            }
        }
        Theta = 0.5 * (Theta + Theta.transpose()).eval();
        if (graphical_kkt_residual(Sigma, Theta, lambda) <= opts.kkt_tol) {
            out.theta_raw = Theta;
            return out;
        }
    }
    throw ConvergenceError("graphical_lasso: block coordinate descent did not converge",
                           graphical_kkt_residual(Sigma, Theta, lambda), opts.max_sweeps);
}

GraphicalSubgradient recover_graphical_subgradient(const GramMatrix& Sigma,
                                                   const Eigen::MatrixXd& Theta, double lambda) {
    const int p = Sigma.p();
    GraphicalSubgradient out;
    if (lambda <= 0.0) {
        out.Z = Eigen::MatrixXd::Zero(p, p);
        return out;
    }
    const Eigen::MatrixXd theta_inv = inverse_spd(Theta, "recover_graphical_subgradient");
    Eigen::MatrixXd Z = (theta_inv - Sigma.matrix()) / lambda;
    Z.diagonal().setZero();
    out.clip_violation = std::max(0.0, sup_norm(Z) - 1.0);
    out.Z = Z.cwiseMax(-1.0).cwiseMin(1.0);
    const Eigen::MatrixXd de_kkt = Theta + lambda * Theta * out.Z * Theta;
    const Eigen::MatrixXd de_direct = 2.0 * Theta - Theta * Sigma.matrix() * Theta;
    out.identity_gap = sup_norm(de_kkt - de_direct);
    return out;
}

PrecisionEstimate desparsified_graphical(const Eigen::MatrixXd& Theta, const GramMatrix& Sigma,
                                         double lambda,
                                         const std::optional<PopulationTruth>& truth) {
    const Eigen::MatrixXd& S = Sigma.matrix();
    PrecisionEstimate out;
    out.method = PrecisionMethod::Graphical;
    out.lambda = lambda;
    out.theta_raw = Theta;
    out.theta_desparsified = 2.0 * Theta - Theta * S * Theta;

    if (truth) {
        PrecisionDecomposition dec = base_decomposition(out.theta_desparsified, S, *truth);
        const Eigen::MatrixXd delta = Theta - truth->Theta0;
        const Eigen::MatrixXd rem1 = truth->Theta0 * (S - truth->Sigma0) * delta;
        // rem₂ closes the identity exactly; its lemma bound is λ|||Θ̂|||₁|||Δ|||₁
        const Eigen::MatrixXd rem2 =
            -(out.theta_desparsified - truth->Theta0 - dec.linear_term + rem1);
        dec.rem1_norm = sup_norm(rem1);
        dec.rem1_bound =
            sup_norm(truth->Theta0 * (S - truth->Sigma0)) * l1_operator_norm(delta);
        dec.rem1_holds = dec.rem1_norm <= dec.rem1_bound + 1e-10;
        dec.rem2_norm = sup_norm(rem2);
        dec.rem2_bound = lambda * l1_operator_norm(Theta) * l1_operator_norm(delta);
        dec.rem2_holds = dec.rem2_norm <= dec.rem2_bound + 1e-10;
        dec.identity_gap = sup_norm(out.theta_desparsified - truth->Theta0 - dec.linear_term +
                                    rem1 + rem2);
        out.decomposition = std::move(dec);
    }
    return out;
}

}  // namespace hdlasso
