#include "hdlasso/inference.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "hdlasso/stats.hpp"

namespace hdlasso {

namespace {

struct NodeFit {
    Eigen::VectorXd gamma;
    double tau_hat_sq = 0.0;
    double tau_solved = 0.0;
};

// Square-root Lasso of one column on the rest, entirely in Gram coordinates:
// minimize ‖X_j - X_{-j}γ‖_n + λ̲‖γ‖₁ through the scale fixed point
// τ² = ‖X_j - X_{-j}γ̂(τ)‖_n².
NodeFit node_sqrt_lasso(const Eigen::MatrixXd& Sigma_sub, const Eigen::VectorXd& b_sub,
                        double sjj, double lambda_node, const ScaleIterOptions& opts, int node) {
    NodeFit out;
    const auto rss_sq = [&](const Eigen::VectorXd& gamma, const Eigen::VectorXd& gradient) {
        return std::max(0.0, sjj - b_sub.dot(gamma) - gamma.dot(gradient));
    };

    double tau = std::sqrt(sjj);
    if (tau < opts.sigma_min)
        throw DegenerateScaleError("nodewise_sqrt_lasso: zero-norm column", node);

    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(b_sub.size());
    double prev_step = 0.0;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
        QuadLassoResult q = cd_quadratic_lasso(Sigma_sub, b_sub, lambda_node * tau, opts.cd, gamma);
        gamma = std::move(q.beta);
        double tau_next = std::sqrt(rss_sq(gamma, q.gradient));
        double step = tau_next - tau;
        if (prev_step * step < 0.0) {
            step *= 0.5;
            tau_next = tau + step;
        }
        prev_step = step;
        if (tau_next < opts.sigma_min)
            throw DegenerateScaleError("nodewise_sqrt_lasso: residual scale collapsed", node);
        const bool done = std::abs(step) < opts.sigma_tol;
        tau = tau_next;
        if (done) break;
    }
    if (it >= opts.max_iters)
        throw ConvergenceError("nodewise_sqrt_lasso: scale fixed point stalled (node " +
                                   std::to_string(node) + ")",
                               std::abs(prev_step), it);

    QuadLassoResult q = cd_quadratic_lasso(Sigma_sub, b_sub, lambda_node * tau, opts.cd, gamma);
    out.gamma = std::move(q.beta);
    out.tau_hat_sq = rss_sq(out.gamma, q.gradient);
    out.tau_solved = tau;
    return out;
}

}  // namespace

NodewiseInverse nodewise_sqrt_lasso(const Eigen::MatrixXd& X, double lambda_node,
                                    const ScaleIterOptions& opts) {
    const int p = static_cast<int>(X.cols());
    if (lambda_node < 0.0) throw DomainError("nodewise_sqrt_lasso: negative tuning parameter");

    NodewiseInverse nw;
    nw.lambda_node = lambda_node;
    nw.Theta = Eigen::MatrixXd::Zero(p, p);
    nw.C = Eigen::MatrixXd::Identity(p, p);
    nw.tau_hat_sq = Eigen::VectorXd::Zero(p);
    nw.tau_tilde_sq = Eigen::VectorXd::Zero(p);

    const Eigen::MatrixXd Sigma = gram(X).matrix();

    if (lambda_node == 0.0) {
        // exact inverse through the unpenalized node-wise projections
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Sigma);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw SingularMatrixError("nodewise_sqrt_lasso: Gram matrix not invertible at lambda 0");
        const Eigen::MatrixXd Theta = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
        nw.Theta = Theta;
        for (int j = 0; j < p; ++j) {
            const double tau_sq = 1.0 / Theta(j, j);
            if (!(tau_sq > 0.0))
                throw DegenerateScaleError("nodewise_sqrt_lasso: nonpositive residual variance", j);
            nw.tau_hat_sq[j] = tau_sq;
            nw.tau_tilde_sq[j] = tau_sq;
            nw.C.col(j) = Theta.col(j) * tau_sq;
        }
        return nw;
    }

    Eigen::MatrixXd Sigma_sub(p - 1, p - 1);
    Eigen::VectorXd b_sub(p - 1);
    for (int j = 0; j < p; ++j) {
        for (int a = 0, ia = 0; a < p; ++a) {
            if (a == j) continue;
            b_sub[ia] = Sigma(a, j);
            for (int b = 0, ib = 0; b < p; ++b) {
                if (b == j) continue;
                Sigma_sub(ia, ib) = Sigma(a, b);
                ++ib;
            }
            ++ia;
        }
        const NodeFit fit = node_sqrt_lasso(Sigma_sub, b_sub, Sigma(j, j), lambda_node, opts, j);
        if (!(fit.tau_hat_sq > 0.0))
            throw DegenerateScaleError("nodewise_sqrt_lasso: zero residual at node", j);
        const double tau_hat = std::sqrt(fit.tau_hat_sq);
        nw.tau_hat_sq[j] = fit.tau_hat_sq;
        nw.tau_tilde_sq[j] =
            fit.tau_hat_sq + lambda_node * tau_hat * fit.gamma.lpNorm<1>();
        for (int a = 0, ia = 0; a < p; ++a) {
            if (a == j) continue;
            nw.C(a, j) = -fit.gamma[ia++];
        }
        nw.Theta.col(j) = nw.C.col(j) / nw.tau_tilde_sq[j];
    }
    return nw;
}

double nodewise_kkt_violation(const Eigen::MatrixXd& X, const NodewiseInverse& nw) {
    const int p = nw.p();
    if (X.cols() != p) throw DimensionError("nodewise_kkt_violation: shape mismatch");
    const Eigen::MatrixXd G = gram(X).matrix() * nw.C;  // column j: node-j gradient off j
    double viol = 0.0;
    for (int j = 0; j < p; ++j) {
        const double lam_eff = nw.lambda_node * std::sqrt(nw.tau_hat_sq[j]);
        for (int k = 0; k < p; ++k) {
            if (k == j) continue;
            const double gamma_kj = -nw.C(k, j);
            const double v = gamma_kj != 0.0
                                 ? std::abs(G(k, j) - lam_eff * (gamma_kj > 0 ? 1.0 : -1.0))
                                 : std::max(0.0, std::abs(G(k, j)) - lam_eff);
            viol = std::max(viol, v);
        }
    }
    return viol;
}

Eigen::VectorXd desparsify(const DesignData& data, const LassoFit& fit,
                           const NodewiseInverse& nw) {
    if (fit.beta.size() != data.p() || nw.p() != data.p())
        throw DimensionError("desparsify: shape mismatch");
    const Eigen::VectorXd correlation =
        data.X.transpose() * (data.Y - data.X * fit.beta) / data.n();
    return fit.beta + nw.Theta.transpose() * correlation;
}

DesparsifiedResult confidence_intervals(const Eigen::VectorXd& b_hat, const NodewiseInverse& nw,
                                        double sigma_hat, int n, double level,
                                        double remainder_bound) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence_intervals: level outside (0,1)");
    if (!(sigma_hat > 0.0)) throw DomainError("confidence_intervals: sigma must be positive");
    if (b_hat.size() != nw.p()) throw DimensionError("confidence_intervals: shape mismatch");

    DesparsifiedResult out;
    out.b = b_hat;
    out.level = level;
    out.sigma_used = sigma_hat;
    out.remainder_bound = remainder_bound;
    const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
    out.se = sigma_hat * nw.tau_hat_sq.cwiseSqrt().cwiseQuotient(nw.tau_tilde_sq) /
             std::sqrt(static_cast<double>(n));
    out.ci_lower = b_hat - z * out.se;
    out.ci_upper = b_hat + z * out.se;
    return out;
}

LinearityCheck sqnorm_linearity_check(const DesignData& data, const Eigen::VectorXd& beta0,
                                      const Eigen::VectorXd& eps, const LassoFit& fit,
                                      const NodewiseInverse& nw) {
    const int p = data.p();
    if (beta0.size() != p || eps.size() != data.n() || nw.p() != p)
        throw DimensionError("sqnorm_linearity_check: shape mismatch");

    LinearityCheck out;
    const Eigen::VectorXd scale =
        nw.tau_tilde_sq.cwiseQuotient(nw.tau_hat_sq.cwiseSqrt());  // τ̃²/τ̂ per node
    out.v = data.X * nw.Theta * scale.asDiagonal();

    const Eigen::MatrixXd Sigma = gram(data.X).matrix();
    const Eigen::VectorXd delta = fit.beta - beta0;
    const Eigen::VectorXd defect = delta - (Sigma * nw.Theta).transpose() * delta;
    out.rem = scale.asDiagonal() * defect;
    out.bound = nw.lambda_node * delta.lpNorm<1>();
    out.rem_within_bound = (out.rem.cwiseAbs().maxCoeff() <= out.bound + 1e-10);

    for (int j = 0; j < p; ++j)
        out.max_vnorm_error = std::max(out.max_vnorm_error, std::abs(norm_n(out.v.col(j)) - 1.0));

    const Eigen::VectorXd b_hat = desparsify(data, fit, nw);
    const Eigen::VectorXd lhs = scale.asDiagonal() * (b_hat - beta0);
    const Eigen::VectorXd linear = out.v.transpose() * eps / data.n();
    out.identity_error = (lhs - linear - out.rem).cwiseAbs().maxCoeff();
    return out;
}

BoundReport supnorm_bias_bound(const Eigen::MatrixXd& Theta0, const Eigen::MatrixXd& Sigma0,
                               const Eigen::MatrixXd& X, const Eigen::VectorXd& eps,
                               double lambda, const Eigen::VectorXd& beta_hat,
                               const Eigen::VectorXd& beta0) {
    const int p = static_cast<int>(X.cols());
    if (Theta0.rows() != p || Sigma0.rows() != p || beta_hat.size() != p || beta0.size() != p)
        throw DimensionError("supnorm_bias_bound: shape mismatch");

    BoundReport rep;
    rep.theorem = TheoremId::SupNorm;
    const Eigen::MatrixXd Sigma_hat = gram(X).matrix();
    const double theta_l1 = l1_operator_norm(Theta0);
    const double noise_term = sup_norm(Theta0 * (X.transpose() * eps)) / X.rows();
    const double gram_gap = sup_norm(Sigma_hat - Sigma0);
    const double ell1_err = (beta_hat - beta0).lpNorm<1>();

    rep.lhs = sup_norm(beta_hat - beta0);
    rep.rhs = noise_term + theta_l1 * (gram_gap * ell1_err + lambda);
    rep.holds = rep.lhs <= rep.rhs + 1e-10;
    rep.inputs["lambda"] = lambda;
    rep.inputs["theta0_l1"] = theta_l1;
    rep.inputs["noise_term"] = noise_term;
    rep.inputs["gram_gap"] = gram_gap;
    rep.inputs["ell1_error"] = ell1_err;
    return rep;
}

EqualCorrelation equal_correlation_theta(int p, double rho) {
    if (p < 2) throw DomainError("equal_correlation_theta: p must be >= 2");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("equal_correlation_theta: rho outside [0,1)");

    EqualCorrelation out;
    out.Sigma0 = Eigen::MatrixXd::Constant(p, p, rho);
    out.Sigma0.diagonal().setOnes();
    out.Theta0 = -(rho / ((1.0 - rho) * (1.0 - rho + p * rho))) * Eigen::MatrixXd::Ones(p, p);
    out.Theta0.diagonal().array() += 1.0 / (1.0 - rho);
    out.l1_norm = (1.0 + (2.0 * p - 3.0) * rho) / ((1.0 - rho) * (1.0 + (p - 1.0) * rho));
    out.bound = 2.0 / (1.0 - rho);
    return out;
}

}  // namespace hdlasso
