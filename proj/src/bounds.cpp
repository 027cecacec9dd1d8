#include "hdlasso/bounds.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <functional>
#include <limits>

namespace hdlasso {

namespace {

constexpr double kHoldsSlack = 1e-10;
const double kEta = std::sqrt(2.0) - 1.0;

// φ̂² = 0 means the compatibility cone meets the null space of X; the
// oracle bound is then vacuous and the +0.0 here turns |S|/φ̂² into +inf.
double phi2_or_unit(const GramMatrix& Sigma, double L, const IndexSet& S,
                    const CompatOptions& copts, BoundReport& rep,
                    const std::optional<double>& hint) {
    if (S.empty()) return 1.0;  // the |S| factor is zero, value irrelevant
    const double v =
        std::max(0.0, hint ? *hint : compatibility_constant(Sigma, L, S, copts).value);
    rep.inputs["phi2"] = v;
    return v;
}

BoundReport not_applicable(TheoremId id, const std::string& why) {
    BoundReport rep;
    rep.theorem = id;
    rep.applicable = false;
    rep.holds = false;
    rep.lhs = rep.rhs = std::numeric_limits<double>::quiet_NaN();
    rep.note = why;
    return rep;
}

}  // namespace

const char* theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::LassoPrediction: return "lasso-prediction";
        case TheoremId::LassoEll1: return "lasso-ell1";
        case TheoremId::Ell1RestrictedCorollary: return "ell1-restricted-corollary";
        case TheoremId::SqrtPredictionProp: return "sqrt-prediction-prop";
        case TheoremId::SqrtPredictionThm: return "sqrt-prediction-thm";
        case TheoremId::SqrtEll1Thm: return "sqrt-ell1-thm";
        case TheoremId::SupNorm: return "supnorm";
    }
    return "unknown";
}

BoundReport evaluate_bound(TheoremId id, const DesignData& data, const Eigen::VectorXd& beta0,
                           const Eigen::VectorXd& eps, double lambda, double lambda_eps,
                           double delta, const Eigen::VectorXd& candidate, const LassoFit& fit,
                           const CompatOptions& copts, std::optional<double> phi2_hint) {
    const double realized = lambda_max_noise(data.X, eps);
    if (lambda_eps < realized - 1e-12)
        return not_applicable(id, "lambda_eps below the realized noise level");
    if (lambda <= lambda_eps) return not_applicable(id, "lambda <= lambda_eps");
    const bool uses_delta = id != TheoremId::LassoPrediction;
    if (uses_delta && !(delta >= 0.0 && delta < 1.0))
        return not_applicable(id, "delta outside [0,1)");

    BoundReport rep;
    rep.theorem = id;
    rep.inputs["lambda"] = lambda;
    rep.inputs["lambda_eps"] = lambda_eps;
    rep.inputs["realized_noise"] = realized;

    const GramMatrix Sigma = gram(data.X);
    const Eigen::VectorXd err_hat = fit.beta - beta0;
    const Eigen::VectorXd err_cand = candidate - beta0;
    const double pred_hat = (data.X * err_hat).squaredNorm() / data.n();
    const double pred_cand = (data.X * err_cand).squaredNorm() / data.n();
    const IndexSet S = IndexSet::active_set(candidate);
    rep.inputs["S_size"] = S.size();

    switch (id) {
        case TheoremId::LassoPrediction: {
            const double L = (lambda + lambda_eps) / (lambda - lambda_eps);
            rep.inputs["L"] = L;
            const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
            rep.lhs = pred_hat;
            rep.rhs = pred_cand +
                      (lambda + lambda_eps) * (lambda + lambda_eps) * S.size() / phi2;
            break;
        }
        case TheoremId::LassoEll1: {
            const double gap = lambda - lambda_eps;
            const double L = (lambda + lambda_eps + delta * gap) / ((1.0 - delta) * gap);
            const double lam_star = lambda + lambda_eps + delta * gap;
            rep.inputs["delta"] = delta;
            rep.inputs["L"] = L;
            const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
            rep.lhs = 2.0 * delta * gap * err_hat.lpNorm<1>() + pred_hat;
            rep.rhs = 2.0 * delta * gap * err_cand.lpNorm<1>() + pred_cand +
                      lam_star * lam_star * S.size() / phi2;
            break;
        }
        case TheoremId::Ell1RestrictedCorollary: {
            const double gap = lambda - lambda_eps;
            const double L = (lambda + lambda_eps + delta * gap) / ((1.0 - delta) * gap);
            const double lam_star = lambda + lambda_eps + delta * gap;
            const double lam_big = lambda + lambda_eps + 3.0 * delta * gap;
            rep.inputs["delta"] = delta;
            rep.inputs["L"] = L;
            rep.inputs["lambda_star"] = lam_star;
            const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
            rep.lhs = 2.0 * delta * gap * err_hat.lpNorm<1>() + pred_hat;
            rep.rhs = (lam_big / lam_star) * pred_cand +
                      lam_big * lam_star * S.size() / phi2;
            break;
        }
        default:
            throw DomainError("evaluate_bound: theorem needs the square-root overload");
    }
    rep.holds = rep.lhs <= rep.rhs + kHoldsSlack;
    return rep;
}

BoundReport evaluate_bound(TheoremId id, const DesignData& data, const Eigen::VectorXd& beta0,
                           const Eigen::VectorXd& eps, double lambda, double delta,
                           const Eigen::VectorXd& candidate, const ScaleFit& fit,
                           const CompatOptions& copts, std::optional<double> phi2_hint) {
    const double noise_inner = lambda_max_noise(data.X, eps);
    const double eps_norm = norm_n(eps);
    const double res_norm = std::sqrt(fit.sigma_hat_sq);

    BoundReport rep;
    rep.theorem = id;
    rep.inputs["lambda"] = lambda;
    rep.inputs["eps_norm"] = eps_norm;
    rep.inputs["residual_norm"] = res_norm;

    const GramMatrix Sigma = gram(data.X);
    const Eigen::VectorXd err_hat = fit.base.beta - beta0;
    const Eigen::VectorXd err_cand = candidate - beta0;
    const double pred_hat = (data.X * err_hat).squaredNorm() / data.n();
    const double pred_cand = (data.X * err_cand).squaredNorm() / data.n();
    const IndexSet S = IndexSet::active_set(candidate);
    rep.inputs["S_size"] = S.size();

    switch (id) {
        case TheoremId::SqrtPredictionProp: {
            if (res_norm <= 0.0) return not_applicable(id, "zero residual: lambda0_hat undefined");
            const double lam0_hat = noise_inner / res_norm;
            if (lambda <= lam0_hat) return not_applicable(id, "lambda <= lambda0_hat");
            const double L = (lambda + lam0_hat) / (lambda - lam0_hat);
            rep.inputs["lambda0_hat"] = lam0_hat;
            rep.inputs["L"] = L;
            const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
            rep.lhs = pred_hat;
            rep.rhs = pred_cand + (lambda + lam0_hat) * (lambda + lam0_hat) * res_norm *
                                      res_norm * S.size() / phi2;
            break;
        }
        case TheoremId::SqrtPredictionThm:
        case TheoremId::SqrtEll1Thm: {
            if (eps_norm <= 0.0) return not_applicable(id, "zero noise: lambda0 undefined");
            const double lam0 = noise_inner / eps_norm;
            rep.inputs["lambda0"] = lam0;
            rep.inputs["eta"] = kEta;
            if (lambda * kEta <= lam0) return not_applicable(id, "lambda*eta <= lambda0");
            const double beta0_cap =
                eps_norm * (lambda * kEta - lam0) / (2.0 * lam0 * lambda);
            rep.inputs["beta0_l1_cap"] = beta0_cap;
            if (beta0.lpNorm<1>() > beta0_cap)
                return not_applicable(id, "beta0 l1 norm exceeds the smallness condition");
            const double gap = lambda * kEta - lam0;
            const double sum = lambda * kEta + lam0;
            const double scale2 = (sum / (2.0 * lam0)) * (sum / (2.0 * lam0));
            if (id == TheoremId::SqrtPredictionThm) {
                const double L = sum / gap;
                rep.inputs["L"] = L;
                const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
                rep.lhs = pred_hat;
                rep.rhs = pred_cand + (sum / kEta) * (sum / kEta) * scale2 * eps_norm *
                                          eps_norm * S.size() / phi2;
            } else {
                if (!(delta >= 0.0 && delta < 1.0))
                    return not_applicable(id, "delta outside [0,1)");
                rep.inputs["delta"] = delta;
                const double L = (sum + delta * gap) / ((1.0 - delta) * gap);
                rep.inputs["L"] = L;
                const double phi2 = phi2_or_unit(Sigma, L, S, copts, rep, phi2_hint);
                const double front = (sum + delta * gap) / kEta;
                rep.lhs = 2.0 * delta * gap * eps_norm * err_hat.lpNorm<1>() + pred_hat;
                rep.rhs = 2.0 * delta * gap * eps_norm * err_cand.lpNorm<1>() + pred_cand +
                          front * front * scale2 * eps_norm * eps_norm * S.size() / phi2;
            }
            break;
        }
        default:
            throw DomainError("evaluate_bound: theorem needs the plain-Lasso overload");
    }
    rep.holds = rep.lhs <= rep.rhs + kHoldsSlack;
    return rep;
}

namespace {

// All supports of size <= cap, lexicographic.
void enumerate_supports(int p, int cap, std::vector<std::vector<int>>& out) {
    out.push_back({});
    std::vector<int> cur;
    const std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == cap) return;
        for (int j = start; j < p; ++j) {
            cur.push_back(j);
            out.push_back(cur);
            rec(j + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

Ell1OracleResult ell1_restricted_oracle(const DesignData& data, const Eigen::VectorXd& beta0,
                                        double lambda_star, double L, int support_cap,
                                        const CompatOptions& copts) {
    if (support_cap > 6) throw DomainError("ell1_restricted_oracle: support_cap exceeds 6");
    if (support_cap < 0) throw DomainError("ell1_restricted_oracle: negative support_cap");
    if (lambda_star <= 0.0 || L <= 0.0)
        throw DomainError("ell1_restricted_oracle: lambda_star and L must be positive");
    if (beta0.size() != data.p()) throw DimensionError("ell1_restricted_oracle: beta0 length");

    const int p = data.p();
    const GramMatrix Sigma = gram(data.X);
    const Eigen::MatrixXd& Sig = Sigma.matrix();
    const Eigen::VectorXd sb0 = Sig * beta0;
    const double c = beta0.lpNorm<1>();

    std::map<std::vector<int>, double> phi2_cache;
    const auto phi2_at = [&](const IndexSet& S) {
        if (S.empty()) return 1.0;
        auto it = phi2_cache.find(S.members());
        if (it != phi2_cache.end()) return it->second;
        const double v = compatibility_constant(Sigma, L, S, copts).value;
        phi2_cache.emplace(S.members(), v);
        return v;
    };
    const auto objective = [&](const Eigen::VectorXd& beta) {
        const IndexSet S = IndexSet::active_set(beta, 1e-12);
        const double pred = (data.X * (beta - beta0)).squaredNorm() / data.n();
        const double pen =
            S.empty() ? 0.0 : lambda_star * lambda_star * S.size() / phi2_at(S);
        return pred + pen;
    };

    std::vector<std::vector<int>> supports;
    enumerate_supports(p, support_cap, supports);

    Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
    double best_obj = std::numeric_limits<double>::infinity();
    bool found = false;
    const auto consider = [&](const Eigen::VectorXd& beta) {
        if (beta.lpNorm<1>() < c - 1e-10) return;
        const double obj = objective(beta);
        if (obj < best_obj) {
            best_obj = obj;
            best = beta;
            found = true;
        }
    };

    for (const auto& T : supports) {
        const int k = static_cast<int>(T.size());
        if (k == 0) {
            consider(Eigen::VectorXd::Zero(p));
            continue;
        }
        Eigen::MatrixXd StS(k, k);
        Eigen::VectorXd rhs(k);
        for (int a = 0; a < k; ++a) {
            rhs[a] = sb0[T[a]];
            for (int b = 0; b < k; ++b) StS(a, b) = Sig(T[a], T[b]);
        }
        // unconstrained minimizer on the support
        const Eigen::VectorXd bt = StS.ldlt().solve(rhs);
        if (bt.allFinite()) {
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
            for (int a = 0; a < k; ++a) beta[T[a]] = bt[a];
            consider(beta);
        }
        // minimizers on the ℓ1 sphere ‖β‖₁ = c, one KKT solve per sign face
        for (std::uint64_t bits = 0; bits < (1ULL << k); ++bits) {
            Eigen::VectorXd s(k);
            for (int a = 0; a < k; ++a) s[a] = (bits >> a) & 1 ? -1.0 : 1.0;
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k + 1, k + 1);
            M.topLeftCorner(k, k) = 2.0 * StS;
            M.topRightCorner(k, 1) = s;
            M.bottomLeftCorner(1, k) = s.transpose();
            Eigen::VectorXd r(k + 1);
            r.head(k) = 2.0 * rhs;
            r[k] = c;
            const Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(M).solve(r);
            if (!sol.allFinite()) continue;
            bool in_orthant = true;
            for (int a = 0; a < k; ++a)
                if (s[a] * sol[a] < -1e-12) in_orthant = false;
            if (!in_orthant) continue;
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
            for (int a = 0; a < k; ++a) beta[T[a]] = sol[a];
            consider(beta);
        }
    }
    if (!found) throw DomainError("ell1_restricted_oracle: no feasible candidate found");

    Ell1OracleResult out;
    out.beta_star = best;
    out.objective = best_obj;
    out.support = IndexSet::active_set(best, 1e-12);
    const double pred = (data.X * (best - beta0)).squaredNorm() / data.n();
    out.lemma_lhs = lambda_star * (best - beta0).lpNorm<1>();
    double phi2_one = 1.0;
    if (!out.support.empty())
        phi2_one = compatibility_constant(Sigma, 1.0, out.support, copts).value;
    out.lemma_rhs =
        pred + lambda_star * lambda_star * out.support.size() / (out.support.empty() ? 1.0 : phi2_one);
    if (out.support.empty()) out.lemma_rhs = pred;
    out.lemma_holds = out.lemma_lhs <= out.lemma_rhs + kHoldsSlack;
    return out;
}

}  // namespace hdlasso
