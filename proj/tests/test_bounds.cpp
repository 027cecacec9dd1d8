#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdlasso/bounds.hpp"
#include "hdlasso/simulate.hpp"
#include "hdlasso/solvers.hpp"

using namespace hdlasso;

TEST_CASE("lasso prediction bound: formula constants") {
    // Σ̂ = I so φ̂² = 1; noiseless responses make every premise exact
    const Eigen::MatrixXd X = 2.0 * Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(4);
    beta0[0] = 1.0;
    beta0[1] = -0.5;
    const DesignData data(X, X * beta0);
    const Eigen::VectorXd eps = Eigen::VectorXd::Zero(4);
    const LassoFit fit = solve_lasso(data, 0.5);

    const BoundReport rep = evaluate_bound(TheoremId::LassoPrediction, data, beta0, eps, 0.5,
                                           0.25, 0.0, beta0, fit);
    CHECK(rep.applicable);
    CHECK(rep.inputs.at("L") == doctest::Approx(3.0));
    CHECK(rep.inputs.at("phi2") == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.rhs == doctest::Approx(1.125).epsilon(1e-7));  // (λ+λ_ε)²·|S|/φ̂²
    CHECK(rep.holds);

    // precondition failures produce inapplicability reports, not throws
    const BoundReport bad =
        evaluate_bound(TheoremId::LassoPrediction, data, beta0, eps, 0.2, 0.25, 0.0, beta0, fit);
    CHECK_FALSE(bad.applicable);
    CHECK_FALSE(bad.holds);
}

TEST_CASE("lasso bounds hold across seeded Monte Carlo reps") {
    int applicable = 0, holds = 0;
    for (int r = 0; r < 40; ++r) {
        const SimulatedDataset ds = generate_dataset(40, 30, 3, 0.0, 1.0, 404, r);
        const DesignData data = ds.design();
        const double lam_eps = lambda_max_noise(ds.X, ds.eps);
        const double lambda = 2.0 * lam_eps;
        const LassoFit fit = solve_lasso(data, lambda);
        for (double delta : {0.0, 0.1, 0.5}) {
            const TheoremId id =
                delta == 0.0 ? TheoremId::LassoPrediction : TheoremId::LassoEll1;
            const BoundReport rep =
                evaluate_bound(id, data, ds.beta0, ds.eps, lambda, lam_eps, delta, ds.beta0, fit);
            if (rep.applicable) {
                ++applicable;
                if (rep.holds) ++holds;
            }
        }
    }
    CHECK(applicable == 120);
    CHECK(holds == applicable);
}

TEST_CASE("square-root bounds on a small-signal instance") {
    const double eta = std::sqrt(2.0) - 1.0;
    int qualifying = 0;
    for (int r = 0; r < 20; ++r) {
        const SimulatedDataset ds = generate_dataset(150, 12, 1, 0.0, 1.0, 505, r, 0.02);
        const DesignData data = ds.design();
        const double lam0 = lambda_max_noise(ds.X, ds.eps) / norm_n(ds.eps);
        const double lambda = 2.0 * lam0 / eta;
        const ScaleFit fit = solve_sqrt_lasso(data, lambda);

        const BoundReport prop = evaluate_bound(TheoremId::SqrtPredictionProp, data, ds.beta0,
                                                ds.eps, lambda, 0.0, ds.beta0, fit);
        CHECK(prop.applicable);
        CHECK(prop.holds);

        const BoundReport thm = evaluate_bound(TheoremId::SqrtPredictionThm, data, ds.beta0,
                                               ds.eps, lambda, 0.0, ds.beta0, fit);
        const BoundReport ell1 = evaluate_bound(TheoremId::SqrtEll1Thm, data, ds.beta0, ds.eps,
                                                lambda, 0.3, ds.beta0, fit);
        if (thm.applicable) {
            ++qualifying;
            CHECK(thm.holds);
            CHECK(ell1.applicable);
            CHECK(ell1.holds);
        }
    }
    CHECK(qualifying > 10);  // the smallness condition genuinely bites here
}

TEST_CASE("phi2 hint short-circuits consistently") {
    const SimulatedDataset ds = generate_dataset(30, 10, 2, 0.2, 1.0, 606);
    const DesignData data = ds.design();
    const double lam_eps = lambda_max_noise(ds.X, ds.eps);
    const LassoFit fit = solve_lasso(data, 2.0 * lam_eps);
    const BoundReport full = evaluate_bound(TheoremId::LassoPrediction, data, ds.beta0, ds.eps,
                                            2.0 * lam_eps, lam_eps, 0.0, ds.beta0, fit);
    const BoundReport hinted =
        evaluate_bound(TheoremId::LassoPrediction, data, ds.beta0, ds.eps, 2.0 * lam_eps,
                       lam_eps, 0.0, ds.beta0, fit, {}, full.inputs.at("phi2"));
    CHECK(full.rhs == doctest::Approx(hinted.rhs).epsilon(1e-14));
}

TEST_CASE("ell1 restricted oracle") {
    // β⁰ = 0: the constraint is vacuous and the zero vector is optimal
    {
        const Eigen::MatrixXd X = std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2);
        const DesignData data(X, Eigen::Vector2d(0.1, -0.2));
        const Ell1OracleResult r =
            ell1_restricted_oracle(data, Eigen::Vector2d::Zero(), 0.5, 1.0, 2);
        CHECK(r.beta_star.isZero(0.0));
        CHECK(r.objective == doctest::Approx(0.0));
        CHECK(r.lemma_holds);
    }
    // identity design, β⁰ = (1,0), small λ*: the oracle keeps β⁰ itself
    {
        const Eigen::MatrixXd X = std::sqrt(2.0) * Eigen::MatrixXd::Identity(2, 2);
        const Eigen::Vector2d beta0(1.0, 0.0);
        const DesignData data(X, X * beta0);
        const Ell1OracleResult r = ell1_restricted_oracle(data, beta0, 0.1, 1.0, 2);
        CHECK((r.beta_star - beta0).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(r.support.members() == std::vector<int>{0});
        CHECK(r.objective == doctest::Approx(0.01).epsilon(1e-7));
        CHECK(r.lemma_holds);
    }
    // post-hoc lemma inequality on random instances
    for (int t = 0; t < 5; ++t) {
        const SimulatedDataset ds = generate_dataset(20, 5, 2, 0.3, 1.0, 707, t);
        const DesignData data = ds.design();
        const Ell1OracleResult r = ell1_restricted_oracle(data, ds.beta0, 0.4, 2.0, 3);
        CHECK(r.lemma_holds);
        CHECK(r.beta_star.lpNorm<1>() >= ds.beta0.lpNorm<1>() - 1e-9);
    }

    const SimulatedDataset ds = generate_dataset(10, 4, 1, 0.0, 1.0, 808);
    CHECK_THROWS_AS(ell1_restricted_oracle(ds.design(), ds.beta0, 0.5, 1.0, 7), DomainError);
}

TEST_CASE("ell1 restricted corollary evaluates") {
    const SimulatedDataset ds = generate_dataset(40, 8, 2, 0.0, 1.0, 909);
    const DesignData data = ds.design();
    const double lam_eps = lambda_max_noise(ds.X, ds.eps);
    const double lambda = 2.0 * lam_eps;
    const double delta = 0.1;
    const double lam_star = lambda + lam_eps + delta * (lambda - lam_eps);
    const double L =
        (lambda + lam_eps + delta * (lambda - lam_eps)) / ((1.0 - delta) * (lambda - lam_eps));
    const LassoFit fit = solve_lasso(data, lambda);
    const Ell1OracleResult oracle = ell1_restricted_oracle(data, ds.beta0, lam_star, L, 3);
    const BoundReport rep = evaluate_bound(TheoremId::Ell1RestrictedCorollary, data, ds.beta0,
                                           ds.eps, lambda, lam_eps, delta, oracle.beta_star, fit);
    CHECK(rep.applicable);
    CHECK(std::isfinite(rep.lhs));
    CHECK(std::isfinite(rep.rhs));
}
