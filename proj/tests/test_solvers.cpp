#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdlasso/simulate.hpp"
#include "hdlasso/solvers.hpp"

using namespace hdlasso;

namespace {

DesignData toy_design() {
    Eigen::MatrixXd X(2, 2);
    X << 1, 1, 1, -1;
    return DesignData(X, Eigen::Vector2d(3.0, 1.0));
}

}  // namespace

TEST_CASE("lasso on the orthonormal toy design") {
    const DesignData data = toy_design();  // X'Y/n = (2, 1)

    const LassoFit fit = solve_lasso(data, 0.5);
    CHECK(fit.beta[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(fit.beta[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fit.kkt_violation <= 1e-8);
    CHECK(kkt_certificate(data, fit, 0.5) <= 1e-10);
    CHECK(fit.subgradient[0] == doctest::Approx(1.0));
    CHECK(fit.subgradient[1] == doctest::Approx(1.0));

    const LassoFit zero = solve_lasso(data, 2.0);
    CHECK(zero.beta.isZero(0.0));
    CHECK(kkt_certificate(data, zero, 2.0) == 0.0);

    // λ→0⁺ approaches least squares, here β = (2, 1)
    const LassoFit ls = solve_lasso(data, 1e-9);
    CHECK(ls.beta[0] == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(ls.beta[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("scale-parameterized lasso matches plain lasso at lambda*sigma") {
    const DesignData data = toy_design();
    const LassoFit a = solve_lasso_scaled(data, 0.5, 1.0);
    const LassoFit b = solve_lasso(data, 0.5);
    CHECK(a.beta == b.beta);  // identical iteration schedule, bit-for-bit

    const LassoFit c = solve_lasso_scaled(data, 0.5, 2.0);
    CHECK(c.beta[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.beta[1] == doctest::Approx(0.0));
    CHECK(c.effective_lambda() == doctest::Approx(1.0));

    const SimulatedDataset ds = generate_dataset(30, 12, 3, 0.3, 1.0, 99);
    const DesignData sim = ds.design();
    const LassoFit d = solve_lasso_scaled(sim, 0.21, 1.7);
    const LassoFit e = solve_lasso(sim, 0.21 * 1.7);
    CHECK(d.beta == e.beta);

    // σ→0⁺ with an invertible Gram matrix recovers least squares
    const Eigen::VectorXd ols =
        gram(ds.X).matrix().ldlt().solve(ds.X.transpose() * ds.Y / 30.0);
    const LassoFit tiny = solve_lasso_scaled(sim, 0.21, 1e-9);
    CHECK((tiny.beta - ols).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("kkt certificate detects perturbations") {
    const DesignData data = toy_design();
    LassoFit fit = solve_lasso(data, 0.5);
    fit.beta[0] += 0.1;
    CHECK(kkt_certificate(data, fit, 0.5) > 1e-3);
}

TEST_CASE("square-root lasso") {
    const DesignData data = toy_design();
    // zero solution iff λ ≥ ‖X'Y/n‖_∞ / ‖Y‖_n = 2/√5
    const double threshold = 2.0 / std::sqrt(5.0);
    const ScaleFit zero = solve_sqrt_lasso(data, threshold + 1e-3);
    CHECK(zero.base.beta.isZero(0.0));
    CHECK(zero.base.sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));

    // λ→0⁺ on an overdetermined design approaches least squares
    Eigen::MatrixXd Xtall(4, 2);
    Xtall << 1, 0, 0, 1, 1, 1, 1, -1;
    const Eigen::Vector4d Ytall(1.0, 2.0, 2.5, -0.5);
    const DesignData tall(Xtall, Ytall);
    const Eigen::Vector2d ols =
        (Xtall.transpose() * Xtall).ldlt().solve(Xtall.transpose() * Ytall);
    const ScaleFit near_ls = solve_sqrt_lasso(tall, 1e-9);
    CHECK(near_ls.base.beta[0] == doctest::Approx(ols[0]).epsilon(1e-6));
    CHECK(near_ls.base.beta[1] == doctest::Approx(ols[1]).epsilon(1e-6));
    CHECK(near_ls.base.sigma ==
          doctest::Approx(norm_n(Ytall - Xtall * ols)).epsilon(1e-6));

    const SimulatedDataset ds = generate_dataset(20, 5, 2, 0.3, 1.0, 7);
    const DesignData sim = ds.design();
    const ScaleFit fit = solve_sqrt_lasso(sim, 0.3);
    CHECK(fit.fixed_point_residual <= 1e-8);
    CHECK(std::abs(fit.base.sigma - std::sqrt(fit.sigma_hat_sq)) <= 1e-8);
    CHECK(kkt_certificate(sim, fit.base, fit.base.effective_lambda()) <= 1e-8);
    CHECK(fit.sigma_tilde_sq >= fit.sigma_hat_sq);

    // residual norm upper bound ‖ε̂‖_n ≤ ‖ε‖_n + λ‖β⁰‖₁
    CHECK(std::sqrt(fit.sigma_hat_sq) <=
          norm_n(ds.eps) + 0.3 * ds.beta0.lpNorm<1>() + 1e-12);
}

TEST_CASE("scaled lasso") {
    const DesignData data = toy_design();
    const ScaleFit big = solve_scaled_lasso(data, 5.0);
    CHECK(big.base.beta.isZero(0.0));
    CHECK(big.sigma_tilde_sq == doctest::Approx(5.0).epsilon(1e-10));  // ‖Y‖_n² = 5

    const SimulatedDataset ds = generate_dataset(30, 10, 3, 0.2, 1.0, 11);
    const DesignData sim = ds.design();
    const ScaleFit fit = solve_scaled_lasso(sim, 0.3);
    CHECK(fit.fixed_point_residual <= 1e-8);
    CHECK(fit.sigma_hat_sq <= fit.sigma_tilde_sq);
    CHECK(kkt_certificate(sim, fit.base, fit.base.effective_lambda()) <= 1e-8);
    CHECK(penalized_rss_identity(sim, fit.base, 0.3, fit.base.sigma) <= 1e-8);
}

TEST_CASE("penalized rss identity") {
    const DesignData data = toy_design();
    const LassoFit fit = solve_lasso_scaled(data, 0.5, 2.0);  // β̂ = (1, 0)
    CHECK(penalized_rss_identity(data, fit, 0.5, 2.0) <= 1e-10);

    const LassoFit zero = solve_lasso_scaled(data, 5.0, 1.0);
    CHECK(zero.beta.isZero(0.0));
    CHECK(penalized_rss_identity(data, zero, 5.0, 1.0) <= 1e-12);

    const SimulatedDataset ds = generate_dataset(50, 20, 4, 0.3, 1.0, 21);
    const DesignData sim = ds.design();
    const LassoFit f = solve_lasso_scaled(sim, 0.2, 1.3);
    CHECK(penalized_rss_identity(sim, f, 0.2, 1.3) <= 1e-8);
}

TEST_CASE("solver errors") {
    const DesignData data = toy_design();
    CHECK_THROWS_AS(solve_lasso(data, 0.0), DomainError);
    CHECK_THROWS_AS(solve_lasso(data, -1.0), DomainError);
    CHECK_THROWS_AS(solve_lasso_scaled(data, 0.5, 0.0), DomainError);

    // exact fit drives the square-root scale to zero
    Eigen::MatrixXd X(3, 1);
    X << 1, 2, 3;
    const DesignData exact(X, Eigen::Vector3d(2, 4, 6));
    CHECK_THROWS_AS(solve_sqrt_lasso(exact, 1e-6), DegenerateScaleError);
}

TEST_CASE("objective decreases across sweeps on a hard instance") {
    // correlated design with p > n exercises many sweeps; the solver asserts
    // monotonicity internally and would throw if it failed
    const SimulatedDataset ds = generate_dataset(30, 60, 5, 0.8, 1.0, 33);
    const DesignData sim = ds.design();
    const LassoFit fit = solve_lasso(sim, 0.15);
    CHECK(fit.kkt_violation <= 1e-8);
    CHECK(fit.subgradient.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}
