#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "hdlasso/precision.hpp"
#include "hdlasso/simulate.hpp"

using namespace hdlasso;

TEST_CASE("small-p inverse and its linearization") {
    const SimulatedDataset ds = generate_dataset(300, 6, 0, 0.4, 1.0, 71);
    const PopulationTruth truth{ds.Sigma0, ds.Theta0};
    const GramMatrix Sigma = gram(ds.X);

    const PrecisionEstimate est = precision_smallp(Sigma, truth);
    CHECK(sup_norm(Sigma.matrix() * est.theta_raw - Eigen::MatrixXd::Identity(6, 6)) <= 1e-10);
    REQUIRE(est.decomposition.has_value());
    CHECK(est.decomposition->rem1_holds);
    CHECK(est.decomposition->identity_gap <= 1e-12);

    // Σ̂ = Σ₀ exactly: W = 0, Θ̂ = Θ₀, rem₁ = 0
    const PrecisionEstimate clean =
        precision_smallp(GramMatrix::from_matrix(ds.Sigma0), truth);
    CHECK(sup_norm(clean.theta_raw - ds.Theta0) <= 1e-12);
    CHECK(clean.decomposition->rem1_norm <= 1e-12);

    // second-order remainder is much smaller than the linear term at large n
    const SimulatedDataset big = generate_dataset(10000, 5, 0, 0.0, 1.0, 72);
    const PrecisionEstimate mc =
        precision_smallp(gram(big.X), PopulationTruth{big.Sigma0, big.Theta0});
    CHECK(mc.decomposition->rem1_norm <= 0.2 * sup_norm(mc.decomposition->linear_term));

    Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(precision_smallp(GramMatrix::from_matrix(singular)), SingularMatrixError);
}

TEST_CASE("nodewise desparsified precision") {
    const SimulatedDataset ds = generate_dataset(200, 10, 0, 0.3, 1.0, 73);
    const PopulationTruth truth{ds.Sigma0, ds.Theta0};
    const double lambda_node = std::sqrt(std::log(10.0) / 200.0);

    const PrecisionEstimate est = desparsified_nodewise_precision(ds.X, lambda_node, truth);
    CHECK(sup_norm(est.theta_desparsified - est.theta_desparsified.transpose()) <= 1e-12);
    REQUIRE(est.decomposition.has_value());
    CHECK(est.decomposition->rem1_holds);
    CHECK(est.decomposition->rem2_holds);
    CHECK(est.decomposition->identity_gap <= 1e-10);

    // exact-inverse fixed point: λ̲ = 0 gives Θ̂_de = Θ̂ = Σ̂⁻¹
    const PrecisionEstimate exact = desparsified_nodewise_precision(ds.X, 0.0);
    CHECK(sup_norm(exact.theta_desparsified - exact.theta_raw) <= 1e-8);
}

TEST_CASE("graphical lasso endpoints") {
    const SimulatedDataset ds = generate_dataset(150, 6, 0, 0.4, 1.0, 74);
    const GramMatrix Sigma = gram(ds.X);
    const Eigen::MatrixXd direct =
        Sigma.matrix().ldlt().solve(Eigen::MatrixXd::Identity(6, 6));

    const PrecisionEstimate unpen = graphical_lasso(Sigma, 0.0);
    CHECK(sup_norm(unpen.theta_raw - direct) <= 1e-6);

    double max_off = 0.0;
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k)
            if (j != k) max_off = std::max(max_off, std::abs(Sigma.matrix()(j, k)));
    const PrecisionEstimate diag = graphical_lasso(Sigma, 1.01 * max_off);
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) {
            const double want = j == k ? 1.0 / Sigma.matrix()(j, j) : 0.0;
            CHECK(diag.theta_raw(j, k) == doctest::Approx(want).epsilon(1e-6));
        }
}

TEST_CASE("graphical lasso kkt and positive definiteness") {
    Eigen::MatrixXd S(2, 2);
    S << 1.0, 0.5, 0.5, 1.0;
    const GramMatrix Sigma = GramMatrix::from_matrix(S);
    const PrecisionEstimate est = graphical_lasso(Sigma, 0.1);
    CHECK(graphical_kkt_residual(Sigma, est.theta_raw, 0.1) <= 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(est.theta_raw, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);

    const SimulatedDataset ds = generate_dataset(120, 8, 0, 0.3, 1.0, 75);
    const GramMatrix Sg = gram(ds.X);
    const PrecisionEstimate e2 = graphical_lasso(Sg, 0.12);
    CHECK(graphical_kkt_residual(Sg, e2.theta_raw, 0.12) <= 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(e2.theta_raw, Eigen::EigenvaluesOnly);
    CHECK(es2.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("desparsified graphical lasso") {
    const SimulatedDataset ds = generate_dataset(250, 5, 0, 0.3, 1.0, 76);
    const PopulationTruth truth{ds.Sigma0, ds.Theta0};
    const GramMatrix Sigma = gram(ds.X);

    // an exact inverse is a fixed point of the de-sparsifying map
    const Eigen::MatrixXd inv = Sigma.matrix().ldlt().solve(Eigen::MatrixXd::Identity(5, 5));
    const PrecisionEstimate fp = desparsified_graphical(inv, Sigma, 0.0);
    CHECK(sup_norm(fp.theta_desparsified - inv) <= 1e-10);

    const PrecisionEstimate gl = graphical_lasso(Sigma, 0.1);
    const PrecisionEstimate de = desparsified_graphical(gl.theta_raw, Sigma, 0.1, truth);
    REQUIRE(de.decomposition.has_value());
    CHECK(de.decomposition->rem1_holds);
    CHECK(de.decomposition->rem2_holds);
    CHECK(de.decomposition->identity_gap <= 1e-12);

    const GraphicalSubgradient z = recover_graphical_subgradient(Sigma, gl.theta_raw, 0.1);
    CHECK(sup_norm(z.Z) <= 1.0);
    CHECK(z.clip_violation <= 1e-6);
    CHECK(z.identity_gap <= 1e-6);

    // λ → 0 path returns to the plain inverse
    const PrecisionEstimate gl0 = graphical_lasso(Sigma, 1e-9);
    CHECK(sup_norm(desparsified_graphical(gl0.theta_raw, Sigma, 1e-9).theta_desparsified - inv) <=
          1e-5);
}
