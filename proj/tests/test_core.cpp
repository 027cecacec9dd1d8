#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "hdlasso/core.hpp"
#include "hdlasso/rng.hpp"

using namespace hdlasso;

TEST_CASE("norm_n basics") {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    CHECK(norm_n(z) == 0.0);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(norm_n(ones) == doctest::Approx(1.0).epsilon(1e-15));
    Eigen::Vector2d v(3.0, 1.0);
    CHECK(norm_n(v) == doctest::Approx(2.23606797749979).epsilon(1e-14));
    Eigen::VectorXd empty;
    CHECK_THROWS_AS(norm_n(empty), DimensionError);
}

TEST_CASE("gram matrix") {
    Eigen::MatrixXd X(2, 2);
    X << 1, 1, 1, -1;
    CHECK(sup_norm(gram(X).matrix() - Eigen::MatrixXd::Identity(2, 2)) < 1e-15);

    X << 1, 0, 0, 1;
    CHECK(sup_norm(gram(X).matrix() - 0.5 * Eigen::MatrixXd::Identity(2, 2)) < 1e-15);

    // quadratic-form identity β'Σ̂β = ‖Xβ‖_n² on random inputs
    Rng rng(7);
    Eigen::MatrixXd R(5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) R(i, j) = rng.gaussian();
    const GramMatrix G = gram(R);
    CHECK(sup_norm(G.matrix() - G.matrix().transpose()) == 0.0);
    for (int t = 0; t < 100; ++t) {
        Eigen::Vector3d beta(rng.gaussian(), rng.gaussian(), rng.gaussian());
        const double lhs = beta.dot(G.matrix() * beta);
        const double rhs = (R * beta).squaredNorm() / 5.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }

    Eigen::MatrixXd bad(2, 2);
    bad << 1, std::nan(""), 0, 1;
    CHECK_THROWS_AS(gram(bad), DomainError);
    Eigen::MatrixXd notpsd(2, 2);
    notpsd << 1, 2, 2, 1;
    CHECK_THROWS_AS(GramMatrix::from_matrix(notpsd), DomainError);
}

TEST_CASE("l1 operator norm") {
    CHECK(l1_operator_norm(Eigen::MatrixXd::Identity(3, 3)) == 1.0);
    Eigen::MatrixXd A(2, 2);
    A << 1, -2, 3, 4;
    CHECK(l1_operator_norm(A) == 6.0);

    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        Eigen::MatrixXd M(4, 4), B(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                M(i, j) = rng.gaussian();
                B(i, j) = rng.gaussian();
            }
        CHECK(sup_norm(M * B) <= sup_norm(M) * l1_operator_norm(B) + 1e-12);
        CHECK(l1_operator_norm(M * B) <= l1_operator_norm(M) * l1_operator_norm(B) + 1e-12);
    }
}

TEST_CASE("dual norm inequality") {
    Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd w(6), beta(6);
        for (int i = 0; i < 6; ++i) {
            w[i] = rng.gaussian();
            beta[i] = rng.gaussian();
        }
        CHECK(std::abs(w.dot(beta)) <= sup_norm(w) * beta.lpNorm<1>() + 1e-12);
    }
}

TEST_CASE("restrict and index sets") {
    Eigen::Vector3d beta(1.0, -2.0, 3.0);
    const Eigen::VectorXd r = restrict(beta, IndexSet{1});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == -2.0);
    CHECK(r[2] == 0.0);

    CHECK(restrict(beta, IndexSet::full(3)) == beta);

    const IndexSet S{0, 2};
    const Eigen::VectorXd bS = restrict(beta, S);
    const Eigen::VectorXd bSc = restrict(beta, S.complement(3));
    CHECK((bS + bSc) == beta);
    CHECK(bS.lpNorm<1>() + bSc.lpNorm<1>() == doctest::Approx(beta.lpNorm<1>()));
    CHECK(bS.lpNorm<1>() == doctest::Approx(4.0));
    CHECK(bSc.lpNorm<1>() == doctest::Approx(2.0));

    CHECK_THROWS_AS(restrict(beta, IndexSet{5}), DomainError);
    CHECK(IndexSet{}.empty());
    CHECK(IndexSet({2, 0, 2, 1}).size() == 3);
    CHECK(IndexSet::active_set(Eigen::Vector3d(0.0, 1.0, 0.0)).members() ==
          std::vector<int>{1});
}

TEST_CASE("design data validation") {
    Eigen::MatrixXd X(2, 2);
    X << 1, 2, 3, 4;
    CHECK_NOTHROW(DesignData(X, Eigen::Vector2d(1, 2)));
    CHECK_THROWS_AS(DesignData(X, Eigen::Vector3d(1, 2, 3)), DimensionError);
    Eigen::Vector2d bad(1.0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(DesignData(X, bad), DomainError);
}
