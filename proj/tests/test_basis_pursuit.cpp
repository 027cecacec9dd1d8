#include <doctest.h>

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "hdlasso/basis_pursuit.hpp"
#include "hdlasso/rng.hpp"

using namespace hdlasso;

namespace {

// brute-force LP oracle: enumerate all n-column bases of [X, -X], keep the
// feasible basic solutions, return the best ℓ1 value
double bp_vertex_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& f0) {
    const int n = static_cast<int>(X.rows());
    const int N = 2 * static_cast<int>(X.cols());
    Eigen::MatrixXd A(n, N);
    A.leftCols(X.cols()) = X;
    A.rightCols(X.cols()) = -X;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n);
    const std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            Eigen::MatrixXd B(n, n);
            for (int i = 0; i < n; ++i) B.col(i) = A.col(idx[i]);
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
            if (!lu.isInvertible()) return;
            const Eigen::VectorXd x = lu.solve(f0);
            if ((x.array() < -1e-9).any()) return;
            best = std::min(best, x.sum());
            return;
        }
        for (int j = start; j < N; ++j) {
            idx[depth] = j;
            rec(j + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

TEST_CASE("identity design reproduces f0") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::Vector3d f0(1.0, -2.0, 0.5);
    const BasisPursuitResult r = basis_pursuit(I, f0);
    CHECK((r.beta - f0).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(r.l1_norm == doctest::Approx(3.5));
}

TEST_CASE("wide designs and tie handling") {
    Eigen::MatrixXd X(1, 2);
    X << 2, 1;
    const BasisPursuitResult r = basis_pursuit(X, Eigen::VectorXd::Constant(1, 2.0));
    CHECK(r.beta[0] == doctest::Approx(1.0));
    CHECK(r.beta[1] == doctest::Approx(0.0));
    CHECK(r.l1_norm == doctest::Approx(1.0));
    CHECK(r.unique);  // every other vertex strictly worse

    Eigen::MatrixXd T(1, 2);
    T << 1, 1;
    const BasisPursuitResult tie = basis_pursuit(T, Eigen::VectorXd::Constant(1, 2.0));
    CHECK(tie.l1_norm == doctest::Approx(2.0));
    CHECK((T * tie.beta)(0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK_FALSE(tie.unique);  // minimum attained on a whole segment
}

TEST_CASE("matches the vertex-enumeration oracle on random instances") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd X(2, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 4; ++j) X(i, j) = rng.gaussian();
        Eigen::Vector2d f0(rng.gaussian(), rng.gaussian());
        const BasisPursuitResult r = basis_pursuit(X, f0);
        CHECK((X * r.beta - f0).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(r.l1_norm == doctest::Approx(bp_vertex_oracle(X, f0)).epsilon(1e-8));
        CHECK(r.beta.lpNorm<1>() == doctest::Approx(r.l1_norm).epsilon(1e-10));
    }
}

TEST_CASE("simplex solves a known LP") {
    // min x0 + 2x1  s.t.  x0 + x1 = 4, x0 - x1 = 2, x >= 0  ->  (3, 1), value 5
    Eigen::MatrixXd A(2, 2);
    A << 1, 1, 1, -1;
    const SimplexResult r = simplex_solve(A, Eigen::Vector2d(4.0, 2.0), Eigen::Vector2d(1.0, 2.0));
    CHECK(r.x[0] == doctest::Approx(3.0));
    CHECK(r.x[1] == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(5.0));

    // redundant row: same system stated twice still solves
    Eigen::MatrixXd A3(3, 2);
    A3 << 1, 1, 1, -1, 1, 1;
    const SimplexResult rr =
        simplex_solve(A3, Eigen::Vector3d(4.0, 2.0, 4.0), Eigen::Vector2d(1.0, 2.0));
    CHECK(rr.value == doctest::Approx(5.0));
}

TEST_CASE("infeasible system raises") {
    Eigen::MatrixXd X(2, 1);
    X << 1, 1;  // range is the diagonal; (1, 2) is outside
    CHECK_THROWS_AS(basis_pursuit(X, Eigen::Vector2d(1.0, 2.0)), InfeasibleError);
}
