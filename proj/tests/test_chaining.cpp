#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdlasso/chaining.hpp"
#include "hdlasso/rng.hpp"

using namespace hdlasso;

namespace {

// every point within 2^{-s} R_n of level s
bool cover_property_holds(const ChainTree& tree, const Eigen::MatrixXd& dist, int t0) {
    const double radius = dist.col(t0).maxCoeff();
    for (int s = 1; s <= tree.depth(); ++s) {
        const double r = std::ldexp(radius, -s);
        for (int t = 0; t < tree.num_points; ++t) {
            double best = std::numeric_limits<double>::infinity();
            for (int w : tree.levels[s]) best = std::min(best, dist(t, w));
            if (s < tree.depth() && best > r + 1e-12) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("singleton tree") {
    const Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(1, 1);
    const ChainTree tree = build_covering_chain(dist, 0, 3, 4);
    CHECK(gamma_n(tree) == 0.0);
    CHECK(tree.radius_chain == 0.0);
    CHECK(expectation_bound(tree) == 0.0);
}

TEST_CASE("two-point tree closed forms") {
    Eigen::MatrixXd dist(2, 2);
    dist << 0, 1, 1, 0;
    const ChainTree tree = build_covering_chain(dist, 0, 1, 1);
    CHECK(tree.levels[1].size() == 2);
    CHECK(tree.entropies[0] == doctest::Approx(std::log(4.0)));
    CHECK(tree.dists[1][0] == doctest::Approx(1.0));
    CHECK(tree.radius_chain == doctest::Approx(1.0));

    CHECK(gamma_n(tree) == doctest::Approx(2.039333980337618).epsilon(1e-12));
    CHECK(gamma_n_deviation(tree, 1.0) == doctest::Approx(3.2821622023050265).epsilon(1e-12));
    CHECK(expectation_bound(tree) == doctest::Approx(3.453547542710713).epsilon(1e-12));
}

TEST_CASE("sixteen points on a line: covers verified per level") {
    Eigen::MatrixXd pts(16, 1);
    for (int i = 0; i < 16; ++i) pts(i, 0) = i;
    const Eigen::MatrixXd dist = pairwise_distances_norm_n(pts);
    const ChainTree tree = build_covering_chain(dist, 0, 4, 1);
    CHECK(cover_property_holds(tree, dist, 0));
    CHECK(static_cast<int>(tree.levels[4].size()) == 16);

    // parent distances are recomputable from the metric
    for (int jj = 0; jj < tree.num_points; ++jj) {
        int w = tree.levels[4][jj];
        for (int s = 4; s >= 1; --s) {
            const int up = tree.parent[s - 1].at(w);
            CHECK(tree.dists[jj][s - 1] == doctest::Approx(dist(w, up)).epsilon(1e-12));
            w = up;
        }
        CHECK(w == 0);  // all chains end at t0
    }
    for (int s = 1; s <= 4; ++s)
        CHECK(tree.entropies[s - 1] ==
              doctest::Approx(std::log(2.0 * tree.levels[s].size())));
}

TEST_CASE("gamma scaling in n") {
    Rng rng(555);
    Eigen::MatrixXd pts(9, 6);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 6; ++j) pts(i, j) = rng.gaussian();
    const Eigen::MatrixXd dist = pairwise_distances_norm_n(pts);
    const ChainTree t1 = build_covering_chain(dist, 0, 3, 10);
    const ChainTree t2 = build_covering_chain(dist, 0, 3, 20);
    CHECK(gamma_n(t1) / gamma_n(t2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gamma deviation: monotone, continuous at zero, remark inequality") {
    Rng rng(556);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 5 + static_cast<int>(rng.below(30));
        const int dim = 5 + static_cast<int>(rng.below(40));
        const int S = 2 + static_cast<int>(rng.below(4));
        Eigen::MatrixXd pts(m, dim);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < dim; ++j) pts(i, j) = rng.gaussian();
        const ChainTree tree = build_covering_chain(pairwise_distances_norm_n(pts), 0, S, dim);

        const double g0 = gamma_n_deviation(tree, 0.0);
        CHECK(gamma_n_deviation(tree, 1e-9) == doctest::Approx(g0).epsilon(1e-6));
        double prev = g0;
        for (double a : {1.0, 2.0, 3.0}) {
            const double g = gamma_n_deviation(tree, a);
            CHECK(g >= prev);
            CHECK(g <= g0 + tree.radius_chain * std::sqrt(2.0 * a / tree.n) + 1e-10);
            prev = g;
        }
    }
}

TEST_CASE("hoeffding tail bound formula and Monte Carlo") {
    const Eigen::VectorXd c = Eigen::VectorXd::Ones(50);
    const TailBound tb = hoeffding_tail_bound(c, 2.0);
    CHECK(tb.threshold == doctest::Approx(0.282842712474619).epsilon(1e-12));
    CHECK(tb.prob_bound == doctest::Approx(0.1353352832366127).epsilon(1e-12));

    double prev = 1.0;
    for (double a : {1.0, 2.0, 4.0, 8.0}) {
        const double b = hoeffding_tail_bound(c, a).prob_bound;
        CHECK(b < prev);
        prev = b;
    }

    const int reps = 20000;
    long exceed = 0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(901, r);
        double s = 0.0;
        for (int i = 0; i < 50; ++i) s += rng.rademacher();
        if (s / 50.0 >= tb.threshold) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / reps;
    CHECK(freq <= tb.prob_bound + 3.0 * std::sqrt(tb.prob_bound / reps));

    CHECK_THROWS_AS(hoeffding_tail_bound(c, 0.0), DomainError);
    CHECK_THROWS_AS(hoeffding_tail_bound(-c, 1.0), DomainError);
}

TEST_CASE("max averages bound") {
    CHECK(max_averages_bound(100, 2) == doctest::Approx(0.16651092223153954).epsilon(1e-12));
    CHECK(max_averages_bound(100, 1) == doctest::Approx(0.11774100225154747).epsilon(1e-12));

    const int reps = 10000, n = 100, p = 2;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        Rng rng(902, r);
        double m = 0.0;
        for (int j = 0; j < p; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += rng.rademacher();
            m = std::max(m, std::abs(s) / n);
        }
        sum += m;
    }
    CHECK(sum / reps <= max_averages_bound(n, p));
}

TEST_CASE("positive parts bound") {
    const Eigen::VectorXd H = Eigen::VectorXd::Constant(5, std::log(10.0));

    const PositivePartsCheck zero =
        positive_parts_bound([](std::uint64_t) { return Eigen::VectorXd::Zero(5); }, H, 100);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.pass);

    // Z_s = sqrt(H_s + E_s), exponential E: the tail condition is tight
    const PositivePartsCheck exp_case = positive_parts_bound(
        [&H](std::uint64_t rep) {
            Rng rng(903, rep);
            Eigen::VectorXd z(5);
            for (int s = 0; s < 5; ++s) z[s] = std::sqrt(H[s] + rng.exponential());
            return z;
        },
        H, 50000);
    CHECK(exp_case.pass);
    CHECK(exp_case.estimate <= 1.0);

    // Z_s = sqrt(H_s + N²/2) satisfies the Gaussian version of the tail
    const PositivePartsCheck gauss_case = positive_parts_bound(
        [&H](std::uint64_t rep) {
            Rng rng(904, rep);
            Eigen::VectorXd z(5);
            for (int s = 0; s < 5; ++s) {
                const double g = rng.gaussian();
                z[s] = std::sqrt(H[s] + 0.5 * g * g);
            }
            return z;
        },
        H, 50000);
    CHECK(gauss_case.pass);

    // one level with a huge entropy constant: positive part almost surely 0
    const Eigen::VectorXd Hbig = Eigen::VectorXd::Constant(1, 400.0);
    const PositivePartsCheck big = positive_parts_bound(
        [](std::uint64_t rep) {
            Rng rng(905, rep);
            return Eigen::VectorXd::Constant(1, std::abs(rng.gaussian()));
        },
        Hbig, 2000);
    CHECK(big.estimate == 0.0);
}

TEST_CASE("monte carlo sup on a small ball sample") {
    Rng rng(906);
    Eigen::MatrixXd pts(12, 20);
    for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 20; ++j) pts(i, j) = rng.gaussian();
        pts.row(i) /= pts.row(i).norm();
    }
    const ChainTree tree = build_covering_chain(pairwise_distances_norm_n(pts), 0, 4, 20);
    const SupVerification v =
        monte_carlo_sup(tree, rademacher_process(pts, 907), 2000, {1.0, 2.0});
    CHECK(v.pass);
    CHECK(v.empirical_mean <= v.bound);
}

TEST_CASE("rademacher mgf premise and the cosh inequality") {
    // ½e^{-z} + ½e^{z} ≤ e^{z²/2} on a deterministic grid
    for (int g = -100; g <= 100; ++g) {
        const double z = 0.1 * g;
        CHECK(0.5 * std::exp(-z) + 0.5 * std::exp(z) <= std::exp(0.5 * z * z) * (1.0 + 1e-15));
    }

    // E exp(λ ε'c) ≤ exp(n λ² ‖c‖_n² / 2), checked in normalized form
    Rng cgen(908);
    Eigen::VectorXd c(30);
    for (int i = 0; i < 30; ++i) c[i] = 0.5 + cgen.uniform();
    const double cn2 = c.squaredNorm() / 30.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const double log_bound = 30.0 * lambda * lambda * cn2 / 2.0;
        const int reps = 20000;
        double sum = 0.0, sum_sq = 0.0;
        for (int r = 0; r < reps; ++r) {
            Rng rng(909 + static_cast<int>(10 * lambda), r);
            double s = 0.0;
            for (int i = 0; i < 30; ++i) s += rng.rademacher() * c[i];
            const double v = std::exp(lambda * s - log_bound);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / reps;
        const double sd = std::sqrt(std::max(0.0, sum_sq / reps - mean * mean) / reps);
        CHECK(mean <= 1.0 + 3.0 * sd);
    }
}

TEST_CASE("expectation bound requires the full finest level") {
    Eigen::MatrixXd dist(3, 3);
    dist << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    ChainTree tree = build_covering_chain(dist, 0, 2, 5);
    tree.levels.back().pop_back();  // simulate a partial finest level
    CHECK_THROWS_AS(expectation_bound(tree), DomainError);
}
