#include "hdlasso/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdlasso/rng.hpp"

namespace hdlasso {

namespace {
constexpr double kLog2 = 0.69314718055994530942;
}

Eigen::MatrixXd pairwise_distances_norm_n(const Eigen::MatrixXd& points) {
    const int m = static_cast<int>(points.rows());
    const double n = static_cast<double>(points.cols());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            D(i, j) = D(j, i) = std::sqrt((points.row(i) - points.row(j)).squaredNorm() / n);
    return D;
}

namespace {

// Greedy cover at radius r: start from t0, repeatedly add the farthest
// uncovered point (ties to the lowest id) until everything is within r.
std::vector<int> greedy_cover(const Eigen::MatrixXd& dist, int t0, double r) {
    const int m = static_cast<int>(dist.rows());
    std::vector<int> cover = {t0};
    Eigen::VectorXd min_dist = dist.col(t0);
    for (;;) {
        int far = -1;
        double far_d = r;
        for (int t = 0; t < m; ++t) {
            if (min_dist[t] > far_d) {
                far_d = min_dist[t];
                far = t;
            }
        }
        if (far < 0) break;
        cover.push_back(far);
        min_dist = min_dist.cwiseMin(dist.col(far));
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

int nearest_in(const Eigen::MatrixXd& dist, const std::vector<int>& level, int point) {
    int best = level.front();
    double best_d = dist(point, best);
    for (int v : level) {
        if (dist(point, v) < best_d) {
            best_d = dist(point, v);
            best = v;
        }
    }
    return best;
}

}  // namespace

ChainTree build_covering_chain(const Eigen::MatrixXd& dist, int t0, int S, int n) {
    const int m = static_cast<int>(dist.rows());
    if (dist.cols() != m || m < 1) throw DimensionError("build_covering_chain: bad distance matrix");
    if (t0 < 0 || t0 >= m) throw DomainError("build_covering_chain: t0 out of range");
    if (S < 1) throw DomainError("build_covering_chain: S must be >= 1");
    if (n < 1) throw DomainError("build_covering_chain: n must be >= 1");

    ChainTree tree;
    tree.n = n;
    tree.num_points = m;
    const double radius = dist.col(t0).maxCoeff();

    tree.levels.resize(S + 1);
    tree.levels[0] = {t0};
    for (int s = 1; s < S; ++s)
        tree.levels[s] = greedy_cover(dist, t0, std::ldexp(radius, -s));
    tree.levels[S].resize(m);
    for (int t = 0; t < m; ++t) tree.levels[S][t] = t;

    tree.parent.resize(S);
    for (int s = 1; s <= S; ++s)
        for (int w : tree.levels[s])
            tree.parent[s - 1][w] = nearest_in(dist, tree.levels[s - 1], w);

    tree.entropies.resize(S);
    for (int s = 1; s <= S; ++s)
        tree.entropies[s - 1] = std::log(2.0 * tree.levels[s].size());

    tree.dists.assign(m, std::vector<double>(S, 0.0));
    for (int jj = 0; jj < m; ++jj) {
        int w = tree.levels[S][jj];
        for (int s = S; s >= 1; --s) {
            const int up = tree.parent[s - 1].at(w);
            tree.dists[jj][s - 1] = dist(w, up);
            w = up;
        }
        double total = 0.0;
        for (double d : tree.dists[jj]) total += d;
        tree.radius_chain = std::max(tree.radius_chain, total);
    }
    return tree;
}

double gamma_n(const ChainTree& tree) {
    const int S = tree.depth();
    double best = 0.0;
    for (const auto& dj : tree.dists) {
        double sum = 0.0;
        for (int s = 1; s <= S; ++s)
            sum += dj[s - 1] *
                   std::sqrt(2.0 * (tree.entropies[s - 1] + s * kLog2) / tree.n);
        best = std::max(best, sum);
    }
    return best;
}

double gamma_n_deviation(const ChainTree& tree, double a) {
    if (!(a >= 0.0)) throw DomainError("gamma_n_deviation: a must be nonnegative");
    const int S = tree.depth();
    double best = 0.0;
    for (const auto& dj : tree.dists) {
        double sum = 0.0;
        for (int s = 1; s <= S; ++s)
            sum += dj[s - 1] * std::sqrt((2.0 * tree.entropies[s - 1] +
                                          2.0 * (1.0 + s) * (1.0 + a)) /
                                         tree.n);
        best = std::max(best, sum);
    }
    return best;
}

double expectation_bound(const ChainTree& tree) {
    if (static_cast<int>(tree.levels.back().size()) != tree.num_points)
        throw DomainError(
            "expectation_bound: finest level does not cover the whole set; a bound on the "
            "approximation term must be supplied separately");
    return gamma_n(tree) +
           std::sqrt(2.0 * tree.radius_chain * tree.radius_chain / tree.n);
}

TailBound hoeffding_tail_bound(const Eigen::VectorXd& c, double a) {
    if (c.size() == 0) throw DimensionError("hoeffding_tail_bound: empty weights");
    if (!(a > 0.0)) throw DomainError("hoeffding_tail_bound: a must be positive");
    if (c.minCoeff() <= 0.0) throw DomainError("hoeffding_tail_bound: weights must be positive");
    const double n = static_cast<double>(c.size());
    TailBound out;
    out.threshold = std::sqrt(c.squaredNorm() / n) * std::sqrt(2.0 * a / n);
    out.prob_bound = std::exp(-a);
    return out;
}

double max_averages_bound(int n, int p) {
    if (n < 1 || p < 1) throw DomainError("max_averages_bound: n, p must be >= 1");
    return std::sqrt(2.0 * std::log(2.0 * p) / n);
}

PositivePartsCheck positive_parts_bound(const std::function<Eigen::VectorXd(std::uint64_t)>& draw,
                                        const Eigen::VectorXd& H, int reps) {
    if (reps < 1) throw DomainError("positive_parts_bound: reps must be >= 1");
    const int S = static_cast<int>(H.size());
    Eigen::VectorXd offset(S);
    for (int s = 1; s <= S; ++s) offset[s - 1] = std::sqrt(H[s - 1] + s * kLog2);

    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const Eigen::VectorXd z = draw(static_cast<std::uint64_t>(r));
        if (z.size() != S) throw DimensionError("positive_parts_bound: draw size mismatch");
        const double v = (z - offset).cwiseMax(0.0).cwiseAbs2().maxCoeff();
        sum += v;
        sum_sq += v * v;
    }
    PositivePartsCheck out;
    out.estimate = sum / reps;
    const double var = std::max(0.0, sum_sq / reps - out.estimate * out.estimate);
    out.std_error = std::sqrt(var / reps);
    out.pass = out.estimate - 3.0 * out.std_error <= 1.0;
    return out;
}

SupVerification monte_carlo_sup(const ChainTree& tree,
                                const std::function<ProcessSample(std::uint64_t)>& generator,
                                int reps, const std::vector<double>& a_grid) {
    if (reps < 1) throw DomainError("monte_carlo_sup: reps must be >= 1");
    const int t0 = tree.levels[0][0];
    const int m = tree.num_points;

    SupVerification out;
    out.bound = expectation_bound(tree);
    out.tails.resize(a_grid.size());
    for (size_t i = 0; i < a_grid.size(); ++i) {
        out.tails[i].a = a_grid[i];
        out.tails[i].gamma = gamma_n_deviation(tree, a_grid[i]);
        out.tails[i].target = std::exp(-a_grid[i]);
    }

    double sum = 0.0, sum_sq = 0.0;
    std::vector<long> exceed(a_grid.size(), 0);
    for (int r = 0; r < reps; ++r) {
        const ProcessSample sample = generator(static_cast<std::uint64_t>(r));
        if (sample.values.cols() != m || sample.values.rows() != tree.n)
            throw DimensionError("monte_carlo_sup: sample shape mismatch");
        const Eigen::RowVectorXd means = sample.values.colwise().mean();
        const double sup = (means.array() - means[t0]).abs().maxCoeff();
        sum += sup;
        sum_sq += sup * sup;
        for (size_t i = 0; i < a_grid.size(); ++i)
            if (sup >= out.tails[i].gamma) ++exceed[i];
    }

    out.empirical_mean = sum / reps;
    const double var = std::max(0.0, sum_sq / reps - out.empirical_mean * out.empirical_mean);
    out.mean_std_error = std::sqrt(var / reps);
    out.mean_ok = out.empirical_mean <= out.bound + 3.0 * out.mean_std_error;
    out.pass = out.mean_ok;
    for (size_t i = 0; i < a_grid.size(); ++i) {
        SupTailCheck& t = out.tails[i];
        t.frequency = static_cast<double>(exceed[i]) / reps;
        t.slack = 3.0 * std::sqrt(t.target * (1.0 - t.target) / reps);
        t.ok = t.frequency <= t.target + t.slack;
        out.pass = out.pass && t.ok;
    }
    return out;
}

std::function<ProcessSample(std::uint64_t)> rademacher_process(const Eigen::MatrixXd& points,
                                                               std::uint64_t seed) {
    return [points, seed](std::uint64_t rep) {
        const int n = static_cast<int>(points.cols());
        Rng rng(seed, rep);
        Eigen::VectorXd eps(n);
        for (int i = 0; i < n; ++i) eps[i] = rng.rademacher();
        ProcessSample s;
        s.values = eps.asDiagonal() * points.transpose();
        return s;
    };
}

}  // namespace hdlasso
