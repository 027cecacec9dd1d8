#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "hdlasso/errors.hpp"

namespace hdlasso {

// Leveled covering sets 𝒢₀ ⊆ ... levels[s] with 𝒢₀ = {t₀}, the parent maps
// between consecutive levels, per-leaf distance sequences d_j(s), entropies
// H_s = log(2|𝒢_s|) and the chain radius R_n(S) = max_j Σ_s d_j(s).
struct ChainTree {
    std::vector<std::vector<int>> levels;                // point ids, s = 0..S
    std::vector<std::unordered_map<int, int>> parent;    // parent[s-1]: 𝒢_s -> 𝒢_{s-1}
    std::vector<std::vector<double>> dists;              // dists[j][s-1], j indexes levels[S]
    std::vector<double> entropies;                       // H_s, s = 1..S
    double radius_chain = 0.0;                           // R_n(S)
    int n = 1;                                           // sample size of the process
    int num_points = 0;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
};

// Pairwise ‖·‖_n distances for points given as rows of an m×n matrix.
Eigen::MatrixXd pairwise_distances_norm_n(const Eigen::MatrixXd& points);

// Greedy farthest-point covers with radius 2^{-s} R_n per level; the finest
// level is forced to the whole point set so the approximation term vanishes.
// Ties in nearest-parent selection go to the lowest point id.
ChainTree build_covering_chain(const Eigen::MatrixXd& dist, int t0, int S, int n);

// γ_n(S) = max_j Σ_s d_j(s) sqrt(2(H_s + s log 2)/n)
double gamma_n(const ChainTree& tree);

// γ_n(a,S) = max_j Σ_s d_j(s) sqrt((2H_s + 2(1+s)(1+a))/n)
double gamma_n_deviation(const ChainTree& tree, double a);

// γ_n(S) + sqrt(2 R_n²(S)/n); requires the finest level to be the full set.
double expectation_bound(const ChainTree& tree);

// P( mean ≥ ‖c‖_n sqrt(2a/n) ) ≤ e^{-a} for centered |X_i| ≤ c_i.
struct TailBound {
    double threshold = 0.0;
    double prob_bound = 0.0;
};
TailBound hoeffding_tail_bound(const Eigen::VectorXd& c, double a);

// E ‖(1/n)Σ X_i‖_∞ ≤ sqrt(2 log(2p)/n) under the standardized MGF condition.
double max_averages_bound(int n, int p);

// Monte Carlo check of E max_s [Z_s - sqrt(H_s + s log 2)]₊² ≤ 1 for
// nonnegative Z_s with tails P(Z_s ≥ sqrt(H_s + a)) ≤ e^{-a}. The draw
// callback returns one realization (Z_1..Z_S) per rep.
struct PositivePartsCheck {
    double estimate = 0.0;
    double std_error = 0.0;
    bool pass = false;
};
PositivePartsCheck positive_parts_bound(const std::function<Eigen::VectorXd(std::uint64_t)>& draw,
                                        const Eigen::VectorXd& H, int reps);

// One realization of the process at every point: values(i, t) = X_i(t).
struct ProcessSample {
    Eigen::MatrixXd values;  // n×m
};

// Empirical E sup_t |X̄_n(t) - X̄_n(t₀)| against expectation_bound, and
// exceedance frequencies of γ_n(a,S) against e^{-a}, both with 3-sigma
// Monte Carlo slack.
struct SupTailCheck {
    double a = 0.0;
    double gamma = 0.0;
    double frequency = 0.0;
    double target = 0.0;
    double slack = 0.0;
    bool ok = false;
};
struct SupVerification {
    double empirical_mean = 0.0;
    double mean_std_error = 0.0;
    double bound = 0.0;
    bool mean_ok = false;
    std::vector<SupTailCheck> tails;
    bool pass = false;
};
SupVerification monte_carlo_sup(const ChainTree& tree,
                                const std::function<ProcessSample(std::uint64_t)>& generator,
                                int reps, const std::vector<double>& a_grid);

// Reference generator satisfying the sub-Gaussian increment condition under
// the ‖·‖_n metric: X_i(t) = ε_i t_i with a Rademacher ε per rep.
std::function<ProcessSample(std::uint64_t)> rademacher_process(const Eigen::MatrixXd& points,
                                                               std::uint64_t seed);

}  // namespace hdlasso
