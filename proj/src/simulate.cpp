#include "hdlasso/simulate.hpp"

#include <cmath>

#include "hdlasso/inference.hpp"
#include "hdlasso/rng.hpp"

namespace hdlasso {

SimulatedDataset generate_dataset(int n, int p, int s0, double rho, double sigma,
                                  std::uint64_t seed, std::uint64_t rep,
                                  double spike_magnitude) {
    if (n < 1 || p < 1) throw DomainError("generate_dataset: n, p must be >= 1");
    if (s0 < 0 || s0 > p) throw DomainError("generate_dataset: s0 outside [0, p]");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("generate_dataset: rho outside [0,1)");
    if (sigma < 0.0) throw DomainError("generate_dataset: negative sigma");

    SimulatedDataset out;
    if (p >= 2) {
        const EqualCorrelation ec = equal_correlation_theta(p, rho);
        out.Sigma0 = ec.Sigma0;
        out.Theta0 = ec.Theta0;
    } else {
        out.Sigma0 = Eigen::MatrixXd::Identity(1, 1);
        out.Theta0 = Eigen::MatrixXd::Identity(1, 1);
    }

    Rng rng(seed, rep);
    out.X.resize(n, p);
    const double shared_w = std::sqrt(rho);
    const double own_w = std::sqrt(1.0 - rho);
    for (int i = 0; i < n; ++i) {
        const double shared = shared_w * rng.gaussian();
        for (int j = 0; j < p; ++j) out.X(i, j) = shared + own_w * rng.gaussian();
    }

    out.beta0 = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < s0; ++j) out.beta0[j] = (j % 2 == 0 ? 1.0 : -1.0) * spike_magnitude;

    out.eps.resize(n);
    for (int i = 0; i < n; ++i) out.eps[i] = sigma * rng.gaussian();
    out.Y = out.X * out.beta0 + out.eps;
    return out;
}

}  // namespace hdlasso
