#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hdlasso/core.hpp"

namespace hdlasso {

// One synthetic regression instance: equal-correlation Gaussian design,
// β⁰ with s0 alternating ±1 spikes on the first coordinates, Gaussian noise.
struct SimulatedDataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;
    Eigen::VectorXd beta0;
    Eigen::VectorXd eps;
    Eigen::MatrixXd Sigma0;
    Eigen::MatrixXd Theta0;

    DesignData design() const { return DesignData(X, Y); }
};

// Deterministic in (seed, rep): the draw order is fixed, so identical keys
// give bit-identical data on any platform.
SimulatedDataset generate_dataset(int n, int p, int s0, double rho, double sigma,
                                  std::uint64_t seed, std::uint64_t rep = 0,
                                  double spike_magnitude = 1.0);

}  // namespace hdlasso
