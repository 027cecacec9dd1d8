#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace hdlasso {

// Euclidean projection onto the scaled simplex { x ≥ 0, Σ x_i = z }.
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& v, double z) {
    const int n = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    int rho = 0;
    for (int i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - z) / (i + 1);
        if (u[i] - t > 0.0) {
            rho = i + 1;
            theta = t;
        }
    }
    if (rho == 0) theta = (cum - z) / n;
    return (v.array() - theta).max(0.0);
}

// Euclidean projection onto the ℓ1 ball of radius L.
inline Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double L) {
    if (v.size() == 0 || v.lpNorm<1>() <= L) return v;
    const Eigen::VectorXd mags = project_simplex(v.cwiseAbs(), L);
    return v.array().sign() * mags.array();
}

}  // namespace hdlasso
