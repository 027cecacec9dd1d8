#pragma once

#include <Eigen/Dense>

#include "hdlasso/errors.hpp"

namespace hdlasso {

// Dense two-phase primal simplex for  min c'x  s.t.  Ax = rhs, x ≥ 0.
// Bland's rule throughout, so it cannot cycle. Intended for desk-scale
// problems; the tableau is kept dense.
struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    // a nonbasic column with zero reduced cost at the optimum: the optimal
    // vertex is not the unique optimum
    bool alternative_optima = false;
    long iterations = 0;
};

SimplexResult simplex_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                            const Eigen::VectorXd& cost);

// argmin { ‖β‖₁ : Xβ = f0 } via the positive/negative-part LP split.
// The returned point is a vertex of the LP; `unique` is false when a zero
// reduced cost reveals alternative minimizers.
struct BasisPursuitResult {
    Eigen::VectorXd beta;
    double l1_norm = 0.0;
    bool unique = true;
    long iterations = 0;
};

BasisPursuitResult basis_pursuit(const Eigen::MatrixXd& X, const Eigen::VectorXd& f0);

}  // namespace hdlasso
