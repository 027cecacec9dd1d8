#include "hdlasso/basis_pursuit.hpp"

#include <cmath>
#include <vector>

namespace hdlasso {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

// Tableau rows 0..m-1 are constraints, row m holds reduced costs; column N is
// the rhs. Returns false when the problem is unbounded.
bool run_simplex(Eigen::MatrixXd& T, std::vector<int>& basis, int num_vars, long& iterations) {
    const int m = static_cast<int>(T.rows()) - 1;
    // Bland's rule cannot cycle; the cap guards against numerical stalls.
    const long max_pivots = 1000L * (num_vars + m) + 10000L;
    for (long pivot_count = 0; pivot_count < max_pivots; ++pivot_count) {
        // Bland: entering variable = lowest index with negative reduced cost
        int enter = -1;
        for (int j = 0; j < num_vars; ++j) {
            if (T(m, j) < -kCostTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;  // optimal

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > kPivotTol) {
                const double ratio = T(i, num_vars) / T(i, enter);
                if (leave < 0 || ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return false;  // unbounded

        // pivot
        T.row(leave) /= T(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = T(i, enter);
            if (f != 0.0) T.row(i) -= f * T.row(leave);
        }
        basis[leave] = enter;
        ++iterations;
    }
    throw ConvergenceError("simplex_solve: pivot budget exhausted", 0.0,
                           static_cast<int>(max_pivots));
}

}  // namespace

SimplexResult simplex_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                            const Eigen::VectorXd& cost) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (rhs.size() != m || cost.size() != n) throw DimensionError("simplex_solve: shape mismatch");

    // phase 1: artificials form the starting basis; rows flipped so rhs ≥ 0
    const int total = n + m;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, total + 1);
    for (int i = 0; i < m; ++i) {
        const double s = rhs[i] < 0.0 ? -1.0 : 1.0;
        T.block(i, 0, 1, n) = s * A.row(i);
        T(i, n + i) = 1.0;
        T(i, total) = s * rhs[i];
    }
    for (int j = 0; j < total; ++j)
        T(m, j) = (j >= n) ? 1.0 : 0.0;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
    // price out the artificial basis
    for (int i = 0; i < m; ++i) T.row(m) -= T.row(i);

    SimplexResult res;
    if (!run_simplex(T, basis, total, res.iterations))
        throw InfeasibleError("simplex_solve: phase 1 unbounded");
    if (T(m, total) < -kCostTol)
        throw InfeasibleError("simplex_solve: infeasible system");

    // drive artificials out of the basis; a fully zero row is redundant
    std::vector<int> keep_rows;
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) {
            keep_rows.push_back(i);
            continue;
        }
        int piv = -1;
        for (int j = 0; j < n; ++j) {
            if (std::abs(T(i, j)) > kPivotTol) {
                piv = j;
                break;
            }
        }
        if (piv < 0) continue;  // redundant constraint
        T.row(i) /= T(i, piv);
        for (int k = 0; k <= m; ++k) {
            if (k == i) continue;
            const double f = T(k, piv);
            if (f != 0.0) T.row(k) -= f * T.row(i);
        }
        basis[i] = piv;
        keep_rows.push_back(i);
    }

    // phase 2 tableau restricted to original columns and surviving rows
    const int m2 = static_cast<int>(keep_rows.size());
    Eigen::MatrixXd T2 = Eigen::MatrixXd::Zero(m2 + 1, n + 1);
    std::vector<int> basis2(m2);
    for (int i = 0; i < m2; ++i) {
        T2.block(i, 0, 1, n) = T.block(keep_rows[i], 0, 1, n);
        T2(i, n) = T(keep_rows[i], total);
        basis2[i] = basis[keep_rows[i]];
    }
    for (int j = 0; j < n; ++j) T2(m2, j) = cost[j];
    for (int i = 0; i < m2; ++i) T2.row(m2) -= cost[basis2[i]] * T2.row(i);

    if (!run_simplex(T2, basis2, n, res.iterations))
        throw InfeasibleError("simplex_solve: objective unbounded below");

    res.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m2; ++i) res.x[basis2[i]] = T2(i, n);
    res.value = cost.dot(res.x);
    for (int j = 0; j < n; ++j) {
        const bool basic =
            std::find(basis2.begin(), basis2.end(), j) != basis2.end();
        if (!basic && std::abs(T2(m2, j)) <= kCostTol) {
            res.alternative_optima = true;
            break;
        }
    }
    return res;
}

BasisPursuitResult basis_pursuit(const Eigen::MatrixXd& X, const Eigen::VectorXd& f0) {
    const int n = static_cast<int>(X.rows());
    const int p = static_cast<int>(X.cols());
    if (f0.size() != n) throw DimensionError("basis_pursuit: f0 length != rows of X");

    Eigen::MatrixXd A(n, 2 * p);
    A.leftCols(p) = X;
    A.rightCols(p) = -X;
    SimplexResult lp = simplex_solve(A, f0, Eigen::VectorXd::Ones(2 * p));

    BasisPursuitResult out;
    out.beta = lp.x.head(p) - lp.x.tail(p);
    out.l1_norm = lp.value;
    out.unique = !lp.alternative_optima;
    out.iterations = lp.iterations;
    return out;
}

}  // namespace hdlasso
