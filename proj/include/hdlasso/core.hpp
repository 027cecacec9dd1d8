#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "hdlasso/errors.hpp"

namespace hdlasso {

// ‖v‖_n = sqrt(v'v / n), the normalized Euclidean norm used throughout.
template <typename Derived>
double norm_n(const Eigen::MatrixBase<Derived>& v) {
    if (v.size() == 0) throw DimensionError("norm_n: empty vector");
    return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

// ℓ1-operator norm |||A|||_1 = max_j Σ_k |A_kj| (maximum column absolute sum).
template <typename Derived>
double l1_operator_norm(const Eigen::MatrixBase<Derived>& A) {
    return A.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
double sup_norm(const Eigen::MatrixBase<Derived>& A) {
    if (A.size() == 0) return 0.0;
    return A.cwiseAbs().maxCoeff();
}

// Sorted, duplicate-free set of column indices in {0, ..., p-1}.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<int> idx) : IndexSet(std::vector<int>(idx)) {}
    explicit IndexSet(std::vector<int> idx) : members_(std::move(idx)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (!members_.empty() && members_.front() < 0)
            throw DomainError("IndexSet: negative index");
    }

    static IndexSet full(int p) {
        std::vector<int> idx(p);
        for (int j = 0; j < p; ++j) idx[j] = j;
        return IndexSet(std::move(idx));
    }

    // Active set S_beta = { j : beta_j != 0 }.
    static IndexSet active_set(const Eigen::VectorXd& beta, double tol = 0.0) {
        std::vector<int> idx;
        for (int j = 0; j < beta.size(); ++j)
            if (std::abs(beta[j]) > tol) idx.push_back(j);
        return IndexSet(std::move(idx));
    }

    const std::vector<int>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    bool contains(int j) const {
        return std::binary_search(members_.begin(), members_.end(), j);
    }
    int max_index() const { return members_.empty() ? -1 : members_.back(); }

    void check_range(int p) const {
        if (max_index() >= p) throw DomainError("IndexSet: index out of range");
    }

    IndexSet complement(int p) const {
        check_range(p);
        std::vector<int> idx;
        idx.reserve(p - size());
        for (int j = 0; j < p; ++j)
            if (!contains(j)) idx.push_back(j);
        return IndexSet(std::move(idx));
    }

private:
    std::vector<int> members_;
};

// beta_S: keep entries on S, zero elsewhere.
inline Eigen::VectorXd restrict(const Eigen::VectorXd& beta, const IndexSet& S) {
    S.check_range(static_cast<int>(beta.size()));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(beta.size());
    for (int j : S.members()) out[j] = beta[j];
    return out;
}

// Normalized Gram matrix X'X/n, stored exactly symmetric: the upper triangle
// is computed once and mirrored.
class GramMatrix {
public:
    GramMatrix() = default;

    // Wraps an externally built symmetric PSD matrix; validates.
    static GramMatrix from_matrix(const Eigen::MatrixXd& M, double tol = 1e-8) {
        if (M.rows() != M.cols()) throw DimensionError("GramMatrix: not square");
        if (!M.allFinite()) throw DomainError("GramMatrix: non-finite entries");
        GramMatrix g;
        g.m_ = Eigen::MatrixXd(M.rows(), M.cols());
        g.m_.triangularView<Eigen::Upper>() = 0.5 * (M + M.transpose());
        g.m_.triangularView<Eigen::StrictlyLower>() = g.m_.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol * std::max(1.0, es.eigenvalues().maxCoeff()))
            throw DomainError("GramMatrix: not positive semi-definite");
        return g;
    }

    const Eigen::MatrixXd& matrix() const { return m_; }
    int p() const { return static_cast<int>(m_.rows()); }

private:
    friend GramMatrix gram(const Eigen::MatrixXd&);
    Eigen::MatrixXd m_;
};

inline GramMatrix gram(const Eigen::MatrixXd& X) {
    if (X.rows() < 1 || X.cols() < 1) throw DimensionError("gram: empty design");
    if (!X.allFinite()) throw DomainError("gram: non-finite entries");
    GramMatrix g;
    const double n = static_cast<double>(X.rows());
    Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    upper.selfadjointView<Eigen::Upper>().rankUpdate(X.transpose(), 1.0 / n);
    g.m_ = upper.selfadjointView<Eigen::Upper>();
    return g;
}

// Observations Y and fixed design X. Non-finite input is rejected here so
// downstream code can assume clean values.
struct DesignData {
    Eigen::MatrixXd X;
    Eigen::VectorXd Y;

    DesignData(Eigen::MatrixXd X_, Eigen::VectorXd Y_)
        : X(std::move(X_)), Y(std::move(Y_)) {
        if (X.rows() < 1 || X.cols() < 1) throw DimensionError("DesignData: empty design");
        if (Y.size() != X.rows()) throw DimensionError("DesignData: Y length != rows of X");
        if (!X.allFinite() || !Y.allFinite())
            throw DomainError("DesignData: non-finite entries");
    }

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }
};

}  // namespace hdlasso
