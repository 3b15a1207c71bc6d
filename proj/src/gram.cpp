#include "hdcd/gram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdcd {

void validate_data(const Eigen::Ref<const MatrixXd>& X) {
    if (X.rows() < 1 || X.cols() < 1) {
        throw std::invalid_argument("data panel is empty");
    }
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (!std::isfinite(X(i, j))) {
                throw std::invalid_argument(
                    "non-finite entry at row " + std::to_string(i + 1) +
                    ", column " + std::to_string(j + 1));
            }
        }
    }
}

GramTable GramTable::from_gram(MatrixXd gram) {
    GramTable t;
    t.n_ = gram.rows();
    t.gram_ = std::move(gram);
    t.rebuild_prefix();
    return t;
}

void GramTable::rebuild_prefix() {
    const Eigen::Index n = n_;
    prefix_.resize(n + 1, n + 1);
    prefix_.row(0).setZero();
    prefix_.col(0).setZero();
    diag_prefix_.resize(n + 1);
    diag_prefix_(0) = 0.0;
    long double diag_acc = 0.0L;
    for (Eigen::Index i = 1; i <= n; ++i) {
        // Row-wise running sums in extended precision to limit cancellation
        // in the within-block differences downstream.
        long double row_acc = 0.0L;
        for (Eigen::Index j = 1; j <= n; ++j) {
            row_acc += gram_(i - 1, j - 1);
            prefix_(i, j) = prefix_(i - 1, j) + static_cast<double>(row_acc);
        }
        diag_acc += gram_(i - 1, i - 1);
        diag_prefix_(i) = static_cast<double>(diag_acc);
    }
}

GramTable GramTable::from_data(const Eigen::Ref<const MatrixXd>& X) {
    validate_data(X);
    const Eigen::Index n = X.rows();
    MatrixXd gram = MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(X);
    // Mirror the lower triangle so symmetry is exact.
    gram.triangularView<Eigen::StrictlyUpper>() =
        gram.transpose().triangularView<Eigen::StrictlyUpper>();
    return from_gram(std::move(gram));
}

GramTable GramTable::centered(const Eigen::Ref<const MatrixXd>& X) {
    validate_data(X);
    const Eigen::Index n = X.rows();
    MatrixXd rows = X.rowwise() - X.colwise().mean();
    MatrixXd gram = MatrixXd::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(rows);
    gram.triangularView<Eigen::StrictlyUpper>() =
        gram.transpose().triangularView<Eigen::StrictlyUpper>();
    return from_gram(std::move(gram));
}

GramTable GramTable::reweighted(const VectorXd& e) const {
    GramTable out;
    reweighted_into(e, out);
    return out;
}

void GramTable::reweighted_into(const VectorXd& e, GramTable& out) const {
    if (e.size() != n_) {
        throw std::invalid_argument("multiplier length " +
                                    std::to_string(e.size()) +
                                    " does not match table size " +
                                    std::to_string(n_));
    }
    out.n_ = n_;
    out.gram_.resize(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
        out.gram_.col(i) = (e(i) * e.array() * gram_.col(i).array()).matrix();
    }
    out.rebuild_prefix();
}

}  // namespace hdcd
