#pragma once

#include <Eigen/Dense>

namespace hdcd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Validates a data panel: at least one row/column, all entries finite.
/// Throws std::invalid_argument naming the offending entry otherwise.
void validate_data(const Eigen::Ref<const MatrixXd>& X);

/// Pairwise inner-product table of the rows of a data panel, with 2D prefix
/// sums so that any rectangular block sum is an O(1) query. Immutable after
/// construction; all queries are const and safe to run concurrently.
///
/// Public indices are 1-based and inclusive.
class GramTable {
public:
    GramTable() = default;

    /// gram[i][j] = <row_i, row_j> of the raw data.
    static GramTable from_data(const Eigen::Ref<const MatrixXd>& X);

    /// Gram table of the rows X_i - Xbar (overall mean). Computed from the
    /// raw Gram by double-centering.
    static GramTable centered(const Eigen::Ref<const MatrixXd>& X);

    /// Table with entries e_i * e_j * gram[i][j] and fresh prefix sums.
    GramTable reweighted(const VectorXd& e) const;

    /// Same as reweighted() but reusing the caller's storage.
    void reweighted_into(const VectorXd& e, GramTable& out) const;

    Eigen::Index size() const { return n_; }

    /// gram[i][j], 1-based.
    double entry(Eigen::Index i, Eigen::Index j) const {
        return gram_(i - 1, j - 1);
    }

    /// Sum of gram[i][j] over the rectangle [r0,r1] x [c0,c1].
    double block_sum(Eigen::Index r0, Eigen::Index r1, Eigen::Index c0,
                     Eigen::Index c1) const {
        return prefix_(r1, c1) - prefix_(r0 - 1, c1) - prefix_(r1, c0 - 1) +
               prefix_(r0 - 1, c0 - 1);
    }

    /// Sum of gram[i][i] over i in [a,b].
    double diag_sum(Eigen::Index a, Eigen::Index b) const {
        return diag_prefix_(b) - diag_prefix_(a - 1);
    }

    /// Sum of gram[i][j] over pairs a <= i < j <= b.
    double within_pair_sum(Eigen::Index a, Eigen::Index b) const {
        return 0.5 * (block_sum(a, b, a, b) - diag_sum(a, b));
    }

private:
    static GramTable from_gram(MatrixXd gram);
    void rebuild_prefix();

    Eigen::Index n_ = 0;
    MatrixXd gram_;         // n x n, exactly symmetric
    MatrixXd prefix_;       // (n+1) x (n+1), prefix_(i,j) = sum over [1,i]x[1,j]
    VectorXd diag_prefix_;  // length n+1
};

}  // namespace hdcd
