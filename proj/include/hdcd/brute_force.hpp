#pragma once

#include <Eigen/Dense>

namespace hdcd {

/// Quadruple-sum form of the split statistic at k, computed directly from
/// the data rows. O(k^2 (n-k)^2 p); intended for small n only. Test suites
/// use it as an independent oracle:
///   g_stat(k, 1, n) == d_oracle(X, k) / (k (k-1) (n-k) (n-k-1)).
double d_oracle(const Eigen::Ref<const Eigen::MatrixXd>& X, int k);

/// Double sum S(k, m) = sum_{i=k..m} sum_{j=k..i} <X_{i+1}, X_j>.
/// Requires 1 <= k <= m <= n-1. With the outer index capped at n-1, the
/// rescaled statistic at split k decomposes exactly as
///   2(n-k)(n-k-1)/n^3 * S(1, k-1) + 2k(k-1)/n^3 * S(k+1, n-1)
///   - 2(k-1)(n-k-1)/n^3 * (S(1, n-1) - S(1, k-1) - S(k+1, n-1)),
/// which test suites assert against rescaled_g.
double s_tilde(const Eigen::Ref<const Eigen::MatrixXd>& X, int k, int m);

}  // namespace hdcd
