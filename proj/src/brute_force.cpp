#include "hdcd/brute_force.hpp"

#include <stdexcept>
#include <string>

namespace hdcd {

double d_oracle(const Eigen::Ref<const Eigen::MatrixXd>& X, int k) {
    const int n = static_cast<int>(X.rows());
    if (k < 2 || k > n - 2) {
        throw std::domain_error("d_oracle: k = " + std::to_string(k) +
                                " outside [2, n-2] for n = " +
                                std::to_string(n));
    }
    long double total = 0.0L;
    for (int j1 = 1; j1 <= k; ++j1) {
        for (int j3 = 1; j3 <= k; ++j3) {
            if (j3 == j1) continue;
            for (int j2 = k + 1; j2 <= n; ++j2) {
                for (int j4 = k + 1; j4 <= n; ++j4) {
                    if (j4 == j2) continue;
                    total += (X.row(j1 - 1) - X.row(j2 - 1))
                                 .dot(X.row(j3 - 1) - X.row(j4 - 1));
                }
            }
        }
    }
    return static_cast<double>(total);
}

double s_tilde(const Eigen::Ref<const Eigen::MatrixXd>& X, int k, int m) {
    const int n = static_cast<int>(X.rows());
    if (k < 1 || m < k || m > n - 1) {
        throw std::domain_error("s_tilde: (k, m) = (" + std::to_string(k) +
                                "," + std::to_string(m) +
                                ") outside 1 <= k <= m <= n-1 for n = " +
                                std::to_string(n));
    }
    long double total = 0.0L;
    for (int i = k; i <= m; ++i) {
        for (int j = k; j <= i; ++j) {
            total += X.row(i).dot(X.row(j - 1));  // X_{i+1}^T X_j, 1-based
        }
    }
    return static_cast<double>(total);
}

}  // namespace hdcd
