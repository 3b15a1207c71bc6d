#pragma once

#include <cstdint>

#include "hdcd/gram.hpp"
#include "hdcd/scan.hpp"

namespace hdcd {

struct BootstrapDraws {
    enum class Kind { single, multi };
    Kind kind = Kind::single;
    VectorXd values;  // M replicate statistics
    std::uint64_t seed = 0;
};

struct TestReport {
    double statistic = 0.0;
    double critical_value = 0.0;
    double alpha = 0.0;
    double p_value = 0.0;  // (#{draws > statistic} + 1) / (M + 1)
    bool reject = false;   // statistic > critical_value
    int bootstrap_reps = 0;
    std::uint64_t seed = 0;
};

/// One multiplier-bootstrap replicate of the single-change statistic:
/// reweights the centered Gram table by e_i e_j and rescans. O(n^2).
/// `work` is scratch storage for the reweighted table; pass one per worker.
double bootstrap_single_stat(const GramTable& centered_gram, const VectorXd& e,
                             GramTable& work);
double bootstrap_single_stat(const GramTable& centered_gram,
                             const VectorXd& e);

/// Same with the forward/backward pair scan.
double bootstrap_multi_stat(const GramTable& centered_gram, const VectorXd& e,
                            GramTable& work);
double bootstrap_multi_stat(const GramTable& centered_gram, const VectorXd& e);

/// Empirical upper-alpha critical value: with draws sorted ascending,
/// returns the order statistic v_(M - floor(alpha * M)), the smallest draw t
/// with #{v_j > t} <= alpha * M.
double critical_value(const BootstrapDraws& draws, double alpha);

/// Draws M bootstrap replicates of the single- or multi-change statistic
/// from the centered Gram table. Replicates are independent streams keyed
/// by (seed, replicate) and are computed by a parallel map; the result does
/// not depend on the thread count.
BootstrapDraws draw_bootstrap(const GramTable& centered_gram, int reps,
                              std::uint64_t seed, BootstrapDraws::Kind kind,
                              int threads = 0);

/// Single change-point test: T_n from the raw Gram against the multiplier
/// bootstrap critical value at level alpha.
TestReport test_single(const Eigen::Ref<const MatrixXd>& X, double alpha,
                       int reps, std::uint64_t seed, int threads = 0);

/// Multiple change-point test based on the forward/backward scan statistic.
TestReport test_multi(const Eigen::Ref<const MatrixXd>& X, double alpha,
                      int reps, std::uint64_t seed, int threads = 0);

}  // namespace hdcd
