#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hdcd {

struct VarianceTestConfig {
    double block_exponent = 0.7;     // s: primary block length l = floor(n^s)
    double long_run_exponent = 0.5;  // q: inner block length for kappa
};

struct VarianceTestReport {
    double u = 0.0;             // mean absolute log block-variance contrast
    double standardized = 0.0;  // sqrt(b) (sqrt(l)/kappa * U - 2/sqrt(pi))
    double p_value = 0.0;       // upper tail of the normal limit
    double kappa_star = 0.0;
    Eigen::VectorXd block_variances;
};

/// Tests whether a univariate series has constant (unconditional) variance
/// against smooth or abrupt variance changes; robust to piecewise mean
/// shifts because every block is centered at its own mean. One-sided:
/// large U rejects.
VarianceTestReport variance_constancy_test(
    const Eigen::Ref<const Eigen::VectorXd>& series,
    const VarianceTestConfig& cfg = {});

/// Precomputed Monte Carlo null distribution of the HC statistic for a
/// fixed number of p-values; reusable across calls.
class HcNullTable {
public:
    static HcNullTable make(int num_pvalues, int draws = 10000,
                            std::uint64_t seed = 0x48435631ULL);

    int num_pvalues() const { return num_pvalues_; }

    /// Fraction of null draws at or above the observed statistic,
    /// add-one adjusted so the p-value is never 0.
    double p_value(double stat) const;

private:
    int num_pvalues_ = 0;
    std::vector<double> sorted_stats_;
};

/// Higher Criticism statistic over the lower half of the p-value order
/// statistics. P-values at 0 or 1 are clipped to [1e-12, 1 - 1e-12].
double hc_statistic(std::vector<double> p_values);

struct HcResult {
    double stat = 0.0;
    double p_value = 0.0;
};

/// HC statistic plus its Monte Carlo null p-value from the given table
/// (which must match the input length).
HcResult higher_criticism(const std::vector<double>& p_values,
                          const HcNullTable& null_table);

/// Convenience overload that builds the null table internally.
HcResult higher_criticism(const std::vector<double>& p_values,
                          int null_draws = 10000,
                          std::uint64_t seed = 0x48435631ULL);

struct CoordinateResult {
    int index = 0;  // 1-based column
    double u = 0.0;
    double standardized = 0.0;
    double p_value = 0.0;
};

struct ScreenReport {
    std::vector<CoordinateResult> coordinates;
    std::vector<int> skipped;  // 1-based columns that failed preconditions
    HcResult combined;
};

/// Per-coordinate variance-constancy tests aggregated by Higher Criticism.
ScreenReport panel_heteroscedasticity_screen(
    const Eigen::Ref<const Eigen::MatrixXd>& X,
    const VarianceTestConfig& cfg = {}, int threads = 0);

}  // namespace hdcd
