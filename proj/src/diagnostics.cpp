#include "hdcd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hdcd/parallel.hpp"
#include "hdcd/rng.hpp"

namespace hdcd {

namespace {

// Variance of the normal limit: 4/3 + (8/pi)(sqrt(3) - 2).
const double kLimitVariance =
    4.0 / 3.0 + (8.0 / M_PI) * (std::sqrt(3.0) - 2.0);

double upper_tail_normal(double z, double variance) {
    return 0.5 * std::erfc(z / std::sqrt(2.0 * variance));
}

}  // namespace

VarianceTestReport variance_constancy_test(
    const Eigen::Ref<const Eigen::VectorXd>& series,
    const VarianceTestConfig& cfg) {
    const int n = static_cast<int>(series.size());
    if (!(cfg.long_run_exponent > 0.0 &&
          cfg.long_run_exponent < cfg.block_exponent &&
          cfg.block_exponent < 1.0)) {
        throw std::invalid_argument("require 0 < q < s < 1");
    }
    const int block_len =
        static_cast<int>(std::floor(std::pow(n, cfg.block_exponent)));
    const int blocks = block_len >= 1 ? n / block_len : 0;
    const int inner_len =
        static_cast<int>(std::floor(std::pow(n, cfg.long_run_exponent)));
    if (block_len < 2 || blocks < 2 || inner_len < 2 ||
        block_len * blocks < inner_len) {
        throw std::domain_error(
            "series too short for the variance test: n = " + std::to_string(n) +
            " gives block length " + std::to_string(block_len) + " and " +
            std::to_string(blocks) + " blocks (need >= 2 of each)");
    }
    const int used = blocks * block_len;  // trailing points are dropped

    // Per-block variances, each block centered at its own mean.
    Eigen::VectorXd block_var(blocks);
    Eigen::VectorXd centered(used);
    for (int j = 0; j < blocks; ++j) {
        const auto seg = series.segment(j * block_len, block_len);
        const double mean = seg.mean();
        centered.segment(j * block_len, block_len) = seg.array() - mean;
        block_var(j) =
            centered.segment(j * block_len, block_len).squaredNorm() /
            block_len;
        if (!(block_var(j) > 0.0)) {
            throw std::domain_error("degenerate block " + std::to_string(j + 1) +
                                    ": zero variance");
        }
    }

    double u = 0.0;
    for (int j = 0; j < blocks; ++j) {
        for (int k = j + 1; k < blocks; ++k) {
            u += std::abs(std::log(block_var(j)) - std::log(block_var(k)));
        }
    }
    u *= 2.0 / (static_cast<double>(blocks) * (blocks - 1));

    // Long-run scale: mean absolute normalized inner-block sum of the
    // centered squares.
    const double sigma_h = centered.squaredNorm() / used;
    const int inner_blocks = used / inner_len;
    double kappa = 0.0;
    for (int j = 0; j < inner_blocks; ++j) {
        const double s =
            (centered.segment(j * inner_len, inner_len).array().square() -
             sigma_h)
                .sum();
        kappa += std::abs(s / std::sqrt(static_cast<double>(inner_len)));
    }
    kappa *= std::sqrt(M_PI / 2.0) / (inner_blocks * sigma_h);

    VarianceTestReport report;
    report.u = u;
    report.kappa_star = kappa;
    report.block_variances = block_var;
    report.standardized =
        std::sqrt(static_cast<double>(blocks)) *
        (std::sqrt(static_cast<double>(block_len)) / kappa * u -
         2.0 / std::sqrt(M_PI));
    report.p_value = upper_tail_normal(report.standardized, kLimitVariance);
    return report;
}

double hc_statistic(std::vector<double> p_values) {
    const int count = static_cast<int>(p_values.size());
    if (count < 1) throw std::invalid_argument("empty p-value list");
    for (double& p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("p-value outside [0, 1]");
        }
        p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    }
    std::sort(p_values.begin(), p_values.end());
    const double nd = count;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= count / 2; ++i) {
        const double p = p_values[static_cast<std::size_t>(i - 1)];
        const double v =
            std::sqrt(nd) * (i / nd - p) / std::sqrt(p * (1.0 - p));
        best = std::max(best, v);
    }
    if (count == 1) {  // lower half is empty; fall back to the single value
        const double p = p_values[0];
        best = (1.0 / nd - p) / std::sqrt(p * (1.0 - p));
    }
    return best;
}

HcNullTable HcNullTable::make(int num_pvalues, int draws, std::uint64_t seed) {
    if (num_pvalues < 1 || draws < 1) {
        throw std::invalid_argument("null table needs positive sizes");
    }
    HcNullTable table;
    table.num_pvalues_ = num_pvalues;
    table.sorted_stats_.resize(static_cast<std::size_t>(draws));
    std::vector<double> uniforms(static_cast<std::size_t>(num_pvalues));
    SplitMix64 gen(mix64(seed));
    for (int d = 0; d < draws; ++d) {
        for (auto& u : uniforms) u = gen.next_unit();
        table.sorted_stats_[static_cast<std::size_t>(d)] =
            hc_statistic(uniforms);
    }
    std::sort(table.sorted_stats_.begin(), table.sorted_stats_.end());
    return table;
}

double HcNullTable::p_value(double stat) const {
    const auto it = std::lower_bound(sorted_stats_.begin(),
                                     sorted_stats_.end(), stat);
    const auto ge = static_cast<double>(sorted_stats_.end() - it);
    return (ge + 1.0) / (static_cast<double>(sorted_stats_.size()) + 1.0);
}

HcResult higher_criticism(const std::vector<double>& p_values,
                          const HcNullTable& null_table) {
    if (static_cast<int>(p_values.size()) != null_table.num_pvalues()) {
        throw std::invalid_argument(
            "null table was built for a different p-value count");
    }
    HcResult result;
    result.stat = hc_statistic(p_values);
    result.p_value = null_table.p_value(result.stat);
    return result;
}

HcResult higher_criticism(const std::vector<double>& p_values, int null_draws,
                          std::uint64_t seed) {
    const HcNullTable table =
        HcNullTable::make(static_cast<int>(p_values.size()), null_draws, seed);
    return higher_criticism(p_values, table);
}

ScreenReport panel_heteroscedasticity_screen(
    const Eigen::Ref<const Eigen::MatrixXd>& X, const VarianceTestConfig& cfg,
    int threads) {
    const int p = static_cast<int>(X.cols());
    if (p < 1) throw std::invalid_argument("panel has no columns");
    std::vector<CoordinateResult> results(static_cast<std::size_t>(p));
    std::vector<char> ok(static_cast<std::size_t>(p), 0);
    parallel_for(
        p,
        [&](int c) {
            const auto idx = static_cast<std::size_t>(c);
            try {
                const VarianceTestReport r =
                    variance_constancy_test(X.col(c), cfg);
                results[idx] = {c + 1, r.u, r.standardized, r.p_value};
                ok[idx] = 1;
            } catch (const std::domain_error&) {
                results[idx] = {c + 1, 0.0, 0.0, 1.0};
            }
        },
        threads);

    ScreenReport report;
    std::vector<double> p_values;
    for (int c = 0; c < p; ++c) {
        const auto idx = static_cast<std::size_t>(c);
        if (ok[idx]) {
            report.coordinates.push_back(results[idx]);
            p_values.push_back(results[idx].p_value);
        } else {
            report.skipped.push_back(c + 1);
        }
    }
    if (p_values.empty()) {
        throw std::domain_error("no coordinate passed the test preconditions");
    }
    report.combined = higher_criticism(p_values);
    return report;
}

}  // namespace hdcd
