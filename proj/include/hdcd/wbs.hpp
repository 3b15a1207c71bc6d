#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hdcd/gram.hpp"
#include "hdcd/scan.hpp"

namespace hdcd {

/// Random scan segments for wild binary segmentation. Every interval
/// satisfies e - s >= 4 so its scan range is nonempty.
struct IntervalSet {
    std::vector<std::pair<int, int>> intervals;
    std::uint64_t seed = 0;
};

struct WbsConfig {
    int num_intervals = 1000;    // N
    int threshold_reps = 200;    // R bootstrap replicates for the threshold
    double quantile_level = 0.95;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct Detection {
    int s = 0;  // interval that triggered the detection
    int e = 0;
    double w = 0.0;
    int t_hat = 0;  // estimated location within [s+2, e-2]
};

struct ChangePointEstimate {
    std::vector<int> locations;  // sorted
    double threshold = 0.0;
    std::vector<Detection> detections;  // in detection order
};

/// N intervals sampled uniformly from {(s, e): 1 <= s < e <= n, e - s >= 4}
/// by rejection. Deterministic under the seed. Requires n >= 5.
IntervalSet draw_intervals(int n, int count, std::uint64_t seed);

/// Bootstrap threshold: for each replicate, one length-n multiplier
/// sequence is shared by every interval; the replicate value is the max of
/// the interval scan maxima, and the threshold is the empirical
/// quantile-level order statistic over replicates.
double calibrate_threshold(const GramTable& centered_gram,
                           const IntervalSet& intervals, const WbsConfig& cfg);

/// As above with an injectable multiplier source (replicate index ->
/// length-n vector); used by tests to force specific multipliers.
double calibrate_threshold(
    const GramTable& centered_gram, const IntervalSet& intervals,
    const WbsConfig& cfg,
    const std::function<VectorXd(int)>& multipliers);

/// Recursive segmentation of [1, n] given precomputed interval statistics:
/// within [s, e] pick the strictly contained interval with the largest scan
/// max; if it exceeds the threshold, record its maximizing location t and
/// recurse on [s, t] and [t+1, e].
ChangePointEstimate wbs_with(const GramTable& gram,
                             const IntervalSet& intervals, double threshold);

/// Full estimator: draw intervals, calibrate the threshold on the centered
/// Gram, then segment using statistics from the raw Gram.
ChangePointEstimate wbs_estimate(const Eigen::Ref<const MatrixXd>& X,
                                 const WbsConfig& cfg);

/// Chance-corrected agreement between two segmentations of 1..n, each given
/// by its sorted change locations (segment j is (c_{j-1}, c_j]). By
/// convention an empty estimate scores 0 against a nonempty truth, and 1 if
/// both are empty.
double adjusted_rand_index(const std::vector<int>& estimated,
                           const std::vector<int>& truth, int n);

}  // namespace hdcd
