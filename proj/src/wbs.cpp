#include "hdcd/wbs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hdcd/bootstrap.hpp"
#include "hdcd/parallel.hpp"
#include "hdcd/rng.hpp"

namespace hdcd {

namespace {

// Sub-stream tags so interval sampling and threshold multipliers never
// share a stream even though the config carries a single seed.
constexpr std::uint64_t kIntervalTag = 0x1;
constexpr std::uint64_t kThresholdTag = 0x2;

void check_locations(const std::vector<int>& locs, int n, const char* what) {
    int prev = 0;
    for (int c : locs) {
        if (c < 1 || c > n - 1) {
            throw std::invalid_argument(std::string(what) + " location " +
                                        std::to_string(c) +
                                        " outside [1, n-1]");
        }
        if (c <= prev) {
            throw std::invalid_argument(std::string(what) +
                                        " locations not strictly increasing");
        }
        prev = c;
    }
}

double comb2(double m) { return 0.5 * m * (m - 1.0); }

}  // namespace

IntervalSet draw_intervals(int n, int count, std::uint64_t seed) {
    if (n < 5) {
        throw std::domain_error("interval sampling requires n >= 5, got n = " +
                                std::to_string(n));
    }
    if (count < 1) {
        throw std::invalid_argument("interval count must be >= 1");
    }
    IntervalSet set;
    set.seed = seed;
    set.intervals.reserve(static_cast<std::size_t>(count));
    SplitMix64 gen(stream_key(seed, kIntervalTag));
    while (static_cast<int>(set.intervals.size()) < count) {
        const int s = gen.next_int(n);
        const int e = gen.next_int(n);
        if (e - s >= 4) set.intervals.emplace_back(s, e);
    }
    return set;
}

double calibrate_threshold(
    const GramTable& centered_gram, const IntervalSet& intervals,
    const WbsConfig& cfg, const std::function<VectorXd(int)>& multipliers) {
    if (intervals.intervals.empty()) {
        throw std::invalid_argument("interval set is empty");
    }
    if (cfg.threshold_reps < 1) {
        throw std::invalid_argument("threshold replicate count must be >= 1");
    }
    if (!(cfg.quantile_level > 0.0 && cfg.quantile_level < 1.0)) {
        throw std::invalid_argument("quantile level must lie in (0, 1)");
    }
    const int reps = cfg.threshold_reps;
    BootstrapDraws draws;
    draws.seed = cfg.seed;
    draws.values.resize(reps);

    const int workers = std::min(resolve_threads(cfg.threads), reps);
    const auto run_worker = [&](int w, GramTable& work) {
        for (int r = w; r < reps; r += workers) {
            // One multiplier sequence per replicate, shared by all intervals.
            centered_gram.reweighted_into(multipliers(r), work);
            double xi = 0.0;
            bool first = true;
            for (const auto& [s, e] : intervals.intervals) {
                const double v = interval_scan(work, s, e).w;
                if (first || v > xi) {
                    xi = v;
                    first = false;
                }
            }
            draws.values(r) = xi;
        }
    };
    if (workers <= 1) {
        GramTable work;
        run_worker(0, work);
    } else {
        std::vector<std::thread> pool;
        std::vector<GramTable> workspaces(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(run_worker, w,
                              std::ref(workspaces[static_cast<std::size_t>(w)]));
        }
        for (auto& t : pool) t.join();
    }
    return critical_value(draws, 1.0 - cfg.quantile_level);
}

double calibrate_threshold(const GramTable& centered_gram,
                           const IntervalSet& intervals,
                           const WbsConfig& cfg) {
    const std::uint64_t master = stream_key(cfg.seed, kThresholdTag);
    const Eigen::Index n = centered_gram.size();
    return calibrate_threshold(
        centered_gram, intervals, cfg, [master, n](int r) {
            return MultiplierStream{master, static_cast<std::uint64_t>(r)}
                .draw(n);
        });
}

namespace {

struct IntervalStat {
    int s, e;
    double w;
    int t_hat;
};

void wbs_recurse(const std::vector<IntervalStat>& stats, int s, int e,
                 double threshold, ChangePointEstimate& out) {
    if (e - s < 4) return;
    const IntervalStat* best = nullptr;
    for (const auto& iv : stats) {
        if (iv.s < s || iv.e > e) continue;  // strict containment
        if (best == nullptr || iv.w > best->w) best = &iv;
    }
    if (best == nullptr || !(best->w > threshold)) return;
    out.detections.push_back({best->s, best->e, best->w, best->t_hat});
    out.locations.push_back(best->t_hat);
    wbs_recurse(stats, s, best->t_hat, threshold, out);
    wbs_recurse(stats, best->t_hat + 1, e, threshold, out);
}

}  // namespace

ChangePointEstimate wbs_with(const GramTable& gram,
                             const IntervalSet& intervals, double threshold) {
    const int n = static_cast<int>(gram.size());
    std::vector<IntervalStat> stats;
    stats.reserve(intervals.intervals.size());
    for (const auto& [s, e] : intervals.intervals) {
        const IntervalScan scan = interval_scan(gram, s, e);
        stats.push_back({s, e, scan.w, scan.t_hat});
    }
    ChangePointEstimate estimate;
    estimate.threshold = threshold;
    wbs_recurse(stats, 1, n, threshold, estimate);
    std::sort(estimate.locations.begin(), estimate.locations.end());
    return estimate;
}

ChangePointEstimate wbs_estimate(const Eigen::Ref<const MatrixXd>& X,
                                 const WbsConfig& cfg) {
    validate_data(X);
    const int n = static_cast<int>(X.rows());
    const IntervalSet intervals =
        draw_intervals(n, cfg.num_intervals, cfg.seed);
    const GramTable centered = GramTable::centered(X);
    const double threshold = calibrate_threshold(centered, intervals, cfg);
    const GramTable gram = GramTable::from_data(X);
    return wbs_with(gram, intervals, threshold);
}

double adjusted_rand_index(const std::vector<int>& estimated,
                           const std::vector<int>& truth, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    check_locations(estimated, n, "estimated");
    check_locations(truth, n, "truth");
    if (estimated.empty() && truth.empty()) return 1.0;
    if (estimated.empty() || truth.empty()) return 0.0;

    // Segment boundaries (exclusive upper ends) of both labelings.
    auto bounds = [n](const std::vector<int>& locs) {
        std::vector<int> b(locs);
        b.push_back(n);
        return b;
    };
    const std::vector<int> a = bounds(estimated);
    const std::vector<int> b = bounds(truth);

    // Pair counts: cells of the contingency table are intersections of the
    // two segmentations, enumerable by merging the boundary lists.
    double sum_cells = 0.0;
    std::size_t ia = 0, ib = 0;
    int prev = 0;
    while (ia < a.size() && ib < b.size()) {
        const int cut = std::min(a[ia], b[ib]);
        sum_cells += comb2(static_cast<double>(cut - prev));
        prev = cut;
        if (a[ia] == cut) ++ia;
        if (b[ib] == cut) ++ib;
    }
    double sum_a = 0.0;
    prev = 0;
    for (int c : a) {
        sum_a += comb2(static_cast<double>(c - prev));
        prev = c;
    }
    double sum_b = 0.0;
    prev = 0;
    for (int c : b) {
        sum_b += comb2(static_cast<double>(c - prev));
        prev = c;
    }
    const double total = comb2(static_cast<double>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return 1.0;  // both degenerate
    return (sum_cells - expected) / (max_index - expected);
}

}  // namespace hdcd
