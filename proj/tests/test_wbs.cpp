#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hdcd/gram.hpp"
#include "hdcd/rng.hpp"
#include "hdcd/scan.hpp"
#include "hdcd/simulate.hpp"
#include "hdcd/wbs.hpp"
#include "test_helpers.hpp"

using namespace hdcd;
using hdcd::testing::random_matrix;

namespace {

// Independent pair-counting ARI over the contingency table of two labelings.
double ari_oracle(const std::vector<int>& a_cps, const std::vector<int>& b_cps,
                  int n) {
    auto label = [n](const std::vector<int>& cps, int i) {
        int seg = 0;
        for (int c : cps) {
            if (i > c) ++seg;
        }
        return seg;
    };
    std::map<std::pair<int, int>, long long> cells;
    std::map<int, long long> row_sums, col_sums;
    for (int i = 1; i <= n; ++i) {
        const int a = label(a_cps, i);
        const int b = label(b_cps, i);
        ++cells[{a, b}];
        ++row_sums[a];
        ++col_sums[b];
    }
    auto c2 = [](long long m) { return m * (m - 1) / 2.0; };
    double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [k, v] : cells) sum_cells += c2(v);
    for (const auto& [k, v] : row_sums) sum_rows += c2(v);
    for (const auto& [k, v] : col_sums) sum_cols += c2(v);
    const double total = c2(n);
    const double expected = sum_rows * sum_cols / total;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;
    return (sum_cells - expected) / (max_index - expected);
}

}  // namespace

TEST_SUITE_BEGIN("wbs");

TEST_CASE("n = 5 admits only the full interval") {
    const IntervalSet set = draw_intervals(5, 7, 3);
    REQUIRE(set.intervals.size() == 7);
    for (const auto& [s, e] : set.intervals) {
        CHECK(s == 1);
        CHECK(e == 5);
    }
}

TEST_CASE("drawn intervals satisfy the length invariant") {
    const IntervalSet set = draw_intervals(100, 1000, 17);
    REQUIRE(set.intervals.size() == 1000);
    for (const auto& [s, e] : set.intervals) {
        CHECK(s >= 1);
        CHECK(e <= 100);
        CHECK(e - s >= 4);
    }
}

TEST_CASE("interval drawing is deterministic and rejects n < 5") {
    const IntervalSet a = draw_intervals(50, 200, 9);
    const IntervalSet b = draw_intervals(50, 200, 9);
    CHECK(a.intervals == b.intervals);
    CHECK_THROWS_AS(draw_intervals(4, 10, 1), std::domain_error);
}

TEST_CASE("forced zero multipliers give a zero threshold") {
    const Eigen::MatrixXd X = random_matrix(30, 4, 5);
    const GramTable centered = GramTable::centered(X);
    const IntervalSet set = draw_intervals(30, 50, 11);
    WbsConfig cfg;
    cfg.threshold_reps = 20;
    const double xi = calibrate_threshold(
        centered, set, cfg,
        [](int) { return VectorXd::Zero(30); });
    CHECK(xi == 0.0);
}

TEST_CASE("R = 1 threshold equals the single replicate value") {
    const int n = 30;
    const Eigen::MatrixXd X = random_matrix(n, 4, 19);
    const GramTable centered = GramTable::centered(X);
    const IntervalSet set = draw_intervals(n, 40, 23);
    WbsConfig cfg;
    cfg.threshold_reps = 1;
    const VectorXd e = random_matrix(n, 1, 29).col(0);
    const double xi = calibrate_threshold(centered, set, cfg,
                                          [&](int) { return e; });
    // reproduce the replicate by hand: max of interval scans of the
    // reweighted table
    const GramTable rw = centered.reweighted(e);
    double want = -1e300;
    for (const auto& [s, eend] : set.intervals) {
        want = std::max(want, interval_scan(rw, s, eend).w);
    }
    CHECK(xi == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("threshold calibration rejects an empty interval set") {
    const GramTable centered = GramTable::centered(random_matrix(20, 2, 1));
    IntervalSet empty;
    CHECK_THROWS_AS(calibrate_threshold(centered, empty, WbsConfig{}),
                    std::invalid_argument);
}

TEST_CASE("zero data yields no change-points") {
    WbsConfig cfg;
    cfg.num_intervals = 100;
    cfg.threshold_reps = 20;
    cfg.seed = 13;
    const ChangePointEstimate est =
        wbs_estimate(Eigen::MatrixXd::Zero(40, 3), cfg);
    CHECK(est.locations.empty());
}

TEST_CASE("single interval reduces to the single scan") {
    const int n = 30;
    Eigen::MatrixXd X = random_matrix(n, 4, 37) * 0.01;
    for (int i = 12; i < n; ++i) X.row(i).array() += 3.0;
    const GramTable gram = GramTable::from_data(X);
    IntervalSet set;
    set.intervals = {{1, n}};
    const ChangePointEstimate est = wbs_with(gram, set, 1e-6);
    const ScanProfile profile = single_scan(gram);
    REQUIRE(!est.detections.empty());
    CHECK(est.detections.front().t_hat == profile.argmax);
    CHECK(est.detections.front().w == doctest::Approx(profile.max_value));
}

TEST_CASE("detections respect interval bounds and partition recursion") {
    const int n = 120, p = 10;
    Eigen::MatrixXd X = random_matrix(n, p, 41) * 0.5;
    for (int i = 30; i < 60; ++i) X.row(i).array() += 2.0;
    for (int i = 90; i < n; ++i) X.row(i).array() -= 2.0;
    WbsConfig cfg;
    cfg.num_intervals = 300;
    cfg.threshold_reps = 50;
    cfg.seed = 43;
    const ChangePointEstimate est = wbs_estimate(X, cfg);
    for (const Detection& d : est.detections) {
        CHECK(d.t_hat >= d.s + 2);
        CHECK(d.t_hat <= d.e - 2);
        CHECK(d.w > est.threshold);
    }
    for (size_t i = 1; i < est.locations.size(); ++i) {
        CHECK(est.locations[i] > est.locations[i - 1]);
    }
}

TEST_CASE("estimation is deterministic under a fixed seed") {
    const Eigen::MatrixXd X = random_matrix(60, 5, 47);
    WbsConfig cfg;
    cfg.num_intervals = 200;
    cfg.threshold_reps = 40;
    cfg.seed = 51;
    const ChangePointEstimate a = wbs_estimate(X, cfg);
    const ChangePointEstimate b = wbs_estimate(X, cfg);
    CHECK(a.threshold == b.threshold);
    CHECK(a.locations == b.locations);
}

TEST_CASE("raising the quantile level weakly raises the threshold") {
    const Eigen::MatrixXd X = random_matrix(60, 5, 53);
    WbsConfig lo, hi;
    lo.num_intervals = hi.num_intervals = 200;
    lo.threshold_reps = hi.threshold_reps = 60;
    lo.seed = hi.seed = 57;
    lo.quantile_level = 0.80;
    hi.quantile_level = 0.99;
    const ChangePointEstimate a = wbs_estimate(X, lo);
    const ChangePointEstimate b = wbs_estimate(X, hi);
    CHECK(b.threshold >= a.threshold);
    CHECK(b.locations.size() <= a.locations.size());
}

TEST_CASE("adjusted Rand index reference values") {
    CHECK(adjusted_rand_index({30, 60, 90}, {30, 60, 90}, 120) == 1.0);
    CHECK(adjusted_rand_index({}, {30, 60, 90}, 120) == 0.0);
    CHECK(adjusted_rand_index({}, {}, 120) == 1.0);
    CHECK(adjusted_rand_index({60}, {}, 120) ==
          doctest::Approx(ari_oracle({60}, {}, 120)).epsilon(1e-12));

    const double got = adjusted_rand_index({29, 61, 90}, {30, 60, 90}, 120);
    const double want = ari_oracle({29, 61, 90}, {30, 60, 90}, 120);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got < 1.0);
    CHECK(got > 0.8);
}

TEST_CASE("adjusted Rand index agrees with the contingency oracle") {
    SplitMix64 gen(123);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 40 + gen.next_int(60);
        auto draw = [&](int count) {
            std::vector<int> cps;
            for (int c = 0; c < count; ++c) cps.push_back(gen.next_int(n - 1));
            std::sort(cps.begin(), cps.end());
            cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
            return cps;
        };
        const std::vector<int> a = draw(gen.next_int(4));
        const std::vector<int> b = draw(gen.next_int(4));
        if (a.empty() || b.empty()) continue;  // conventions tested above
        CHECK(adjusted_rand_index(a, b, n) ==
              doctest::Approx(ari_oracle(a, b, n)).epsilon(1e-12));
    }
}

TEST_CASE("adjusted Rand index validates its input") {
    CHECK_THROWS_AS(adjusted_rand_index({5, 3}, {}, 10), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_rand_index({10}, {}, 10), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_rand_index({0}, {}, 10), std::invalid_argument);
}

TEST_CASE("null data is declared change-free in most runs" *
          doctest::timeout(600)) {
    ScenarioSpec spec;
    spec.n = 120;
    spec.p = 50;
    spec.covariance = {CovarianceSpec::Kind::ar1, 0.5};
    WbsConfig cfg;
    cfg.num_intervals = 500;
    cfg.threshold_reps = 200;
    const int runs = 100;
    int clean = 0;
    for (int r = 0; r < runs; ++r) {
        const Eigen::MatrixXd X =
            sample_panel(spec, stream_key(2024, static_cast<std::uint64_t>(r)));
        WbsConfig c = cfg;
        c.seed = stream_key(4048, static_cast<std::uint64_t>(r));
        if (wbs_estimate(X, c).locations.empty()) ++clean;
    }
    CHECK(clean >= 90);
}

TEST_CASE("a strong three-change design is localized within 3 indices" *
          doctest::timeout(600)) {
    const int n = 120, p = 50;
    const double k = 2.0 * std::sqrt(2.5 / p);
    ScenarioSpec spec;
    spec.n = n;
    spec.p = p;
    spec.covariance = {CovarianceSpec::Kind::ar1, 0.5};
    spec.trend.first = Trend::A1;
    spec.mean.kind = MeanPlan::Kind::zones;
    spec.mean.zone_ends = {30, 60, 90};
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd v1 = Eigen::VectorXd::Constant(p, k);
    spec.mean.zone_means = {v0, v1, v0, v1};
    WbsConfig cfg;
    cfg.num_intervals = 500;
    cfg.threshold_reps = 200;
    const int runs = 50;
    int good = 0;
    for (int r = 0; r < runs; ++r) {
        const Eigen::MatrixXd X =
            sample_panel(spec, stream_key(31337, static_cast<std::uint64_t>(r)));
        WbsConfig c = cfg;
        c.seed = stream_key(1234, static_cast<std::uint64_t>(r));
        const ChangePointEstimate est = wbs_estimate(X, c);
        if (est.locations.size() != 3) continue;
        bool close = true;
        const int truth[3] = {30, 60, 90};
        for (int j = 0; j < 3; ++j) {
            if (std::abs(est.locations[j] - truth[j]) > 3) close = false;
        }
        if (close) ++good;
    }
    CHECK(good >= 45);
}

TEST_SUITE_END();
