#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hdcd/bootstrap.hpp"
#include "hdcd/gram.hpp"
#include "hdcd/rng.hpp"
#include "hdcd/scan.hpp"
#include "hdcd/simulate.hpp"
#include "test_helpers.hpp"

using namespace hdcd;
using hdcd::testing::random_matrix;

namespace {

// Direct evaluation of the bootstrap split statistic at m from the centered
// rows and multipliers, then rescaled and maximized over m. Independent of
// the Gram-reweighting code path.
double direct_bootstrap_single(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& e) {
    const int n = static_cast<int>(X.rows());
    const Eigen::MatrixXd C = X.rowwise() - X.colwise().mean();
    double best = -1e300;
    for (int m = 2; m <= n - 2; ++m) {
        long double within_left = 0.0L, within_right = 0.0L, cross = 0.0L;
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                const long double term =
                    static_cast<long double>(C.row(i - 1).dot(C.row(j - 1))) *
                    e(i - 1) * e(j - 1);
                if (j <= m) {
                    within_left += term;
                } else if (i > m) {
                    within_right += term;
                } else {
                    cross += term;
                }
            }
        }
        const long double g =
            2.0L / (static_cast<long double>(m) * (m - 1)) * within_left +
            2.0L / (static_cast<long double>(n - m) * (n - m - 1)) *
                within_right -
            2.0L / (static_cast<long double>(m) * (n - m)) * cross;
        const long double scale = static_cast<long double>(m) * (m - 1) *
                                  (n - m) * (n - m - 1) /
                                  (static_cast<long double>(n) * n * n);
        best = std::max(best, static_cast<double>(scale * g));
    }
    return best;
}

Eigen::VectorXd normal_vector(int n, std::uint64_t seed) {
    return random_matrix(n, 1, seed).col(0);
}

}  // namespace

TEST_SUITE_BEGIN("bootstrap");

TEST_CASE("zero multipliers give a zero replicate") {
    const Eigen::MatrixXd X = random_matrix(8, 3, 1);
    const GramTable centered = GramTable::centered(X);
    CHECK(bootstrap_single_stat(centered, Eigen::VectorXd::Zero(8)) == 0.0);
    CHECK(bootstrap_multi_stat(centered, Eigen::VectorXd::Zero(8)) == 0.0);
}

TEST_CASE("unit multipliers reduce to the scan of the centered table") {
    const Eigen::MatrixXd X = random_matrix(10, 4, 2);
    const GramTable centered = GramTable::centered(X);
    const double rep = bootstrap_single_stat(centered, Eigen::VectorXd::Ones(10));
    const double direct = single_scan(centered).max_value;
    CHECK(std::abs(rep - direct) <= 1e-10 * (1.0 + std::abs(direct)));

    const double mrep = bootstrap_multi_stat(centered, Eigen::VectorXd::Ones(10));
    const double mdirect = multi_scan(centered).stat;
    CHECK(std::abs(mrep - mdirect) <= 1e-10 * (1.0 + std::abs(mdirect)));
}

TEST_CASE("replicate matches the direct triple-sum evaluation") {
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXd X =
            random_matrix(10, 3, 100 + static_cast<std::uint64_t>(trial));
        const Eigen::VectorXd e =
            normal_vector(10, 500 + static_cast<std::uint64_t>(trial));
        const GramTable centered = GramTable::centered(X);
        const double got = bootstrap_single_stat(centered, e);
        const double want = direct_bootstrap_single(X, e);
        CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("multi replicate matches the exhaustive pair-loop evaluation") {
    const int n = 10;
    const Eigen::MatrixXd X = random_matrix(n, 3, 71);
    const Eigen::VectorXd e = normal_vector(n, 72);
    const GramTable centered = GramTable::centered(X);
    const GramTable rw = centered.reweighted(e);
    double fwd = -1e300, bwd = -1e300;
    for (int m = 2; m <= n - 2; ++m) {
        for (int k = m + 2; k <= n; ++k) fwd = std::max(fwd, rescaled_g(rw, m, 1, k));
        for (int k = 1; k < m; ++k) bwd = std::max(bwd, rescaled_g(rw, m, k, n));
    }
    const double got = bootstrap_multi_stat(centered, e);
    CHECK(got == doctest::Approx(fwd + bwd).epsilon(1e-10));
}

TEST_CASE("dimension mismatch is rejected") {
    const GramTable centered = GramTable::centered(random_matrix(6, 2, 4));
    CHECK_THROWS_AS(bootstrap_single_stat(centered, Eigen::VectorXd::Ones(5)),
                    std::invalid_argument);
}

TEST_CASE("critical value order statistic") {
    BootstrapDraws draws;
    draws.values.resize(100);
    for (int i = 0; i < 100; ++i) draws.values(i) = i + 1;
    CHECK(critical_value(draws, 0.05) == 95.0);
    CHECK(critical_value(draws, 0.10) == 90.0);

    BootstrapDraws one;
    one.values.resize(1);
    one.values(0) = 7.0;
    CHECK(critical_value(one, 0.5) == 7.0);

    BootstrapDraws flat;
    flat.values = VectorXd::Constant(20, 3.25);
    CHECK(critical_value(flat, 0.01) == 3.25);
    CHECK(critical_value(flat, 0.99) == 3.25);

    CHECK_THROWS_AS(critical_value(draws, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(critical_value(draws, 1.0), std::invalid_argument);
}

TEST_CASE("critical value ignores draw order and is monotone in alpha") {
    BootstrapDraws draws;
    draws.values = normal_vector(200, 9);
    BootstrapDraws shuffled = draws;
    std::reverse(shuffled.values.data(), shuffled.values.data() + 200);
    for (double alpha : {0.01, 0.05, 0.1, 0.5}) {
        CHECK(critical_value(draws, alpha) == critical_value(shuffled, alpha));
    }
    CHECK(critical_value(draws, 0.01) >= critical_value(draws, 0.05));
    CHECK(critical_value(draws, 0.05) >= critical_value(draws, 0.10));
    CHECK(critical_value(draws, 0.10) >= critical_value(draws, 0.50));
}

TEST_CASE("draws are deterministic and thread-count invariant") {
    const Eigen::MatrixXd X = random_matrix(20, 5, 11);
    const GramTable centered = GramTable::centered(X);
    const BootstrapDraws a =
        draw_bootstrap(centered, 32, 99, BootstrapDraws::Kind::single, 1);
    const BootstrapDraws b =
        draw_bootstrap(centered, 32, 99, BootstrapDraws::Kind::single, 4);
    REQUIRE(a.values.size() == b.values.size());
    for (int i = 0; i < a.values.size(); ++i) CHECK(a.values(i) == b.values(i));
}

TEST_CASE("test reports are deterministic under a fixed seed") {
    const Eigen::MatrixXd X = random_matrix(30, 6, 21);
    const TestReport a = test_single(X, 0.05, 50, 1234);
    const TestReport b = test_single(X, 0.05, 50, 1234);
    CHECK(a.statistic == b.statistic);
    CHECK(a.critical_value == b.critical_value);
    CHECK(a.p_value == b.p_value);
    CHECK(a.reject == b.reject);

    const TestReport c = test_multi(X, 0.05, 50, 1234);
    const TestReport d = test_multi(X, 0.05, 50, 1234);
    CHECK(c.statistic == d.statistic);
    CHECK(c.p_value == d.p_value);
}

TEST_CASE("report internal consistency") {
    const Eigen::MatrixXd X = random_matrix(40, 8, 31);
    const TestReport r = test_single(X, 0.05, 100, 5);
    CHECK(r.reject == (r.statistic > r.critical_value));
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.bootstrap_reps == 100);
}

TEST_CASE("a strong noiseless shift rejects with the minimal p-value") {
    const int n = 40, p = 10, reps = 100;
    Eigen::MatrixXd X = random_matrix(n, p, 41) * 0.01;
    for (int i = n / 2; i < n; ++i) X.row(i).array() += 5.0;
    const TestReport r = test_single(X, 0.05, reps, 6);
    CHECK(r.reject);
    CHECK(r.p_value == doctest::Approx(1.0 / (reps + 1)));

    // two shifts of opposite sign: the pair scan rejects too
    Eigen::MatrixXd Y = random_matrix(n, p, 42) * 0.01;
    for (int i = n / 3; i < 2 * n / 3; ++i) Y.row(i).array() += 5.0;
    const TestReport m = test_multi(Y, 0.05, reps, 7);
    CHECK(m.reject);
    CHECK(m.p_value == doctest::Approx(1.0 / (reps + 1)));
}

TEST_CASE("p-values are close to uniform under the null" *
          doctest::timeout(300)) {
    // Null panels with a variance trend; checks the bootstrap calibration at
    // the 0.05 and 0.10 marks.
    ScenarioSpec spec;
    spec.n = 60;
    spec.p = 20;
    spec.covariance = {CovarianceSpec::Kind::ar1, 0.5};
    spec.trend.first = Trend::A1;
    const int reps = 500;
    int le05 = 0, le10 = 0;
    for (int r = 0; r < reps; ++r) {
        const Eigen::MatrixXd X =
            sample_panel(spec, stream_key(777, static_cast<std::uint64_t>(r)));
        const TestReport t = test_single(X, 0.05, 100, stream_key(888, r));
        if (t.p_value <= 0.05) ++le05;
        if (t.p_value <= 0.10) ++le10;
    }
    CHECK(std::abs(le05 / static_cast<double>(reps) - 0.05) <= 0.03);
    CHECK(std::abs(le10 / static_cast<double>(reps) - 0.10) <= 0.04);
}

TEST_SUITE_END();
