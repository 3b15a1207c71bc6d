#include "hdcd/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hdcd/parallel.hpp"
#include "hdcd/rng.hpp"

namespace hdcd {

double bootstrap_single_stat(const GramTable& centered_gram, const VectorXd& e,
                             GramTable& work) {
    centered_gram.reweighted_into(e, work);
    return single_scan(work).max_value;
}

double bootstrap_single_stat(const GramTable& centered_gram,
                             const VectorXd& e) {
    GramTable work;
    return bootstrap_single_stat(centered_gram, e, work);
}

double bootstrap_multi_stat(const GramTable& centered_gram, const VectorXd& e,
                            GramTable& work) {
    centered_gram.reweighted_into(e, work);
    return multi_scan(work).stat;
}

double bootstrap_multi_stat(const GramTable& centered_gram,
                            const VectorXd& e) {
    GramTable work;
    return bootstrap_multi_stat(centered_gram, e, work);
}

double critical_value(const BootstrapDraws& draws, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const Eigen::Index reps = draws.values.size();
    if (reps < 1) {
        throw std::invalid_argument("critical value needs at least one draw");
    }
    std::vector<double> sorted(draws.values.data(),
                               draws.values.data() + reps);
    std::sort(sorted.begin(), sorted.end());
    const auto drop = static_cast<Eigen::Index>(
        std::floor(alpha * static_cast<double>(reps)));
    return sorted[static_cast<std::size_t>(reps - drop - 1)];
}

BootstrapDraws draw_bootstrap(const GramTable& centered_gram, int reps,
                              std::uint64_t seed, BootstrapDraws::Kind kind,
                              int threads) {
    if (reps < 1) {
        throw std::invalid_argument("bootstrap replicate count must be >= 1");
    }
    const Eigen::Index n = centered_gram.size();
    BootstrapDraws draws;
    draws.kind = kind;
    draws.seed = seed;
    draws.values.resize(reps);

    const int workers = std::min(resolve_threads(threads), reps);
    // Worker w handles replicates w, w + workers, ... with a private
    // reweighting workspace. Each replicate's stream key depends only on
    // (seed, replicate), so the draw vector is thread-count invariant.
    const auto run_worker = [&](int w, GramTable& work) {
        for (int r = w; r < reps; r += workers) {
            const VectorXd e =
                MultiplierStream{seed, static_cast<std::uint64_t>(r)}.draw(n);
            draws.values(r) = kind == BootstrapDraws::Kind::single
                                  ? bootstrap_single_stat(centered_gram, e, work)
                                  : bootstrap_multi_stat(centered_gram, e, work);
        }
    };
    if (workers <= 1) {
        GramTable work;
        run_worker(0, work);
    } else {
        std::vector<std::thread> pool;
        std::vector<GramTable> workspaces(static_cast<std::size_t>(workers));
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(run_worker, w,
                              std::ref(workspaces[static_cast<std::size_t>(w)]));
        }
        for (auto& t : pool) t.join();
    }
    return draws;
}

namespace {

TestReport run_test(const Eigen::Ref<const MatrixXd>& X, double alpha,
                    int reps, std::uint64_t seed, BootstrapDraws::Kind kind,
                    int threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const GramTable gram = GramTable::from_data(X);
    const double stat = kind == BootstrapDraws::Kind::single
                            ? single_scan(gram).max_value
                            : multi_scan(gram).stat;
    const GramTable centered = GramTable::centered(X);
    const BootstrapDraws draws =
        draw_bootstrap(centered, reps, seed, kind, threads);

    TestReport report;
    report.statistic = stat;
    report.alpha = alpha;
    report.bootstrap_reps = reps;
    report.seed = seed;
    report.critical_value = critical_value(draws, alpha);
    report.reject = stat > report.critical_value;
    const auto exceed =
        (draws.values.array() > stat).cast<int>().sum();
    report.p_value = (static_cast<double>(exceed) + 1.0) /
                     (static_cast<double>(reps) + 1.0);
    return report;
}

}  // namespace

TestReport test_single(const Eigen::Ref<const MatrixXd>& X, double alpha,
                       int reps, std::uint64_t seed, int threads) {
    return run_test(X, alpha, reps, seed, BootstrapDraws::Kind::single,
                    threads);
}

TestReport test_multi(const Eigen::Ref<const MatrixXd>& X, double alpha,
                      int reps, std::uint64_t seed, int threads) {
    return run_test(X, alpha, reps, seed, BootstrapDraws::Kind::multi,
                    threads);
}

}  // namespace hdcd
