#include "hdcd/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "hdcd/bootstrap.hpp"
#include "hdcd/parallel.hpp"
#include "hdcd/rng.hpp"

namespace hdcd {

namespace {

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.n < 1 || spec.p < 1) {
        throw std::invalid_argument("scenario needs n >= 1 and p >= 1");
    }
    switch (spec.covariance.kind) {
        case CovarianceSpec::Kind::identity:
            break;
        case CovarianceSpec::Kind::ar1:
            if (!(spec.covariance.rho > -1.0 && spec.covariance.rho < 1.0)) {
                throw std::invalid_argument("AR rho must lie in (-1, 1)");
            }
            break;
        case CovarianceSpec::Kind::compound_symmetric:
            if (!(spec.covariance.rho >= 0.0 && spec.covariance.rho < 1.0)) {
                throw std::invalid_argument("CS rho must lie in [0, 1)");
            }
            break;
    }
    if (spec.trend.mixed && spec.p < 2) {
        throw std::invalid_argument("mixed trend needs p >= 2");
    }
    const auto& mean = spec.mean;
    const bool needs_delta = mean.kind == MeanPlan::Kind::one_cp ||
                             mean.kind == MeanPlan::Kind::two_cp ||
                             mean.kind == MeanPlan::Kind::three_cp;
    if (needs_delta && mean.delta.size() != spec.p) {
        throw std::invalid_argument("mean shift dimension must equal p");
    }
    if (mean.kind == MeanPlan::Kind::zones) {
        if (mean.zone_means.size() != mean.zone_ends.size() + 1) {
            throw std::invalid_argument(
                "zones plan needs one more mean than change locations");
        }
        int prev = 0;
        for (int c : mean.zone_ends) {
            if (c <= prev || c >= spec.n) {
                throw std::invalid_argument("zone ends must be increasing "
                                            "and inside (1, n)");
            }
            prev = c;
        }
        for (const auto& v : mean.zone_means) {
            if (v.size() != spec.p) {
                throw std::invalid_argument("zone mean dimension must equal p");
            }
        }
    }
    if (mean.kind == MeanPlan::Kind::one_cp &&
        (mean.location < 2 || mean.location > spec.n)) {
        throw std::invalid_argument("change location must lie in [2, n]");
    }
}

}  // namespace

double trend_value(Trend t, int i, int n) {
    switch (t) {
        case Trend::A0:
            return 1.0;
        case Trend::A1:
            return i <= n / 2.0 ? 0.2 : 0.6;
        case Trend::A2:
            return static_cast<double>(i) / n;
        case Trend::A3: {
            const double c = std::cos(i / std::pow(n, 0.8));
            return 0.2 * (1.0 + c * c);
        }
        case Trend::A4:
            return 0.2 + 0.1 * std::log(1.0 + std::abs(i - n / 2.0));
    }
    return 1.0;
}

Eigen::VectorXd mean_at(const ScenarioSpec& spec, int i) {
    const int n = spec.n;
    const auto& mean = spec.mean;
    switch (mean.kind) {
        case MeanPlan::Kind::none:
            return Eigen::VectorXd::Zero(spec.p);
        case MeanPlan::Kind::one_cp:
            return i >= mean.location ? mean.delta
                                      : Eigen::VectorXd::Zero(spec.p).eval();
        case MeanPlan::Kind::two_cp:
            return (i >= n / 3 && i <= 2 * n / 3)
                       ? mean.delta
                       : Eigen::VectorXd::Zero(spec.p).eval();
        case MeanPlan::Kind::three_cp: {
            double factor = 0.0;
            if (i >= n / 4 && i <= n / 2) factor += 1.0;
            if (i >= 3 * n / 4) factor += 1.0;
            return (factor * mean.delta).eval();
        }
        case MeanPlan::Kind::zones: {
            std::size_t zone = 0;
            while (zone < mean.zone_ends.size() && i > mean.zone_ends[zone]) {
                ++zone;
            }
            return mean.zone_means[zone];
        }
    }
    return Eigen::VectorXd::Zero(spec.p);
}

Eigen::MatrixXd sample_panel(const ScenarioSpec& spec, std::uint64_t seed) {
    validate_scenario(spec);
    const int n = spec.n;
    const int p = spec.p;
    const double rho = spec.covariance.rho;
    NormalStream stream(mix64(seed));
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd z(p);
    const int half = p / 2;
    for (int i = 1; i <= n; ++i) {
        switch (spec.covariance.kind) {
            case CovarianceSpec::Kind::identity:
                for (int l = 0; l < p; ++l) z(l) = stream.next();
                break;
            case CovarianceSpec::Kind::ar1: {
                const double scale = std::sqrt(1.0 - rho * rho);
                z(0) = stream.next();
                for (int l = 1; l < p; ++l) {
                    z(l) = rho * z(l - 1) + scale * stream.next();
                }
                break;
            }
            case CovarianceSpec::Kind::compound_symmetric: {
                const double w = stream.next();
                const double a = std::sqrt(rho);
                const double b = std::sqrt(1.0 - rho);
                for (int l = 0; l < p; ++l) z(l) = a * w + b * stream.next();
                break;
            }
        }
        const double h1 = trend_value(spec.trend.first, i, n);
        const double h2 = spec.trend.mixed
                              ? trend_value(spec.trend.second, i, n)
                              : h1;
        for (int l = 0; l < p; ++l) {
            X(i - 1, l) = (l < half || !spec.trend.mixed ? h1 : h2) * z(l);
        }
        X.row(i - 1) += mean_at(spec, i).transpose();
    }
    return X;
}

SizeExperimentResult run_size_experiment(const ScenarioSpec& spec,
                                         const std::vector<double>& alphas,
                                         int reps, int bootstrap_reps,
                                         std::uint64_t seed, bool multi,
                                         int threads) {
    validate_scenario(spec);
    if (reps < 1) throw std::invalid_argument("replication count must be >= 1");
    const auto kind = multi ? BootstrapDraws::Kind::multi
                            : BootstrapDraws::Kind::single;
    std::vector<std::vector<char>> rejects(
        static_cast<std::size_t>(reps),
        std::vector<char>(alphas.size(), 0));
    std::vector<double> p_values(static_cast<std::size_t>(reps), 0.0);

    parallel_for(
        reps,
        [&](int r) {
            const auto ur = static_cast<std::uint64_t>(r);
            const Eigen::MatrixXd X =
                sample_panel(spec, stream_key(seed, 2 * ur));
            const GramTable gram = GramTable::from_data(X);
            const double stat = multi ? multi_scan(gram).stat
                                      : single_scan(gram).max_value;
            const GramTable centered = GramTable::centered(X);
            const BootstrapDraws draws = draw_bootstrap(
                centered, bootstrap_reps, stream_key(seed, 2 * ur + 1), kind,
                /*threads=*/1);
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                rejects[static_cast<std::size_t>(r)][a] =
                    stat > critical_value(draws, alphas[a]) ? 1 : 0;
            }
            const auto exceed = (draws.values.array() > stat).cast<int>().sum();
            p_values[static_cast<std::size_t>(r)] =
                (static_cast<double>(exceed) + 1.0) / (bootstrap_reps + 1.0);
        },
        threads);

    SizeExperimentResult result;
    result.p_values = std::move(p_values);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        int hits = 0;
        for (int r = 0; r < reps; ++r) {
            hits += rejects[static_cast<std::size_t>(r)][a];
        }
        SizeCell cell;
        cell.alpha = alphas[a];
        cell.reps = reps;
        cell.rate = static_cast<double>(hits) / reps;
        cell.std_error = std::sqrt(cell.rate * (1.0 - cell.rate) / reps);
        result.cells.push_back(cell);
    }
    return result;
}

std::vector<PowerCell> run_power_curve(const ScenarioSpec& null_spec,
                                       const std::vector<double>& delta_grid,
                                       double alpha, int reps,
                                       int bootstrap_reps, std::uint64_t seed,
                                       int threads) {
    std::vector<PowerCell> cells;
    for (std::size_t g = 0; g < delta_grid.size(); ++g) {
        ScenarioSpec spec = null_spec;
        spec.mean.kind = MeanPlan::Kind::one_cp;
        if (spec.mean.location == 0) spec.mean.location = spec.n / 2;
        spec.mean.delta =
            delta_grid[g] * Eigen::VectorXd::Ones(spec.p);
        const SizeExperimentResult res = run_size_experiment(
            spec, {alpha}, reps, bootstrap_reps,
            stream_key(seed, static_cast<std::uint64_t>(g)), /*multi=*/false,
            threads);
        cells.push_back({delta_grid[g], res.cells[0].rate, reps});
    }
    return cells;
}

WbsExperimentResult run_wbs_experiment(const ScenarioSpec& spec,
                                       const WbsConfig& cfg, int reps,
                                       std::uint64_t seed, int threads) {
    validate_scenario(spec);
    if (spec.mean.kind != MeanPlan::Kind::zones) {
        throw std::invalid_argument("WBS experiment needs a zones mean plan");
    }
    const std::vector<int>& truth = spec.mean.zone_ends;
    const int true_count = static_cast<int>(truth.size());

    std::vector<int> count_errors(static_cast<std::size_t>(reps), 0);
    std::vector<double> aris(static_cast<std::size_t>(reps), 0.0);
    std::vector<char> exact(static_cast<std::size_t>(reps), 0);

    parallel_for(
        reps,
        [&](int r) {
            const auto ur = static_cast<std::uint64_t>(r);
            const Eigen::MatrixXd X =
                sample_panel(spec, stream_key(seed, 2 * ur));
            WbsConfig rep_cfg = cfg;
            rep_cfg.seed = stream_key(seed, 2 * ur + 1);
            rep_cfg.threads = 1;
            const ChangePointEstimate est = wbs_estimate(X, rep_cfg);
            const int err =
                static_cast<int>(est.locations.size()) - true_count;
            count_errors[static_cast<std::size_t>(r)] = err;
            aris[static_cast<std::size_t>(r)] =
                adjusted_rand_index(est.locations, truth, spec.n);
            bool hit = err == 0;
            if (hit) {
                for (int j = 0; j < true_count; ++j) {
                    if (std::abs(est.locations[static_cast<std::size_t>(j)] -
                                 truth[static_cast<std::size_t>(j)]) > 3) {
                        hit = false;
                        break;
                    }
                }
            }
            exact[static_cast<std::size_t>(r)] = hit ? 1 : 0;
        },
        threads);

    WbsExperimentResult result;
    double sq = 0.0, ari_sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto idx = static_cast<std::size_t>(r);
        ++result.count_error_histogram[count_errors[idx]];
        sq += static_cast<double>(count_errors[idx]) * count_errors[idx];
        ari_sum += aris[idx];
        if (exact[idx]) result.exact_hits.push_back(r);
    }
    result.mse = sq / reps;
    result.mean_ari = ari_sum / reps;
    return result;
}

}  // namespace hdcd
