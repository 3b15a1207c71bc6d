#include "hdcd/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "hdcd/bootstrap.hpp"
#include "hdcd/csv.hpp"
#include "hdcd/diagnostics.hpp"
#include "hdcd/simulate.hpp"
#include "hdcd/wbs.hpp"

namespace hdcd::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

json config_json(const RunConfig& cfg) {
    return json{{"command", cfg.command},
                {"input", cfg.input_path},
                {"output", cfg.output_path},
                {"scenario", cfg.scenario},
                {"alpha", cfg.alpha},
                {"bootstrap_reps", cfg.bootstrap_reps},
                {"wbs_intervals", cfg.wbs_intervals},
                {"wbs_threshold_reps", cfg.wbs_threshold_reps},
                {"reps", cfg.reps},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"version", kVersion}};
}

void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
}

TrendSpec parse_trend(const std::string& token) {
    const auto base = [](const std::string& t) {
        if (t == "a0") return Trend::A0;
        if (t == "a1") return Trend::A1;
        if (t == "a2") return Trend::A2;
        if (t == "a3") return Trend::A3;
        if (t == "a4") return Trend::A4;
        throw UsageError("unknown trend token '" + t + "'");
    };
    TrendSpec spec;
    if (token.size() == 4 && token.substr(0, 2) == "a1") {
        spec.first = Trend::A1;
        spec.second = base(token.substr(2));
        spec.mixed = true;
    } else {
        spec.first = base(token);
    }
    return spec;
}

CovarianceSpec parse_covariance(const std::string& token) {
    if (token == "id") return {CovarianceSpec::Kind::identity, 0.0};
    if (token == "ar05") return {CovarianceSpec::Kind::ar1, 0.5};
    if (token == "ar08") return {CovarianceSpec::Kind::ar1, 0.8};
    if (token == "cs05") return {CovarianceSpec::Kind::compound_symmetric, 0.5};
    throw UsageError("unknown covariance token '" + token + "'");
}

std::vector<std::string> split_dashes(const std::string& name) {
    std::vector<std::string> parts;
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, '-')) parts.push_back(part);
    return parts;
}

int parse_size_token(const std::string& token, char prefix) {
    if (token.size() < 2 || token[0] != prefix) {
        throw UsageError("expected " + std::string(1, prefix) +
                         "<count> token, got '" + token + "'");
    }
    return std::stoi(token.substr(1));
}

/// Builds the zones mean plan of the estimation experiment: change points
/// at 30/60/90 with dense alternating shifts of magnitude k per coordinate.
MeanPlan estimation_plan(int n, int p, double k) {
    MeanPlan plan;
    plan.kind = MeanPlan::Kind::zones;
    plan.zone_ends = {n / 4, n / 2, 3 * n / 4};
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(p);
    plan.zone_means.push_back(nu);
    const double signs[] = {1.0, -1.0, 1.0};
    for (double sign : signs) {
        nu = nu.array() + sign * k;
        plan.zone_means.push_back(nu);
    }
    return plan;
}

int run_simulate(const RunConfig& cfg) {
    const std::vector<std::string> parts = split_dashes(cfg.scenario);
    if (parts.empty()) throw UsageError("empty scenario name");
    const std::string out_csv =
        cfg.output_path.empty() ? cfg.scenario + ".csv" : cfg.output_path;
    const std::string manifest_path = out_csv + ".manifest.json";
    std::ofstream csv(out_csv);
    if (!csv) throw std::runtime_error("cannot write '" + out_csv + "'");
    json manifest = {{"config", config_json(cfg)}, {"version", kVersion}};

    if (parts[0] == "table1" || parts[0] == "table2") {
        if (parts.size() < 3) {
            throw UsageError("expected " + parts[0] +
                             "-<trend>-<cov>[-...] scenario");
        }
        ScenarioSpec spec;
        spec.trend = parse_trend(parts[1]);
        spec.covariance = parse_covariance(parts[2]);
        bool multi = parts[0] == "table2";
        if (multi) {
            spec.n = 50;
            spec.p = 50;
            if (parts.size() > 3) {
                spec.mean.delta = 0.2 * Eigen::VectorXd::Ones(spec.p);
                if (parts[3] == "2cp") {
                    spec.mean.kind = MeanPlan::Kind::two_cp;
                } else if (parts[3] == "3cp") {
                    spec.mean.kind = MeanPlan::Kind::three_cp;
                } else {
                    throw UsageError("unknown table2 variant '" + parts[3] +
                                     "'");
                }
            }
        } else {
            if (parts.size() < 5) {
                throw UsageError(
                    "expected table1-<trend>-<cov>-n<n>-p<p> scenario");
            }
            spec.n = parse_size_token(parts[3], 'n');
            spec.p = parse_size_token(parts[4], 'p');
        }
        const SizeExperimentResult result = run_size_experiment(
            spec, {0.05, 0.1}, cfg.reps, cfg.bootstrap_reps, cfg.seed, multi,
            cfg.threads);
        csv << "scenario,alpha,rate,se,reps\n";
        for (const SizeCell& cell : result.cells) {
            csv << cfg.scenario << ',' << cell.alpha << ',' << cell.rate << ','
                << cell.std_error << ',' << cell.reps << '\n';
        }
        manifest["n"] = spec.n;
        manifest["p"] = spec.p;
    } else if (parts[0] == "table3") {
        if (parts.size() < 3) {
            throw UsageError("expected table3-<trend>-<strong|weak> scenario");
        }
        ScenarioSpec spec;
        spec.n = 120;
        spec.p = 50;
        spec.trend = parse_trend(parts[1]);
        double magnitude = std::sqrt(2.5 / spec.p);
        if (parts[2] == "strong") {
            magnitude *= 2.0;
        } else if (parts[2] != "weak") {
            throw UsageError("expected strong or weak, got '" + parts[2] + "'");
        }
        spec.mean = estimation_plan(spec.n, spec.p, magnitude);
        WbsConfig wbs_cfg;
        wbs_cfg.num_intervals = cfg.wbs_intervals;
        wbs_cfg.threshold_reps = cfg.wbs_threshold_reps;
        const WbsExperimentResult result =
            run_wbs_experiment(spec, wbs_cfg, cfg.reps, cfg.seed, cfg.threads);
        csv << "scenario,metric,value\n";
        for (const auto& [err, count] : result.count_error_histogram) {
            csv << cfg.scenario << ",count_error_" << err << ',' << count
                << '\n';
        }
        csv << cfg.scenario << ",mse," << result.mse << '\n';
        csv << cfg.scenario << ",mean_ari," << result.mean_ari << '\n';
        manifest["n"] = spec.n;
        manifest["p"] = spec.p;
        manifest["signal"] = magnitude;
    } else if (parts[0] == "power") {
        if (parts.size() < 5) {
            throw UsageError("expected power-<trend>-<cov>-n<n>-p<p> scenario");
        }
        ScenarioSpec spec;
        spec.trend = parse_trend(parts[1]);
        spec.covariance = parse_covariance(parts[2]);
        spec.n = parse_size_token(parts[3], 'n');
        spec.p = parse_size_token(parts[4], 'p');
        const std::vector<double> grid = {0.0,  0.05, 0.1, 0.15,
                                          0.2,  0.25, 0.3};
        const auto cells =
            run_power_curve(spec, grid, cfg.alpha, cfg.reps,
                            cfg.bootstrap_reps, cfg.seed, cfg.threads);
        csv << "scenario,delta,power,reps\n";
        for (const PowerCell& cell : cells) {
            csv << cfg.scenario << ',' << cell.delta << ',' << cell.power
                << ',' << cell.reps << '\n';
        }
        manifest["n"] = spec.n;
        manifest["p"] = spec.p;
    } else {
        throw UsageError("unknown scenario family '" + parts[0] + "'");
    }
    write_json(manifest_path, manifest);
    std::cout << "wrote " << out_csv << " and " << manifest_path << '\n';
    return 0;
}

int dispatch(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.command == "simulate") return run_simulate(cfg);

    if (cfg.input_path.empty()) {
        throw UsageError("--input is required for " + cfg.command);
    }
    const Eigen::MatrixXd X = load_csv(cfg.input_path);
    std::cout << "loaded " << X.rows() << " x " << X.cols() << " panel from "
              << cfg.input_path << '\n';
    json report = {{"config", config_json(cfg)},
                   {"version", kVersion},
                   {"n", X.rows()},
                   {"p", X.cols()}};
    const std::string out = cfg.output_path.empty() ? cfg.command + ".json"
                                                    : cfg.output_path;

    if (cfg.command == "test-single" || cfg.command == "test-multi") {
        const TestReport r =
            cfg.command == "test-single"
                ? test_single(X, cfg.alpha, cfg.bootstrap_reps, cfg.seed,
                              cfg.threads)
                : test_multi(X, cfg.alpha, cfg.bootstrap_reps, cfg.seed,
                             cfg.threads);
        report["statistic"] = r.statistic;
        report["critical_value"] = r.critical_value;
        report["alpha"] = r.alpha;
        report["p_value"] = r.p_value;
        report["reject"] = r.reject;
        std::cout << (r.reject ? "reject" : "accept")
                  << " (statistic = " << r.statistic
                  << ", critical value = " << r.critical_value
                  << ", p = " << r.p_value << ")\n";
    } else if (cfg.command == "estimate") {
        WbsConfig wbs_cfg;
        wbs_cfg.num_intervals = cfg.wbs_intervals;
        wbs_cfg.threshold_reps = cfg.wbs_threshold_reps;
        wbs_cfg.seed = cfg.seed;
        wbs_cfg.threads = cfg.threads;
        const ChangePointEstimate est = wbs_estimate(X, wbs_cfg);
        report["threshold"] = est.threshold;
        report["locations"] = est.locations;
        json detections = json::array();
        for (const Detection& d : est.detections) {
            detections.push_back({{"s", d.s},
                                  {"e", d.e},
                                  {"w", d.w},
                                  {"t_hat", d.t_hat}});
        }
        report["detections"] = detections;
        std::cout << "estimated " << est.locations.size()
                  << " change point(s)\n";
    } else if (cfg.command == "diagnose") {
        const ScreenReport screen = panel_heteroscedasticity_screen(
            X, VarianceTestConfig{}, cfg.threads);
        json coords = json::array();
        for (const CoordinateResult& c : screen.coordinates) {
            coords.push_back({{"index", c.index},
                              {"u", c.u},
                              {"standardized", c.standardized},
                              {"p_value", c.p_value}});
        }
        report["coordinates"] = coords;
        report["skipped"] = screen.skipped;
        report["combined"] = {{"hc_stat", screen.combined.stat},
                              {"p_value", screen.combined.p_value}};
        std::cout << "combined heteroscedasticity p-value = "
                  << screen.combined.p_value << '\n';
    } else {
        throw UsageError("unknown command '" + cfg.command + "'");
    }
    report["elapsed_seconds"] = elapsed_since(start);
    write_json(out, report);
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int run(RunConfig cfg) {
    if (!cfg.seed_set) {
        std::random_device rd;
        cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    try {
        if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
            throw UsageError("--alpha must lie in (0, 1)");
        }
        if (cfg.bootstrap_reps < 1 || cfg.wbs_intervals < 1 ||
            cfg.wbs_threshold_reps < 1 || cfg.reps < 1) {
            throw UsageError("replicate and interval counts must be >= 1");
        }
        return dispatch(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace hdcd::cli
