#include <string>

#include <CLI11.hpp>

#include "hdcd/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Change-point testing and estimation for high-dimensional "
                 "panels with time-varying variance"};
    app.require_subcommand(1);

    hdcd::cli::RunConfig cfg;
    std::string seed_text;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_text,
                        "RNG seed (default: random, recorded in the report)");
        sub->add_option("--threads", cfg.threads,
                        "worker threads (default: HDCD_THREADS or all cores)");
        sub->add_option("--output", cfg.output_path, "report path");
    };
    const auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "input CSV panel")
            ->required();
    };

    auto* single = app.add_subcommand("test-single",
                                      "test for a single mean change");
    add_input(single);
    single->add_option("--alpha", cfg.alpha, "significance level");
    single->add_option("--bootstrap-reps", cfg.bootstrap_reps,
                       "bootstrap replicates");
    add_common(single);

    auto* multi = app.add_subcommand("test-multi",
                                     "test against multiple mean changes");
    add_input(multi);
    multi->add_option("--alpha", cfg.alpha, "significance level");
    multi->add_option("--bootstrap-reps", cfg.bootstrap_reps,
                      "bootstrap replicates");
    add_common(multi);

    auto* estimate = app.add_subcommand(
        "estimate", "estimate change-point locations via WBS");
    add_input(estimate);
    estimate->add_option("--intervals", cfg.wbs_intervals,
                         "random scan intervals");
    estimate->add_option("--threshold-reps", cfg.wbs_threshold_reps,
                         "bootstrap replicates for the threshold");
    add_common(estimate);

    auto* simulate = app.add_subcommand(
        "simulate", "run a named Monte Carlo experiment");
    simulate->add_option("--scenario", cfg.scenario, "scenario name")
        ->required();
    simulate->add_option("--reps", cfg.reps, "Monte Carlo replications");
    simulate->add_option("--bootstrap-reps", cfg.bootstrap_reps,
                         "bootstrap replicates per test");
    simulate->add_option("--intervals", cfg.wbs_intervals,
                         "WBS scan intervals (table3 scenarios)");
    simulate->add_option("--threshold-reps", cfg.wbs_threshold_reps,
                         "WBS threshold replicates (table3 scenarios)");
    simulate->add_option("--alpha", cfg.alpha,
                         "significance level (power scenarios)");
    add_common(simulate);

    auto* diagnose = app.add_subcommand(
        "diagnose", "per-coordinate variance-constancy screen");
    add_input(diagnose);
    add_common(diagnose);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (!seed_text.empty()) {
        try {
            cfg.seed = std::stoull(seed_text);
            cfg.seed_set = true;
        } catch (const std::exception&) {
            std::fprintf(stderr, "usage error: invalid --seed '%s'\n",
                         seed_text.c_str());
            return 2;
        }
    }
    return hdcd::cli::run(cfg);
}
