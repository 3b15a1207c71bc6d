#pragma once

#include <cstdint>
#include <string>

namespace hdcd::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string command;  // test-single | test-multi | estimate | simulate | diagnose
    std::string input_path;
    std::string output_path;
    std::string scenario;  // simulate only
    double alpha = 0.05;
    int bootstrap_reps = 200;
    int wbs_intervals = 1000;
    int wbs_threshold_reps = 200;
    int reps = 500;  // simulate only
    std::uint64_t seed = 0;
    bool seed_set = false;  // when false a random seed is drawn and recorded
    int threads = 0;
};

/// Dispatches the command and writes the report. Returns the process exit
/// code: 0 on success (accept/reject is data, not an error), 2 on usage
/// errors, 3 on data errors, 4 on numeric degeneracy.
int run(RunConfig cfg);

}  // namespace hdcd::cli
