#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdcd/wbs.hpp"

namespace hdcd {

/// Cross-sectional covariance of the noise vectors.
struct CovarianceSpec {
    enum class Kind { identity, ar1, compound_symmetric };
    Kind kind = Kind::identity;
    double rho = 0.0;  // AR: (-1,1); CS: [0,1)
};

/// Per-coordinate variance trend evaluated at time index i of n.
enum class Trend { A0, A1, A2, A3, A4 };

struct TrendSpec {
    Trend first = Trend::A0;
    Trend second = Trend::A0;  // applied to coordinates p/2+1..p when mixed
    bool mixed = false;
};

/// Evaluates a base trend at index i (1-based) of a length-n panel.
double trend_value(Trend t, int i, int n);

struct MeanPlan {
    enum class Kind { none, one_cp, two_cp, three_cp, zones };
    Kind kind = Kind::none;
    int location = 0;          // one_cp: shift applies from this index on
    Eigen::VectorXd delta;     // one_cp / two_cp / three_cp shift vector
    std::vector<int> zone_ends;               // zones: change locations
    std::vector<Eigen::VectorXd> zone_means;  // zones: one mean per zone
};

struct ScenarioSpec {
    int n = 0;
    int p = 0;
    CovarianceSpec covariance;
    TrendSpec trend;
    MeanPlan mean;
};

/// Draws the panel X_i = mu_i + H(i/n) Z_i with Z_i i.i.d. mean-zero
/// noise under the given covariance. AR rows use the scalar recursion
/// z_1 = eps_1, z_l = rho z_{l-1} + sqrt(1-rho^2) eps_l; CS rows use the
/// one-factor form sqrt(rho) w + sqrt(1-rho) eps. Deterministic under seed.
Eigen::MatrixXd sample_panel(const ScenarioSpec& spec, std::uint64_t seed);

/// Mean vector mu_i of the plan at index i (1-based).
Eigen::VectorXd mean_at(const ScenarioSpec& spec, int i);

struct SizeCell {
    double alpha = 0.0;
    double rate = 0.0;
    double std_error = 0.0;
    int reps = 0;
};

struct SizeExperimentResult {
    std::vector<SizeCell> cells;   // one per alpha
    std::vector<double> p_values;  // one per replication
};

/// Monte Carlo rejection rates of the single- or multi-change test over
/// fresh panels from the scenario. Replications run as a parallel map with
/// per-replication streams; results are thread-count invariant.
SizeExperimentResult run_size_experiment(const ScenarioSpec& spec,
                                         const std::vector<double>& alphas,
                                         int reps, int bootstrap_reps,
                                         std::uint64_t seed, bool multi,
                                         int threads = 0);

struct PowerCell {
    double delta = 0.0;  // per-coordinate shift magnitude
    double power = 0.0;
    int reps = 0;
};

/// Power of the single-change test along a grid of dense shifts
/// delta * 1_p at the scenario's change location.
std::vector<PowerCell> run_power_curve(const ScenarioSpec& null_spec,
                                       const std::vector<double>& delta_grid,
                                       double alpha, int reps,
                                       int bootstrap_reps, std::uint64_t seed,
                                       int threads = 0);

struct WbsExperimentResult {
    std::map<int, int> count_error_histogram;  // estimated minus true count
    double mse = 0.0;                          // of the count error
    double mean_ari = 0.0;
    std::vector<int> exact_hits;  // reps where every |t_hat - truth| <= 3
};

/// Repeated WBS estimation on fresh panels; the scenario's mean plan must
/// be a zones plan (its zone_ends are the ground truth).
WbsExperimentResult run_wbs_experiment(const ScenarioSpec& spec,
                                       const WbsConfig& cfg, int reps,
                                       std::uint64_t seed, int threads = 0);

}  // namespace hdcd
