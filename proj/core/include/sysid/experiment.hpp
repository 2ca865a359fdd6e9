#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sysid/estimators.hpp"
#include "sysid/hankel.hpp"
#include "sysid/metrics.hpp"
#include "sysid/random.hpp"
#include "sysid/state_space.hpp"

namespace sysid {

/// Full description of one Monte-Carlo experiment: a ground-truth system
/// drawn once from master_seed, then trials_per_T independent trials at
/// every sample budget in T_grid.
struct ExperimentConfig {
    DesignKind mode = DesignKind::multi_trajectory;
    Eigen::Index n = 5;
    Eigen::Index d_u = 3;
    Eigen::Index d_y = 2;
    Eigen::Index tau = 6;
    double sigma_u = 1.0;
    double sigma_z = 0.1;
    double delta = 0.05;
    std::vector<long long> T_grid = {500, 1000, 2000, 5000, 10000, 20000};
    int trials_per_T = 20;
    std::uint64_t master_seed = 0;
    std::optional<double> beta_override;
    std::string output_path = "experiment.csv";
    /// tau >= n + 1 is required for rank recovery; setting this flag turns
    /// the violation into a warning on stderr instead of an error.
    bool allow_small_tau = false;
};

/// Throws std::invalid_argument on inconsistent configurations; warns on
/// stderr when tau < n + 1 is explicitly allowed.
void validate(const ExperimentConfig& config);

/// Ground truth shared by all trials of one experiment: the system, its
/// Hankel matrix and spectrum, and the H-infinity bound used by the
/// single-trajectory threshold.
struct ExperimentContext {
    ExperimentConfig config;
    StateSpaceSystem system;
    HankelMatrix hankel;
    Eigen::VectorXd hankel_singular_values;
    Eigen::MatrixXd true_cab;  // C A B
    double beta = 0.0;
};

ExperimentContext make_context(const ExperimentConfig& config);

/// Runs one trial: simulates the data for budget T with the seed derived
/// from (master_seed, T, trial_index), fits the least-squares Hankel
/// estimate, applies the threshold and both identification paths (adaptive
/// and known-order oracle, on the same estimate), and fills a TrialRecord.
/// Estimator failures are captured in the record's status.
TrialRecord run_trial(const ExperimentContext& context, long long T, int trial_index);
TrialRecord run_trial(const ExperimentConfig& config, long long T, int trial_index);

/// Per-grid-point aggregates over the ok trials (medians for errors, mean
/// for the order estimate). Aggregates over an empty set are NaN.
struct ExperimentSummary {
    long long T = 0;
    double mean_order = 0.0;
    double median_markov_cab_error = 0.0;
    double median_oracle_cab_error = 0.0;
    double median_hankel_fro_error = 0.0;
};

std::vector<ExperimentSummary> summarize(const std::vector<TrialRecord>& records);

/// Runs the full grid. Trials execute concurrently (capped by the
/// SYSID_THREADS environment variable) and are returned sorted by
/// (T, trial_index), so results do not depend on scheduling. Writes the
/// records CSV to config.output_path and the JSON summary next to it.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

/// Path of the JSON summary written alongside an output CSV:
/// a trailing ".csv" is replaced by ".summary.json".
std::string summary_path_for(const std::string& output_path);

/// Median of a vector (average of the two middle values for even sizes);
/// NaN for empty input.
double median(std::vector<double> values);

}  // namespace sysid
