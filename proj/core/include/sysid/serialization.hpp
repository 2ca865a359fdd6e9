#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sysid/experiment.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/metrics.hpp"
#include "sysid/state_space.hpp"

namespace sysid {

/// Shortest decimal form that parses back to the same 64-bit float; used
/// for every number we write so outputs are lossless and byte-stable.
std::string format_double(double value);

/// System file format: {"n":..., "d_u":..., "d_y":..., "A":[[...]],
/// "B":[[...]], "C":[[...]]} with row-major arrays of finite doubles.
std::string to_json(const StateSpaceSystem& system);
StateSpaceSystem system_from_json(const std::string& text);
void save_system(const StateSpaceSystem& system, const std::string& path);
StateSpaceSystem load_system(const std::string& path);

/// Trajectory file format: CSV with header t,u_1..u_{d_u},y_1..y_{d_y},
/// one row per step, t starting at 1.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
Trajectory read_trajectory_csv(std::istream& in);
void save_trajectory(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory(const std::string& path);

/// Identification result: {"order":..., "A":[[...]], "B":[[...]],
/// "C":[[...]], "xi":..., "singular_values":[...]}.
std::string to_json(const IdentificationResult& result);

/// Trial records: CSV with a leading status column followed by the record
/// fields in their canonical order.
extern const char* const kTrialRecordCsvHeader;
void write_trial_records_csv(const std::vector<TrialRecord>& records, std::ostream& out);
std::vector<TrialRecord> read_trial_records_csv(std::istream& in);

/// Experiment configuration: JSON object mirroring ExperimentConfig.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string to_json(const ExperimentConfig& config);

/// Per-grid-point aggregate summary as a JSON array.
std::string summary_to_json(const std::vector<ExperimentSummary>& summary);

}  // namespace sysid
