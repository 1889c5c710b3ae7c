#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latus/config.hpp"
#include "latus/simulation.hpp"

namespace latus {

enum class SweepAxis { None, K, NLuavs, EnergyQuota, MaxHarvest, VCount };

std::string axis_name(SweepAxis axis);
/// Accepts none, K, n_luavs, energy_quota, max_harvest, v_count (any case).
std::optional<SweepAxis> parse_axis(const std::string &name);

struct ExperimentSpec {
  SimConfig config;
  std::vector<PolicyKind> policies;
  std::vector<std::uint64_t> seeds;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;  // one run set per value; ignored when axis is None
  std::string out_dir;
};

/// Violated ExperimentSpec invariants (empty when valid).
std::vector<std::string> validate_experiment(const ExperimentSpec &spec);

/// Copy of `cfg` with one sweep axis set to `value`. n_luavs re-lays the fleet
/// on the grid; v_count pins the vehicle count range to [value, value].
SimConfig apply_sweep(const SimConfig &cfg, SweepAxis axis, double value);

struct RunRecord {
  std::string run_id;
  SweepAxis axis = SweepAxis::None;
  double sweep_value = 0.0;
  RunTrace trace;
};

/// Runs every (sweep value, policy, seed) combination in that nesting order.
std::vector<RunRecord> run_experiment(const ExperimentSpec &spec, const BcdOptions &opts = {});

/// Creates `dir` if needed; throws std::runtime_error if it is not writable.
void ensure_output_dir(const std::string &dir);

/// Writes metrics.csv, trajectories.csv and summary.json into `dir`, creating
/// it if needed. Throws std::runtime_error before writing anything if the
/// directory is not writable.
void write_outputs(const std::vector<RunRecord> &runs, const std::string &dir);

}  // namespace latus
