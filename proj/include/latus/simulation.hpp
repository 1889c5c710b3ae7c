#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latus/bcd.hpp"
#include "latus/lyapunov.hpp"
#include "latus/scenario.hpp"

namespace latus {

enum class PolicyKind { Latus, FtLatus, DelayOnly, PerSlotCap, EnergyCentric };

struct Policy {
  PolicyKind kind = PolicyKind::Latus;
  double energy_weight = 1.0;      // ENERGY_CENTRIC energy price
  double delay_tiebreak = 1e-3;    // ENERGY_CENTRIC delay weight
  std::vector<Vec2> waypoints;     // FT_LATUS path; empty means the area diagonal

  static Policy make(PolicyKind kind);
};

std::string policy_name(PolicyKind kind);
/// Accepts LATUS, FT_LATUS, DELAY_ONLY, PER_SLOT_CAP, ENERGY_CENTRIC (any case).
std::optional<PolicyKind> parse_policy(const std::string &name);

/// Constant-speed ping-pong along the waypoint polyline, starting at the
/// first waypoint; position after `slot` slots.
Vec2 fixed_trajectory_position(const std::vector<Vec2> &waypoints, double speed_mps, double slot_s,
                               std::size_t slot);

struct SlotMetrics {
  std::size_t slot = 0;
  std::size_t n_tasks = 0;
  double total_delay_s = 0.0;
  double mean_task_delay_s = 0.0;
  std::vector<double> task_delay_s;
  std::vector<double> queue_j;       // Q_u(n) used by the decision
  std::vector<double> queue_next_j;  // Q_u(n+1)
  std::vector<double> e_comp_j;
  std::vector<double> e_relay_j;
  std::vector<double> e_flight_j;
  std::vector<double> e_total_j;
  std::vector<double> harvest_j;
  std::size_t deadline_violations = 0;  // against the original deadlines
  bool deadline_relaxed = false;
  double relaxation = 1.0;
  bool energy_cap_violated = false;
  bool matching_fallback = false;
  std::size_t direct_tasks = 0;
  int bcd_iterations = 0;
  std::vector<double> objective_trace;
  std::vector<std::vector<double>> sca_traces;
  BoundReport bound;
  double dedr = 0.0;
  std::vector<Vec2> luav_positions;
  Vec2 huav_position;
  double max_luav_step_m = 0.0;
  double huav_step_m = 0.0;
  double min_luav_separation_m = 0.0;
};

struct RunSummary {
  double mean_task_delay_s = 0.0;
  double mean_transmit_energy_j = 0.0;  // per slot, averaged over L-UAVs
  double dedr_std = 0.0;
  double queue_max_j = 0.0;
  double final_mean_queue_j = 0.0;
  std::vector<double> mean_net_energy_j;  // per L-UAV time average of E_u - e_u
  double mean_bcd_iterations = 0.0;
  int max_bcd_iterations = 0;
  std::size_t relaxed_slots = 0;
  std::size_t deadline_violations = 0;
  std::size_t bound_violations = 0;
};

struct RunTrace {
  PolicyKind policy = PolicyKind::Latus;
  std::uint64_t seed = 0;
  SystemParams params;
  FleetSpec fleet;
  Vec2 huav_start;
  std::vector<Vec2> luav_start;
  std::vector<SlotMetrics> slots;
  RunSummary summary;
};

struct SimState {
  std::size_t slot = 0;
  std::vector<VehicleState> vehicles;
  std::vector<LUavState> luavs;
  HUavState huav;
  QueueState queues;
  std::vector<double> last_energy;   // E_u(n-1)
  std::vector<double> last_harvest;  // e_u(n-1)
  double dedr_delay_sum = 0.0;
  double dedr_dev_sum = 0.0;
};

SimState initial_state(const SystemParams &params, const FleetSpec &fleet, const Policy &policy);

struct SlotInputs {
  std::vector<VehicleState> vehicles;
  std::vector<TaskRequest> tasks;
  std::vector<double> harvest;
};

/// One slot: queue update from the previous slot, decision, evaluation and
/// state transition.
SlotMetrics step(SimState &state, const SlotInputs &in, const Policy &policy, const SystemParams &params,
                 const std::vector<double> &e_u_max, const BcdOptions &opts = {});

RunTrace run(std::uint64_t seed, const Policy &policy, const SystemParams &params, const FleetSpec &fleet,
             const BcdOptions &opts = {});

/// Recomputes the summary from the per-slot rows.
RunSummary summarize(const std::vector<SlotMetrics> &slots, std::size_t n_luavs);

/// Cumulative mean delay over cumulative mean deviation (+1e-6 J), per slot.
/// `window` > 0 switches to a trailing window of that many slots.
std::vector<double> compute_dedr(const std::vector<double> &delay, const std::vector<double> &deviation,
                                 std::size_t window = 0);

}  // namespace latus
