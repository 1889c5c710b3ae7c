#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latus/scenario.hpp"

namespace latus {

/// Energy-deviation queues of the L-UAVs, one entry per L-UAV, in joules.
struct QueueState {
  std::vector<double> q;
  std::size_t slot_index = 0;

  static QueueState zeros(std::size_t n_luavs) { return {std::vector<double>(n_luavs, 0.0), 0}; }
};

/// max(q + E - e - E_q, 0).
double update_queue(double q, double energy_used, double harvested, double quota);

/// Applies update_queue element-wise and advances the slot index.
QueueState advance_queues(const QueueState &state, std::span<const double> energy_used,
                          std::span<const double> harvested, double quota);

/// K * T + sum_u Q_u * E_u.
double slot_objective(double k, double total_delay, std::span<const double> queues,
                      std::span<const double> energies);

/// Per-slot sample of the drift-plus-penalty bound.
struct BoundReport {
  double lhs = 0.0;      // 0.5 * sum(Q'^2 - Q^2) + K * T
  double rhs = 0.0;      // B + K * T + sum Q (E - e - E_q)
  double b_const = 0.0;  // 0.5 * sum[(E_max)^2 + (e_m + E_q)^2]
  std::vector<double> e_u_max;
  bool energy_within_bound = true;  // every E_u <= E_u^max
  bool violated = false;
};

struct BoundInputs {
  double k = 0.0;
  double total_delay = 0.0;
  double quota = 0.0;
  double max_harvest = 0.0;
  std::span<const double> queues;
  std::span<const double> energies;
  std::span<const double> harvested;
  std::span<const double> e_u_max;
};

double bound_constant(std::span<const double> e_u_max, double max_harvest, double quota);

BoundReport check_prop1(const BoundInputs &in);

/// Constructive worst-case energy of each L-UAV in one slot: the largest
/// vehicle population with the largest tasks, computed at full CPU speed,
/// relayed entirely at the lowest LU2HU rate any reachable geometry can give,
/// plus flight at top speed.
std::vector<double> luav_energy_upper_bounds(const SystemParams &p, const FleetSpec &fleet);

}  // namespace latus
