#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "latus/scenario.hpp"

namespace latus {

/// Vehicle-to-L-UAV association. `assignment[i]` is the L-UAV serving task i.
struct Matching {
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> per_uav_load;
  int passes = 0;         // improvement passes executed
  bool converged = true;  // a pass finished without switches
  bool fallback = false;  // best-seen matching returned instead of the last pass

  static Matching from_assignment(std::vector<std::size_t> assignment, std::size_t n_luavs);
};

/// K * (t_tx + t_comp) + Q_u * e_comp.
double offload_cost(double k, double queue, double t_tx, double t_comp, double e_comp);

/// Inputs shared by both matching stages. Weights are the per-L-UAV energy
/// prices (the deviation queues under the Lyapunov policy).
struct MatchingInputs {
  const SystemParams &params;
  const std::vector<VehicleState> &vehicles;
  const std::vector<TaskRequest> &tasks;
  const std::vector<LUavState> &luavs;  // previous-slot positions
  double delay_weight;
  std::span<const double> energy_weights;
};

/// Cost table [task][uav] with L-UAV u computing the whole task at freq[u].
std::vector<std::vector<double>> cost_table(const MatchingInputs &in, std::span<const double> freq);

/// Sum of each task's cost at its assigned L-UAV with even CPU splitting.
double even_split_cost(const MatchingInputs &in, const std::vector<std::size_t> &assignment);

/// Every task goes to its cheapest L-UAV at full CPU capacity (ties: lowest id).
Matching greedy_match(const MatchingInputs &in);

/// Repeated passes: split each L-UAV's CPU evenly over its current load
/// (full capacity when idle), recompute all costs, then move every vehicle to
/// its cheapest L-UAV. Stops after a pass without switches or `max_passes`.
Matching improve_match(const MatchingInputs &in, const Matching &initial, int max_passes = 50);

}  // namespace latus
