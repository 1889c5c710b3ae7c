#pragma once

#include <optional>
#include <vector>

#include "latus/decision.hpp"
#include "latus/matching.hpp"
#include "latus/radio.hpp"
#include "latus/resource_allocator.hpp"
#include "latus/scenario.hpp"
#include "latus/trajectory.hpp"

namespace latus {

/// Everything one slot's optimisation needs. UAV states carry the
/// previous-slot positions.
struct SlotContext {
  const SystemParams *params = nullptr;
  const std::vector<VehicleState> *vehicles = nullptr;
  const std::vector<TaskRequest> *tasks = nullptr;
  const std::vector<LUavState> *luavs = nullptr;
  HUavState huav;
  double delay_weight = 1.0;
  std::vector<double> energy_weights;  // one per L-UAV
  std::optional<Vec2> fixed_huav;      // scheduled H-UAV position; its block is skipped
  std::vector<double> energy_cap;      // per-L-UAV slot budget in J; empty disables the cap
};

struct BcdOptions {
  int j_max = 10;
  double rel_tol = 1e-4;
  AlternateOptions p2;
  ScaOptions sca;
};

struct SlotDecision {
  Matching matching;
  Allocation alloc;
  SlotEvaluation evaluation;
  double objective = 0.0;
  std::vector<double> objective_trace;             // after the first P2, then after every iteration
  std::vector<std::vector<double>> sca_traces;     // slot objective per accepted SCA iterate
  int bcd_iterations = 0;
  bool converged = false;
  bool deadline_relaxed = false;
  double relaxation = 1.0;
  bool energy_cap_violated = false;
  std::vector<double> cap_weights;  // energy prices found for the cap, if any
};

/// K * T + sum_u w_u E_u for a complete allocation.
double slot_cost(const SlotContext &ctx, const Allocation &alloc, SlotEvaluation *eval = nullptr);

/// Re-decides which tasks bypass their L-UAV. A task goes direct only when
/// its split ratio is ~0, the direct path meets `deadlines[i]`, and its own
/// weighted cost does not grow.
void assign_direct_flags(const SlotContext &ctx, Allocation &alloc, const std::vector<double> &deadlines);

/// Matching once, then block coordinate descent over {split and CPU, L-UAV
/// positions, H-UAV position}.
SlotDecision optimize_slot(const SlotContext &ctx, const BcdOptions &opts = {});

}  // namespace latus
