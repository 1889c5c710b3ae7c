#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace latus {

/// One relayed task as seen by the CPU/split allocator. Positions are fixed,
/// so the V2LU delay and the LU2HU rate are constants here.
struct AllocTask {
  double bits = 0.0;
  double density = 0.0;
  double deadline_s = 0.0;
  double v2lu_delay_s = 0.0;
  double relay_rate = 0.0;  // LU2HU bit/s of the serving L-UAV
  std::size_t server = 0;   // index into AllocProblem::servers
};

struct AllocServer {
  double cpu_hz = 0.0;
  double kappa = 0.0;
  double tx_power_w = 0.0;
  double energy_weight = 0.0;  // Q_u under the Lyapunov policy
};

struct AllocProblem {
  double delay_weight = 1.0;  // K
  std::vector<AllocTask> tasks;
  std::vector<AllocServer> servers;
  double huav_cpu_hz = 0.0;
};

struct ResourceSolution {
  std::vector<double> alpha;
  std::vector<double> f_lu;
  std::vector<double> f_h;
  double objective = 0.0;
  bool feasible = false;
  int iterations = 0;
  std::vector<std::string> violations;
};

/// K * sum of task delays + sum_u w_u * (computation + relay energy).
/// A zero frequency is allowed only for a task side with no work.
double p2_objective(const AllocProblem &prob, const std::vector<double> &alpha, const std::vector<double> &f_lu,
                    const std::vector<double> &f_h);

/// Largest relative deadline excess over all tasks (0 when every deadline holds).
double max_deadline_excess(const AllocProblem &prob, const std::vector<double> &alpha,
                           const std::vector<double> &f_lu, const std::vector<double> &f_h);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;  // "lu_capacity(u)", "task_deadline(v)", "hu_capacity"
  double huav_demand_hz = 0.0;          // least H-UAV capacity the split needs
};

/// Exact test whether some CPU allocation meets every deadline for the given
/// split ratios.
FeasibilityReport check_feasibility(const AllocProblem &prob, const std::vector<double> &alpha);

struct FStep {
  std::vector<double> f_lu;
  std::vector<double> f_h;
  bool feasible = false;
  std::vector<std::string> violations;
};

/// Optimal CPU frequencies for fixed split ratios (capacity and deadline
/// multipliers found by nested monotone root-finding).
FStep solve_f_given_alpha(const AllocProblem &prob, const std::vector<double> &alpha);

struct AlphaStep {
  std::vector<double> alpha;
  bool feasible = true;
  std::vector<std::size_t> infeasible_tasks;
};

/// Per-task endpoint of the deadline interval that minimises the (linear)
/// objective at fixed frequencies. Tasks whose interval is empty keep `current`.
AlphaStep solve_alpha_given_f(const AllocProblem &prob, const std::vector<double> &f_lu,
                              const std::vector<double> &f_h, const std::vector<double> &current);

/// 0.5 clamped into each task's deadline interval under an even CPU split.
std::vector<double> initial_alpha(const AllocProblem &prob);

struct AlternateOptions {
  int max_rounds = 30;
  double rel_tol = 1e-6;
};

/// Alternates the two inner solves from `alpha0` (which must pass
/// check_feasibility). The objective is non-increasing across rounds.
ResourceSolution alternate_p2(const AllocProblem &prob, const std::vector<double> &alpha0,
                              const AlternateOptions &opts = {});

/// Best alternate_p2 result over the feasible members of `starts` plus the
/// all-0 and all-1 splits. Infeasible when no start is feasible.
ResourceSolution solve_p2_multistart(const AllocProblem &prob, std::vector<std::vector<double>> starts,
                                     const AlternateOptions &opts = {});

struct DeadlineRelaxation {
  double factor = 1.0;          // multiplier applied to every deadline
  std::vector<double> alpha;    // a split that is feasible at `factor`
};

/// Smallest common deadline multiplier (>= 1) that makes the slot feasible for
/// at least one candidate split, padded by 1e-3 relative when above 1.
DeadlineRelaxation min_deadline_relaxation(const AllocProblem &prob);

/// Copy of `prob` with every deadline multiplied by `factor`.
AllocProblem scale_deadlines(const AllocProblem &prob, double factor);

}  // namespace latus
