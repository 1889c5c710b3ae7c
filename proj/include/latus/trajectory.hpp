#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "latus/geometry.hpp"
#include "latus/scenario.hpp"

namespace latus {

/// Air-to-ground style link seen from a moving end: rate as a function of the
/// squared horizontal distance phi to a fixed peer.
struct LinkShape {
  double alt_diff = 0.0;
  double bandwidth = 0.0;
  double snr_scale = 0.0;  // P * gamma0 / (N0 * B)

  static LinkShape make(double alt_diff, double bandwidth, double tx_power, double gamma0, double noise_psd);
  double rate(double phi) const;
  double rate_slope(double phi) const;  // dR/dphi, always < 0
};

/// First-order expansion of the rate in phi = |eval - peer|^2 around
/// phi_k = |anchor - peer|^2. A global lower bound on the true rate.
double rate_lower_bound(const Vec2 &anchor, const Vec2 &eval, const Vec2 &peer, double alt_diff, double bandwidth,
                        double tx_power, double gamma0, double noise_psd);

/// Linearised squared distance between two UAVs around their anchors. Never
/// exceeds the true squared distance.
double safety_lower_bound(const Vec2 &pos_u, const Vec2 &pos_v, const Vec2 &anchor_u, const Vec2 &anchor_v);

/// A relayed task with its P2 decision frozen.
struct TrajectoryTask {
  Vec2 vehicle;
  double vehicle_power_w = 0.5;
  double bits = 0.0;
  double density = 0.0;
  double deadline_s = 0.0;
  double alpha = 0.0;
  double f_lu = 0.0;
  double f_h = 0.0;
  std::size_t uav = 0;
};

struct ScaOptions {
  int max_outer = 20;
  double rel_tol = 1e-4;
  double trust_fraction = 0.5;  // trust radius as a fraction of the speed radius
  double penalty_scale = 1e3;   // initial penalty = scale * K
  int max_escalations = 3;
  int max_inner = 300;
};

struct ScaResult {
  std::vector<Vec2> positions;
  std::vector<double> objective_trace;  // true block objective, start point first
  std::vector<double> guard_trace;      // guard objective at the same iterates
  int outer_iterations = 0;
  bool moved = false;
};

/// Optional extra acceptance test: a candidate iterate is kept only if this
/// value does not increase.
using GuardFn = std::function<double(const std::vector<Vec2> &)>;

struct LuavPlanInput {
  const SystemParams *params = nullptr;
  std::vector<TrajectoryTask> tasks;
  std::vector<Vec2> prev;     // previous-slot positions: speed-ball centres and flight reference
  std::vector<Vec2> start;    // current iterate (inside the speed balls)
  std::vector<double> radius;  // reachable distance per slot
  std::vector<double> energy_weight;
  std::vector<double> mass_kg;
  std::vector<double> tx_power_w;
  Vec2 huav;
  double delay_weight = 1.0;
  GuardFn guard;
};

/// K * sum D / R_vu + sum_u w_u * flight energy, with speed balls, pairwise
/// safety distance and task deadlines.
double luav_true_objective(const LuavPlanInput &in, const std::vector<Vec2> &pos);

ScaResult solve_luav_positions(const LuavPlanInput &in, const ScaOptions &opts = {});

struct HuavPlanInput {
  const SystemParams *params = nullptr;
  std::vector<TrajectoryTask> tasks;
  std::vector<Vec2> luav_positions;
  std::vector<double> energy_weight;
  std::vector<double> tx_power_w;
  Vec2 prev;
  Vec2 start;
  double radius = 0.0;
  double delay_weight = 1.0;
  GuardFn guard;
};

/// sum_v (K + w_u P_u) (1 - alpha) D / R_uH.
double huav_true_objective(const HuavPlanInput &in, const Vec2 &pos);

ScaResult solve_huav_position(const HuavPlanInput &in, const ScaOptions &opts = {});

}  // namespace latus
