#pragma once

#include <vector>

#include "latus/decision.hpp"
#include "latus/geometry.hpp"
#include "latus/scenario.hpp"

namespace latus {

// Line-of-sight link, computation and energy models. All functions are pure.

struct LinkBudget {
  double gain = 0.0;
  double rate = 0.0;  // bit/s
  double bandwidth = 0.0;
  double tx_power = 0.0;
};

/// gamma0 / (alt_diff^2 + horiz_dist_sq). Throws std::domain_error when the
/// two antennas coincide.
double los_gain(double horiz_dist_sq, double alt_diff, double gamma0);

/// Shannon rate B * log2(1 + P h / (N0 B)).
double link_rate(double bandwidth, double tx_power, double gain, double noise_psd);

double tx_delay(double bits, double rate);
double relay_delay(double bits, double alpha, double rate);

/// D * C * fraction / f. Throws std::domain_error when work is left unserved.
double comp_delay(double bits, double density, double fraction, double cpu_hz);
/// kappa * D * C * fraction * f^2.
double comp_energy(double bits, double density, double fraction, double cpu_hz, double kappa);

double relay_energy(double tx_power, double relay_delay_s);

/// 0.5 * M * tau * (dist / tau)^2.
double flight_energy(double mass_kg, double dist_m, double slot_s);

LinkBudget v2lu_link(const SystemParams &p, const Vec2 &vehicle, double vehicle_power, const Vec2 &luav);
LinkBudget lu2hu_link(const SystemParams &p, const Vec2 &luav, double luav_power, const Vec2 &huav);
LinkBudget v2hu_link(const SystemParams &p, const Vec2 &vehicle, double vehicle_power, const Vec2 &huav);

struct TaskDelayBreakdown {
  double t_v2lu = 0.0;
  double t_lu_comp = 0.0;
  double t_lu2hu = 0.0;
  double t_h_comp = 0.0;
  double t_v2hu_direct = 0.0;
  double total = 0.0;
};

struct LUavEnergyBreakdown {
  double e_comp = 0.0;
  double e_relay = 0.0;
  double e_flight = 0.0;
  double total = 0.0;
};

struct SlotEvaluation {
  std::vector<TaskDelayBreakdown> tasks;
  std::vector<LUavEnergyBreakdown> luavs;
  double total_delay = 0.0;

  std::vector<double> luav_energy() const;
};

/// Delay of the relayed path of one task (no direct substitution).
TaskDelayBreakdown relayed_delay(const SystemParams &p, const VehicleState &vehicle, const TaskRequest &task,
                                 const LUavState &luav, const Vec2 &luav_pos, const Vec2 &huav_pos,
                                 double alpha, double f_lu, double f_h);

/// Delay of the direct V2HU path (whole task on the H-UAV).
TaskDelayBreakdown direct_delay(const SystemParams &p, const VehicleState &vehicle, const TaskRequest &task,
                                const Vec2 &huav_pos, double f_h);

/// Realised delays and L-UAV energies of a slot under `alloc`. `luavs` carry
/// the previous-slot positions (for flight energy). Throws
/// std::invalid_argument when the allocation is structurally inconsistent.
SlotEvaluation evaluate_slot(const SystemParams &p, const std::vector<VehicleState> &vehicles,
                             const std::vector<TaskRequest> &tasks, const Allocation &alloc,
                             const std::vector<LUavState> &luavs, const HUavState &huav);

}  // namespace latus
