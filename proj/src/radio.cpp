#include "latus/radio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace latus {

double los_gain(double horiz_dist_sq, double alt_diff, double gamma0) {
  const double d2 = alt_diff * alt_diff + horiz_dist_sq;
  if (!(d2 > 0.0)) throw std::domain_error("los_gain: co-located antennas");
  return gamma0 / d2;
}

double link_rate(double bandwidth, double tx_power, double gain, double noise_psd) {
  if (tx_power <= 0.0) return 0.0;
  return bandwidth * std::log2(1.0 + tx_power * gain / (noise_psd * bandwidth));
}

double tx_delay(double bits, double rate) {
  if (bits == 0.0) return 0.0;
  return bits / rate;
}

double relay_delay(double bits, double alpha, double rate) { return tx_delay(bits * (1.0 - alpha), rate); }

double comp_delay(double bits, double density, double fraction, double cpu_hz) {
  const double work = bits * density * fraction;
  if (work == 0.0) return 0.0;
  if (!(cpu_hz > 0.0)) throw std::domain_error("comp_delay: work assigned to a zero-frequency CPU");
  return work / cpu_hz;
}

double comp_energy(double bits, double density, double fraction, double cpu_hz, double kappa) {
  return kappa * bits * density * fraction * cpu_hz * cpu_hz;
}

double relay_energy(double tx_power, double relay_delay_s) { return tx_power * relay_delay_s; }

double flight_energy(double mass_kg, double dist_m, double slot_s) {
  const double speed = dist_m / slot_s;
  return 0.5 * mass_kg * slot_s * speed * speed;
}

namespace {

LinkBudget make_link(double bandwidth, double power, double gain, double noise) {
  return {gain, link_rate(bandwidth, power, gain, noise), bandwidth, power};
}

}  // namespace

LinkBudget v2lu_link(const SystemParams &p, const Vec2 &vehicle, double vehicle_power, const Vec2 &luav) {
  return make_link(p.bw_v2lu, vehicle_power, los_gain(dist_sq(vehicle, luav), p.h1_m, p.gamma0), p.noise_psd);
}

LinkBudget lu2hu_link(const SystemParams &p, const Vec2 &luav, double luav_power, const Vec2 &huav) {
  return make_link(p.bw_lu2hu, luav_power, los_gain(dist_sq(luav, huav), p.h2_m - p.h1_m, p.gamma0),
                   p.noise_psd);
}

LinkBudget v2hu_link(const SystemParams &p, const Vec2 &vehicle, double vehicle_power, const Vec2 &huav) {
  return make_link(p.bw_v2hu, vehicle_power, los_gain(dist_sq(vehicle, huav), p.h2_m, p.gamma0), p.noise_psd);
}

std::vector<double> SlotEvaluation::luav_energy() const {
  std::vector<double> out;
  out.reserve(luavs.size());
  for (const auto &e : luavs) out.push_back(e.total);
  return out;
}

TaskDelayBreakdown relayed_delay(const SystemParams &p, const VehicleState &vehicle, const TaskRequest &task,
                                 const LUavState &luav, const Vec2 &luav_pos, const Vec2 &huav_pos,
                                 double alpha, double f_lu, double f_h) {
  TaskDelayBreakdown d;
  d.t_v2lu = tx_delay(task.bits, v2lu_link(p, vehicle.position, vehicle.tx_power_w, luav_pos).rate);
  d.t_lu_comp = comp_delay(task.bits, task.density, alpha, f_lu);
  if (alpha < 1.0) d.t_lu2hu = relay_delay(task.bits, alpha, lu2hu_link(p, luav_pos, luav.tx_power_w, huav_pos).rate);
  d.t_h_comp = comp_delay(task.bits, task.density, 1.0 - alpha, f_h);
  d.total = d.t_v2lu + d.t_lu_comp + d.t_lu2hu + d.t_h_comp;
  return d;
}

TaskDelayBreakdown direct_delay(const SystemParams &p, const VehicleState &vehicle, const TaskRequest &task,
                                const Vec2 &huav_pos, double f_h) {
  TaskDelayBreakdown d;
  d.t_v2hu_direct = tx_delay(task.bits, v2hu_link(p, vehicle.position, vehicle.tx_power_w, huav_pos).rate);
  d.t_h_comp = comp_delay(task.bits, task.density, 1.0, f_h);
  d.total = d.t_v2hu_direct + d.t_h_comp;
  return d;
}

SlotEvaluation evaluate_slot(const SystemParams &p, const std::vector<VehicleState> &vehicles,
                             const std::vector<TaskRequest> &tasks, const Allocation &a,
                             const std::vector<LUavState> &luavs, const HUavState &) {
  const std::size_t n = tasks.size();
  const std::size_t u_count = luavs.size();
  auto fail = [](const std::string &what) { throw std::invalid_argument("evaluate_slot: " + what); };
  if (vehicles.size() != n) fail("vehicle/task count mismatch");
  if (a.assignment.size() != n || a.alpha.size() != n || a.f_lu.size() != n || a.f_h.size() != n ||
      a.direct.size() != n)
    fail("allocation vectors must have one entry per task");
  if (a.luav_positions.size() != u_count) fail("one position per L-UAV required");

  SlotEvaluation ev;
  ev.tasks.resize(n);
  ev.luavs.resize(u_count);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &t = tasks[i];
    if (t.vehicle_id != vehicles[i].id) fail("task " + std::to_string(i) + " is not aligned with its vehicle");
    const std::size_t u = a.assignment[i];
    if (u >= u_count) fail("task " + std::to_string(i) + " matched to unknown L-UAV");
    const double alpha = a.alpha[i];
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail("task " + std::to_string(i) + " has alpha outside [0,1]");
    if (a.f_lu[i] < 0.0 || a.f_h[i] < 0.0) fail("negative CPU allocation");

    if (a.direct[i]) {
      ev.tasks[i] = direct_delay(p, vehicles[i], t, a.huav_position, a.f_h[i]);
    } else {
      const auto &lu = luavs[u];
      const Vec2 &pos = a.luav_positions[u];
      ev.tasks[i] = relayed_delay(p, vehicles[i], t, lu, pos, a.huav_position, alpha, a.f_lu[i], a.f_h[i]);
      auto &e = ev.luavs[u];
      e.e_comp += comp_energy(t.bits, t.density, alpha, a.f_lu[i], lu.kappa);
      e.e_relay += relay_energy(lu.tx_power_w, ev.tasks[i].t_lu2hu);
    }
    ev.total_delay += ev.tasks[i].total;
  }
  for (std::size_t u = 0; u < u_count; ++u) {
    auto &e = ev.luavs[u];
    e.e_flight = flight_energy(luavs[u].mass_kg, dist(a.luav_positions[u], luavs[u].position), p.slot_s);
    e.total = e.e_comp + e.e_relay + e.e_flight;
  }
  return ev;
}

}  // namespace latus
