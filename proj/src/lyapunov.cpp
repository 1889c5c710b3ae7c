#include "latus/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latus/radio.hpp"

namespace latus {

double update_queue(double q, double energy_used, double harvested, double quota) {
  return std::max(q + energy_used - harvested - quota, 0.0);
}

QueueState advance_queues(const QueueState &state, std::span<const double> energy_used,
                          std::span<const double> harvested, double quota) {
  if (energy_used.size() != state.q.size() || harvested.size() != state.q.size())
    throw std::invalid_argument("advance_queues: size mismatch");
  QueueState out{state.q, state.slot_index + 1};
  for (std::size_t u = 0; u < out.q.size(); ++u)
    out.q[u] = update_queue(state.q[u], energy_used[u], harvested[u], quota);
  return out;
}

double slot_objective(double k, double total_delay, std::span<const double> queues,
                      std::span<const double> energies) {
  if (queues.size() != energies.size()) throw std::invalid_argument("slot_objective: size mismatch");
  double obj = k * total_delay;
  for (std::size_t u = 0; u < queues.size(); ++u) obj += queues[u] * energies[u];
  return obj;
}

double bound_constant(std::span<const double> e_u_max, double max_harvest, double quota) {
  double b = 0.0;
  for (double e : e_u_max) b += e * e + (max_harvest + quota) * (max_harvest + quota);
  return 0.5 * b;
}

BoundReport check_prop1(const BoundInputs &in) {
  const std::size_t n = in.queues.size();
  if (in.energies.size() != n || in.harvested.size() != n || in.e_u_max.size() != n)
    throw std::invalid_argument("check_prop1: size mismatch");
  BoundReport r;
  r.e_u_max.assign(in.e_u_max.begin(), in.e_u_max.end());
  r.b_const = bound_constant(in.e_u_max, in.max_harvest, in.quota);
  double drift = 0.0;
  double cross = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    const double q = in.queues[u];
    const double q_next = update_queue(q, in.energies[u], in.harvested[u], in.quota);
    drift += 0.5 * (q_next * q_next - q * q);
    cross += q * (in.energies[u] - in.harvested[u] - in.quota);
    if (in.energies[u] > in.e_u_max[u]) r.energy_within_bound = false;
  }
  r.lhs = drift + in.k * in.total_delay;
  r.rhs = r.b_const + in.k * in.total_delay + cross;
  r.violated = r.lhs > r.rhs + 1e-9 * std::max(1.0, std::abs(r.rhs));
  return r;
}

std::vector<double> luav_energy_upper_bounds(const SystemParams &p, const FleetSpec &fleet) {
  double init_sep = 0.0;
  for (const auto &u : fleet.luavs) init_sep = std::max(init_sep, dist(u.position, fleet.huav.position));
  std::vector<double> out;
  out.reserve(fleet.luavs.size());
  const double work_max = p.task_bits_max * p.density_max;
  for (const auto &u : fleet.luavs) {
    const double reach = init_sep + (u.max_speed_mps + fleet.huav.max_speed_mps) * p.slot_s * p.n_slots;
    const double r_min =
        link_rate(p.bw_lu2hu, u.tx_power_w, los_gain(reach * reach, p.h2_m - p.h1_m, p.gamma0), p.noise_psd);
    const double comp = p.v_max * u.kappa * work_max * u.cpu_hz * u.cpu_hz;
    const double relay = u.tx_power_w * p.v_max * p.task_bits_max / r_min;
    const double flight = flight_energy(u.mass_kg, u.max_speed_mps * p.slot_s, p.slot_s);
    out.push_back(comp + relay + flight);
  }
  return out;
}

}  // namespace latus
