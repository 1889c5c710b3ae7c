#include "latus/matching.hpp"

#include <algorithm>
#include <stdexcept>

#include "latus/radio.hpp"

namespace latus {

Matching Matching::from_assignment(std::vector<std::size_t> assignment, std::size_t n_luavs) {
  Matching m;
  m.per_uav_load.assign(n_luavs, 0);
  for (std::size_t u : assignment) {
    if (u >= n_luavs) throw std::invalid_argument("Matching: assignment to unknown L-UAV");
    ++m.per_uav_load[u];
  }
  m.assignment = std::move(assignment);
  return m;
}

double offload_cost(double k, double queue, double t_tx, double t_comp, double e_comp) {
  return k * (t_tx + t_comp) + queue * e_comp;
}

std::vector<std::vector<double>> cost_table(const MatchingInputs &in, std::span<const double> freq) {
  const auto &p = in.params;
  std::vector<std::vector<double>> cost(in.tasks.size(), std::vector<double>(in.luavs.size()));
  for (std::size_t i = 0; i < in.tasks.size(); ++i) {
    const auto &t = in.tasks[i];
    const auto &v = in.vehicles[i];
    for (std::size_t u = 0; u < in.luavs.size(); ++u) {
      const auto &lu = in.luavs[u];
      const double t_tx = tx_delay(t.bits, v2lu_link(p, v.position, v.tx_power_w, lu.position).rate);
      const double t_comp = comp_delay(t.bits, t.density, 1.0, freq[u]);
      const double e_comp = comp_energy(t.bits, t.density, 1.0, freq[u], lu.kappa);
      cost[i][u] = offload_cost(in.delay_weight, in.energy_weights[u], t_tx, t_comp, e_comp);
    }
  }
  return cost;
}

namespace {

std::vector<double> even_split(const MatchingInputs &in, const std::vector<std::size_t> &load) {
  std::vector<double> f(in.luavs.size());
  for (std::size_t u = 0; u < f.size(); ++u)
    f[u] = in.luavs[u].cpu_hz / static_cast<double>(std::max<std::size_t>(load[u], 1));
  return f;
}

std::size_t argmin(const std::vector<double> &row) {
  // strict < keeps the lowest index on exact ties
  std::size_t best = 0;
  for (std::size_t u = 1; u < row.size(); ++u)
    if (row[u] < row[best]) best = u;
  return best;
}

void check_inputs(const MatchingInputs &in) {
  if (in.luavs.empty()) throw std::invalid_argument("matching: at least one L-UAV required");
  if (in.energy_weights.size() != in.luavs.size())
    throw std::invalid_argument("matching: one energy weight per L-UAV required");
  if (in.vehicles.size() != in.tasks.size()) throw std::invalid_argument("matching: vehicle/task mismatch");
}

}  // namespace

double even_split_cost(const MatchingInputs &in, const std::vector<std::size_t> &assignment) {
  const auto m = Matching::from_assignment(assignment, in.luavs.size());
  const auto cost = cost_table(in, even_split(in, m.per_uav_load));
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) total += cost[i][assignment[i]];
  return total;
}

Matching greedy_match(const MatchingInputs &in) {
  check_inputs(in);
  std::vector<double> full(in.luavs.size());
  for (std::size_t u = 0; u < full.size(); ++u) full[u] = in.luavs[u].cpu_hz;
  const auto cost = cost_table(in, full);
  std::vector<std::size_t> assignment(in.tasks.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = argmin(cost[i]);
  return Matching::from_assignment(std::move(assignment), in.luavs.size());
}

Matching improve_match(const MatchingInputs &in, const Matching &initial, int max_passes) {
  check_inputs(in);
  Matching cur = Matching::from_assignment(initial.assignment, in.luavs.size());
  Matching best = cur;
  double best_cost = even_split_cost(in, cur.assignment);

  int passes = 0;
  bool converged = false;
  while (passes < max_passes) {
    ++passes;
    const auto cost = cost_table(in, even_split(in, cur.per_uav_load));
    std::vector<std::size_t> next = cur.assignment;
    std::size_t switches = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t target = argmin(cost[i]);
      if (cost[i][target] < cost[i][next[i]]) {
        next[i] = target;
        ++switches;
      }
    }
    if (switches == 0) {
      converged = true;
      break;
    }
    cur = Matching::from_assignment(std::move(next), in.luavs.size());
    const double c = even_split_cost(in, cur.assignment);
    if (c < best_cost) {
      best_cost = c;
      best = cur;
    }
  }

  Matching out = cur;
  if (!converged || even_split_cost(in, cur.assignment) > best_cost) {
    out = best;
    out.fallback = true;
  }
  out.passes = passes;
  out.converged = converged;
  return out;
}

}  // namespace latus
