#include "latus/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace latus {

Policy Policy::make(PolicyKind kind) {
  Policy p;
  p.kind = kind;
  return p;
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Latus: return "LATUS";
    case PolicyKind::FtLatus: return "FT_LATUS";
    case PolicyKind::DelayOnly: return "DELAY_ONLY";
    case PolicyKind::PerSlotCap: return "PER_SLOT_CAP";
    case PolicyKind::EnergyCentric: return "ENERGY_CENTRIC";
  }
  return "UNKNOWN";
}

std::optional<PolicyKind> parse_policy(const std::string &name) {
  std::string up;
  for (char c : name) up.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (auto k : {PolicyKind::Latus, PolicyKind::FtLatus, PolicyKind::DelayOnly, PolicyKind::PerSlotCap,
                 PolicyKind::EnergyCentric})
    if (policy_name(k) == up) return k;
  return std::nullopt;
}

Vec2 fixed_trajectory_position(const std::vector<Vec2> &waypoints, double speed_mps, double slot_s,
                               std::size_t slot) {
  if (waypoints.empty()) throw std::invalid_argument("fixed trajectory needs at least one waypoint");
  if (waypoints.size() == 1) return waypoints.front();
  // out-and-back polyline
  std::vector<Vec2> loop = waypoints;
  for (std::size_t i = waypoints.size() - 1; i-- > 0;) loop.push_back(waypoints[i]);
  double total = 0.0;
  for (std::size_t i = 1; i < loop.size(); ++i) total += dist(loop[i - 1], loop[i]);
  if (total <= 0.0) return waypoints.front();
  double s = std::fmod(speed_mps * slot_s * static_cast<double>(slot), total);
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const double len = dist(loop[i - 1], loop[i]);
    if (s <= len) return len > 0.0 ? loop[i - 1] + (loop[i] - loop[i - 1]) * (s / len) : loop[i];
    s -= len;
  }
  return loop.back();
}

namespace {

std::vector<Vec2> ft_waypoints(const Policy &policy, const SystemParams &p) {
  if (!policy.waypoints.empty()) return policy.waypoints;
  return {Vec2{0.0, 0.0}, Vec2{p.area_m, p.area_m}};
}

}  // namespace

SimState initial_state(const SystemParams &params, const FleetSpec &fleet, const Policy &policy) {
  SimState s;
  s.luavs = make_luav_states(fleet);
  s.huav = make_huav_state(fleet);
  if (policy.kind == PolicyKind::FtLatus)
    s.huav.position = fixed_trajectory_position(ft_waypoints(policy, params), s.huav.max_speed_mps, params.slot_s, 0);
  s.queues = QueueState::zeros(s.luavs.size());
  return s;
}

SlotMetrics step(SimState &state, const SlotInputs &in, const Policy &policy, const SystemParams &params,
                 const std::vector<double> &e_u_max, const BcdOptions &opts) {
  const std::size_t nu = state.luavs.size();
  if (in.harvest.size() != nu) throw std::invalid_argument("step: one harvest sample per L-UAV required");

  // (1) queue update from the previous slot
  if (state.slot > 0) state.queues = advance_queues(state.queues, state.last_energy, state.last_harvest,
                                                    params.energy_quota_j);
  for (std::size_t u = 0; u < nu; ++u) state.luavs[u].queue_j = state.queues.q[u];

  // (3) decision
  SlotContext ctx;
  ctx.params = &params;
  ctx.vehicles = &in.vehicles;
  ctx.tasks = &in.tasks;
  ctx.luavs = &state.luavs;
  ctx.huav = state.huav;
  ctx.delay_weight = params.control_k;
  ctx.energy_weights = state.queues.q;
  switch (policy.kind) {
    case PolicyKind::Latus: break;
    case PolicyKind::FtLatus:
      ctx.fixed_huav = fixed_trajectory_position(ft_waypoints(policy, params), state.huav.max_speed_mps,
                                                 params.slot_s, state.slot + 1);
      break;
    case PolicyKind::DelayOnly: std::fill(ctx.energy_weights.begin(), ctx.energy_weights.end(), 0.0); break;
    case PolicyKind::PerSlotCap:
      std::fill(ctx.energy_weights.begin(), ctx.energy_weights.end(), 0.0);
      ctx.energy_cap.resize(nu);
      for (std::size_t u = 0; u < nu; ++u) ctx.energy_cap[u] = params.energy_quota_j + in.harvest[u];
      break;
    case PolicyKind::EnergyCentric:
      ctx.delay_weight = policy.delay_tiebreak;
      std::fill(ctx.energy_weights.begin(), ctx.energy_weights.end(), policy.energy_weight);
      break;
  }
  const SlotDecision dec = optimize_slot(ctx, opts);

  // (4) realised delays and energies
  SlotMetrics m;
  m.slot = state.slot;
  m.n_tasks = in.tasks.size();
  const auto &ev = dec.evaluation;
  m.total_delay_s = ev.total_delay;
  m.mean_task_delay_s = m.n_tasks ? ev.total_delay / static_cast<double>(m.n_tasks) : 0.0;
  for (std::size_t i = 0; i < m.n_tasks; ++i) {
    m.task_delay_s.push_back(ev.tasks[i].total);
    if (ev.tasks[i].total > in.tasks[i].deadline_s * (1.0 + 1e-9)) ++m.deadline_violations;
    if (dec.alloc.direct[i]) ++m.direct_tasks;
  }
  m.queue_j = state.queues.q;
  m.harvest_j = in.harvest;
  std::vector<double> energy(nu);
  for (std::size_t u = 0; u < nu; ++u) {
    const auto &e = ev.luavs[u];
    m.e_comp_j.push_back(e.e_comp);
    m.e_relay_j.push_back(e.e_relay);
    m.e_flight_j.push_back(e.e_flight);
    m.e_total_j.push_back(e.total);
    energy[u] = e.total;
  }
  m.queue_next_j = advance_queues(state.queues, energy, in.harvest, params.energy_quota_j).q;
  m.deadline_relaxed = dec.deadline_relaxed;
  m.relaxation = dec.relaxation;
  m.energy_cap_violated = dec.energy_cap_violated;
  m.matching_fallback = dec.matching.fallback;
  m.bcd_iterations = dec.bcd_iterations;
  m.objective_trace = dec.objective_trace;
  m.sca_traces = dec.sca_traces;

  BoundInputs bi;
  bi.k = params.control_k;
  bi.total_delay = ev.total_delay;
  bi.quota = params.energy_quota_j;
  bi.max_harvest = params.max_harvest_j;
  bi.queues = state.queues.q;
  bi.energies = energy;
  bi.harvested = in.harvest;
  bi.e_u_max = e_u_max;
  m.bound = check_prop1(bi);

  double dev = 0.0;
  for (double q : m.queue_next_j) dev += q;
  dev /= static_cast<double>(std::max<std::size_t>(nu, 1));
  state.dedr_delay_sum += m.mean_task_delay_s;
  state.dedr_dev_sum += dev;
  const double cnt = static_cast<double>(state.slot + 1);
  m.dedr = (state.dedr_delay_sum / cnt) / (state.dedr_dev_sum / cnt + 1e-6);

  // feasibility diagnostics
  m.luav_positions = dec.alloc.luav_positions;
  m.huav_position = dec.alloc.huav_position;
  m.min_luav_separation_m = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < nu; ++u) {
    m.max_luav_step_m = std::max(m.max_luav_step_m, dist(state.luavs[u].position, m.luav_positions[u]));
    for (std::size_t v = u + 1; v < nu; ++v)
      m.min_luav_separation_m = std::min(m.min_luav_separation_m, dist(m.luav_positions[u], m.luav_positions[v]));
  }
  m.huav_step_m = dist(state.huav.position, m.huav_position);

  // (5) state transition
  for (std::size_t u = 0; u < nu; ++u) state.luavs[u].position = m.luav_positions[u];
  state.huav.position = m.huav_position;
  state.vehicles = in.vehicles;
  state.last_energy = energy;
  state.last_harvest = in.harvest;
  ++state.slot;
  return m;
}

RunSummary summarize(const std::vector<SlotMetrics> &slots, std::size_t n_luavs) {
  RunSummary s;
  s.mean_net_energy_j.assign(n_luavs, 0.0);
  if (slots.empty()) return s;
  const double n = static_cast<double>(slots.size());
  std::vector<double> dedr;
  for (const auto &m : slots) {
    s.mean_task_delay_s += m.mean_task_delay_s;
    double tx = 0.0;
    for (double e : m.e_relay_j) tx += e;
    s.mean_transmit_energy_j += n_luavs ? tx / static_cast<double>(n_luavs) : 0.0;
    for (std::size_t u = 0; u < n_luavs; ++u) {
      s.mean_net_energy_j[u] += m.e_total_j[u] - m.harvest_j[u];
      s.queue_max_j = std::max({s.queue_max_j, m.queue_j[u], m.queue_next_j[u]});
    }
    s.mean_bcd_iterations += m.bcd_iterations;
    s.max_bcd_iterations = std::max(s.max_bcd_iterations, m.bcd_iterations);
    if (m.deadline_relaxed) ++s.relaxed_slots;
    s.deadline_violations += m.deadline_violations;
    if (m.bound.violated) ++s.bound_violations;
    dedr.push_back(m.dedr);
  }
  s.mean_task_delay_s /= n;
  s.mean_transmit_energy_j /= n;
  s.mean_bcd_iterations /= n;
  for (auto &e : s.mean_net_energy_j) e /= n;
  double q = 0.0;
  for (double v : slots.back().queue_next_j) q += v;
  s.final_mean_queue_j = n_luavs ? q / static_cast<double>(n_luavs) : 0.0;
  double mean = 0.0;
  for (double d : dedr) mean += d;
  mean /= n;
  double var = 0.0;
  for (double d : dedr) var += (d - mean) * (d - mean);
  s.dedr_std = std::sqrt(var / n);
  return s;
}

RunTrace run(std::uint64_t seed, const Policy &policy, const SystemParams &params, const FleetSpec &fleet,
             const BcdOptions &opts) {
  const auto violations = validate(params, fleet);
  if (!violations.empty()) throw ConfigError(violations);
  RunTrace trace;
  trace.policy = policy.kind;
  trace.seed = seed;
  trace.params = params;
  trace.fleet = fleet;
  SimState state = initial_state(params, fleet, policy);
  trace.huav_start = state.huav.position;
  for (const auto &u : state.luavs) trace.luav_start.push_back(u.position);
  const auto e_u_max = luav_energy_upper_bounds(params, fleet);
  ScenarioGenerator gen(seed, params);
  for (int n = 0; n < params.n_slots; ++n) {
    auto slot = gen.generate_slot(state.vehicles);
    SlotInputs in{std::move(slot.vehicles), std::move(slot.tasks), gen.sample_harvest(state.luavs.size())};
    trace.slots.push_back(step(state, in, policy, params, e_u_max, opts));
  }
  trace.summary = summarize(trace.slots, state.luavs.size());
  return trace;
}

std::vector<double> compute_dedr(const std::vector<double> &delay, const std::vector<double> &deviation,
                                 std::size_t window) {
  if (delay.size() != deviation.size()) throw std::invalid_argument("compute_dedr: series length mismatch");
  std::vector<double> out(delay.size());
  double sd = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < delay.size(); ++i) {
    sd += delay[i];
    sq += deviation[i];
    std::size_t count = i + 1;
    if (window > 0 && i >= window) {
      sd -= delay[i - window];
      sq -= deviation[i - window];
      count = window;
    }
    const double c = static_cast<double>(count);
    out[i] = (sd / c) / (sq / c + 1e-6);
  }
  return out;
}

}  // namespace latus
