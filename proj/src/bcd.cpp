#include "latus/bcd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latus/lyapunov.hpp"

namespace latus {

namespace {

constexpr double kDirectAlpha = 1e-6;

void check_context(const SlotContext &ctx) {
  if (!ctx.params || !ctx.vehicles || !ctx.tasks || !ctx.luavs)
    throw std::invalid_argument("optimize_slot: incomplete slot context");
  if (ctx.energy_weights.size() != ctx.luavs->size())
    throw std::invalid_argument("optimize_slot: one energy weight per L-UAV required");
  if (!ctx.energy_cap.empty() && ctx.energy_cap.size() != ctx.luavs->size())
    throw std::invalid_argument("optimize_slot: one energy cap per L-UAV required");
}

/// Per-task weighted cost of the relayed path.
double relayed_cost(const SlotContext &ctx, const std::vector<double> &w, const Allocation &a, std::size_t i) {
  const auto &p = *ctx.params;
  const auto &t = (*ctx.tasks)[i];
  const std::size_t u = a.assignment[i];
  const auto &lu = (*ctx.luavs)[u];
  const auto d = relayed_delay(p, (*ctx.vehicles)[i], t, lu, a.luav_positions[u], a.huav_position, a.alpha[i],
                               a.f_lu[i], a.f_h[i]);
  const double e = comp_energy(t.bits, t.density, a.alpha[i], a.f_lu[i], lu.kappa) +
                   relay_energy(lu.tx_power_w, d.t_lu2hu);
  return ctx.delay_weight * d.total + w[u] * e;
}

double cost_with(const SlotContext &ctx, const std::vector<double> &w, const Allocation &a,
                 SlotEvaluation *out) {
  SlotEvaluation ev = evaluate_slot(*ctx.params, *ctx.vehicles, *ctx.tasks, a, *ctx.luavs, ctx.huav);
  const auto e = ev.luav_energy();
  const double c = slot_objective(ctx.delay_weight, ev.total_delay, w, e);
  if (out) *out = std::move(ev);
  return c;
}

void set_flags(const SlotContext &ctx, const std::vector<double> &w, Allocation &a,
               const std::vector<double> &deadlines) {
  const auto &p = *ctx.params;
  for (std::size_t i = 0; i < a.direct.size(); ++i) {
    a.direct[i] = false;
    if (a.alpha[i] > kDirectAlpha) continue;
    const auto &t = (*ctx.tasks)[i];
    if (!(a.f_h[i] > 0.0) && t.bits * t.density > 0.0) continue;
    const double d = direct_delay(p, (*ctx.vehicles)[i], t, a.huav_position, a.f_h[i]).total;
    if (d > deadlines[i]) continue;
    if (ctx.delay_weight * d <= relayed_cost(ctx, w, a, i)) a.direct[i] = true;
  }
}

AllocProblem build_problem(const SlotContext &ctx, const std::vector<double> &w, const Allocation &a,
                           const std::vector<double> &deadlines) {
  const auto &p = *ctx.params;
  AllocProblem prob;
  prob.delay_weight = ctx.delay_weight;
  prob.huav_cpu_hz = ctx.huav.cpu_hz;
  for (std::size_t u = 0; u < ctx.luavs->size(); ++u) {
    const auto &lu = (*ctx.luavs)[u];
    prob.servers.push_back({lu.cpu_hz, lu.kappa, lu.tx_power_w, w[u]});
  }
  for (std::size_t i = 0; i < ctx.tasks->size(); ++i) {
    const auto &t = (*ctx.tasks)[i];
    const auto &v = (*ctx.vehicles)[i];
    const std::size_t u = a.assignment[i];
    AllocTask at;
    at.bits = t.bits;
    at.density = t.density;
    at.deadline_s = deadlines[i];
    at.v2lu_delay_s = tx_delay(t.bits, v2lu_link(p, v.position, v.tx_power_w, a.luav_positions[u]).rate);
    at.relay_rate = lu2hu_link(p, a.luav_positions[u], (*ctx.luavs)[u].tx_power_w, a.huav_position).rate;
    at.server = u;
    prob.tasks.push_back(at);
  }
  return prob;
}

std::vector<TrajectoryTask> trajectory_tasks(const SlotContext &ctx, const Allocation &a,
                                             const std::vector<double> &deadlines) {
  std::vector<TrajectoryTask> out;
  for (std::size_t i = 0; i < ctx.tasks->size(); ++i) {
    const auto &t = (*ctx.tasks)[i];
    const auto &v = (*ctx.vehicles)[i];
    TrajectoryTask tt;
    tt.vehicle = v.position;
    tt.vehicle_power_w = v.tx_power_w;
    tt.bits = t.bits;
    tt.density = t.density;
    tt.deadline_s = deadlines[i];
    tt.alpha = a.alpha[i];
    tt.f_lu = a.f_lu[i];
    tt.f_h = a.f_h[i];
    tt.uav = a.assignment[i];
    out.push_back(tt);
  }
  return out;
}

/// Best P2 solution over the supplied starting splits.
std::vector<double> p2_energy(const SlotContext &ctx, const AllocProblem &prob, const ResourceSolution &s) {
  std::vector<double> e(ctx.luavs->size(), 0.0);
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    const auto &srv = prob.servers[t.server];
    const double relay = (1.0 - s.alpha[i]) * t.bits > 0.0 ? (1.0 - s.alpha[i]) * t.bits / t.relay_rate : 0.0;
    e[t.server] += srv.kappa * s.alpha[i] * t.bits * t.density * s.f_lu[i] * s.f_lu[i] + srv.tx_power_w * relay;
  }
  return e;
}

}  // namespace

double slot_cost(const SlotContext &ctx, const Allocation &alloc, SlotEvaluation *eval) {
  check_context(ctx);
  return cost_with(ctx, ctx.energy_weights, alloc, eval);
}

void assign_direct_flags(const SlotContext &ctx, Allocation &alloc, const std::vector<double> &deadlines) {
  check_context(ctx);
  set_flags(ctx, ctx.energy_weights, alloc, deadlines);
}

SlotDecision optimize_slot(const SlotContext &ctx, const BcdOptions &opts) {
  check_context(ctx);
  const auto &p = *ctx.params;
  const auto &luavs = *ctx.luavs;
  const std::size_t n = ctx.tasks->size();
  const std::size_t nu = luavs.size();
  if (ctx.vehicles->size() != n) throw std::invalid_argument("optimize_slot: vehicle/task mismatch");

  SlotDecision dec;
  Allocation &a = dec.alloc;
  for (const auto &lu : luavs) a.luav_positions.push_back(lu.position);
  a.huav_position = ctx.fixed_huav ? *ctx.fixed_huav : ctx.huav.position;
  std::vector<double> w = ctx.energy_weights;

  if (n == 0) {
    dec.matching = Matching::from_assignment({}, nu);
    dec.objective = cost_with(ctx, w, a, &dec.evaluation);
    dec.objective_trace.push_back(dec.objective);
    dec.converged = true;
    return dec;
  }

  MatchingInputs min{p, *ctx.vehicles, *ctx.tasks, luavs, ctx.delay_weight, w};
  dec.matching = improve_match(min, greedy_match(min));
  a.assignment = dec.matching.assignment;
  a.alpha.assign(n, 0.0);
  a.f_lu.assign(n, 0.0);
  a.f_h.assign(n, 0.0);
  a.direct.assign(n, false);

  std::vector<double> deadlines(n);
  for (std::size_t i = 0; i < n; ++i) deadlines[i] = (*ctx.tasks)[i].deadline_s;
  AllocProblem prob = build_problem(ctx, w, a, deadlines);
  const DeadlineRelaxation relax = min_deadline_relaxation(prob);
  if (relax.factor > 1.0) {
    dec.deadline_relaxed = true;
    dec.relaxation = relax.factor;
    for (auto &d : deadlines) d *= relax.factor;
    prob = scale_deadlines(prob, relax.factor);
  }

  auto apply = [&](Allocation &target, const ResourceSolution &s) {
    target.alpha = s.alpha;
    target.f_lu = s.f_lu;
    target.f_h = s.f_h;
  };

  // energy prices that keep every L-UAV inside its slot budget
  const bool capped = !ctx.energy_cap.empty();
  ResourceSolution first;
  if (capped) {
    std::fill(w.begin(), w.end(), 0.0);
    const double nu0 = 1e-4 * ctx.delay_weight;
    for (int round = 0; round < 80; ++round) {
      prob = build_problem(ctx, w, a, deadlines);
      first = solve_p2_multistart(prob, {relax.alpha, initial_alpha(prob), first.alpha}, opts.p2);
      if (!first.feasible) break;
      const auto e = p2_energy(ctx, prob, first);
      bool raised = false;
      for (std::size_t u = 0; u < nu; ++u) {
        if (e[u] <= ctx.energy_cap[u] || w[u] > 1e12 * std::max(ctx.delay_weight, 1.0)) continue;
        w[u] = w[u] > 0.0 ? 2.0 * w[u] : nu0;
        raised = true;
      }
      if (!raised) break;
    }
    dec.cap_weights = w;
  } else {
    first = solve_p2_multistart(prob, {relax.alpha, initial_alpha(prob)}, opts.p2);
  }
  if (!first.feasible) throw std::runtime_error("optimize_slot: relaxed slot has no feasible split");
  apply(a, first);
  set_flags(ctx, w, a, deadlines);
  double cur = cost_with(ctx, w, a, nullptr);
  dec.objective_trace.push_back(cur);

  auto try_accept = [&](Allocation cand) {
    set_flags(ctx, w, cand, deadlines);
    const double c = cost_with(ctx, w, cand, nullptr);
    if (!(c <= cur)) return false;
    a = std::move(cand);
    cur = c;
    return true;
  };

  for (int j = 0; j < opts.j_max; ++j) {
    ++dec.bcd_iterations;
    const double before = dec.objective_trace.back();

    if (j > 0) {
      prob = build_problem(ctx, w, a, deadlines);
      const ResourceSolution s = solve_p2_multistart(prob, {a.alpha, initial_alpha(prob)}, opts.p2);
      if (s.feasible) {
        Allocation cand = a;
        apply(cand, s);
        try_accept(std::move(cand));
      }
    }

    // L-UAV positions
    {
      LuavPlanInput in;
      in.params = &p;
      in.tasks = trajectory_tasks(ctx, a, deadlines);
      in.start = a.luav_positions;
      in.huav = a.huav_position;
      in.delay_weight = ctx.delay_weight;
      in.energy_weight = w;
      std::vector<double> used(nu, 0.0);
      if (capped) {
        SlotEvaluation ev;
        cost_with(ctx, w, a, &ev);
        for (std::size_t u = 0; u < nu; ++u) used[u] = ev.luavs[u].e_comp + ev.luavs[u].e_relay;
      }
      for (std::size_t u = 0; u < nu; ++u) {
        const auto &lu = luavs[u];
        in.prev.push_back(lu.position);
        double r = lu.max_speed_mps * p.slot_s;
        if (capped) r = std::min(r, std::sqrt(2.0 * p.slot_s * std::max(ctx.energy_cap[u] - used[u], 0.0) / lu.mass_kg));
        in.radius.push_back(r);
        in.mass_kg.push_back(lu.mass_kg);
        in.tx_power_w.push_back(lu.tx_power_w);
      }
      // a capped radius may exclude the current iterate; pull it back first
      bool inside = true;
      for (std::size_t u = 0; u < nu; ++u) inside = inside && dist(in.start[u], in.prev[u]) <= in.radius[u];
      if (!inside) {
        Allocation c = a;
        for (std::size_t u = 0; u < nu; ++u)
          if (dist(c.luav_positions[u], in.prev[u]) > in.radius[u]) c.luav_positions[u] = in.prev[u];
        inside = try_accept(std::move(c));
        in.start = a.luav_positions;
        in.tasks = trajectory_tasks(ctx, a, deadlines);
      }
      if (inside) {
        const Allocation base = a;
        in.guard = [&](const std::vector<Vec2> &pos) {
          Allocation c = base;
          c.luav_positions = pos;
          return cost_with(ctx, w, c, nullptr);
        };
        const ScaResult r = solve_luav_positions(in, opts.sca);
        dec.sca_traces.push_back(r.guard_trace);
        if (r.moved) {
          Allocation cand = a;
          cand.luav_positions = r.positions;
          try_accept(std::move(cand));
        }
      }
    }

    // H-UAV position
    if (!ctx.fixed_huav) {
      HuavPlanInput in;
      in.params = &p;
      in.tasks = trajectory_tasks(ctx, a, deadlines);
      in.luav_positions = a.luav_positions;
      in.energy_weight = w;
      for (const auto &lu : luavs) in.tx_power_w.push_back(lu.tx_power_w);
      in.prev = ctx.huav.position;
      in.start = a.huav_position;
      in.radius = ctx.huav.max_speed_mps * p.slot_s;
      in.delay_weight = ctx.delay_weight;
      const Allocation base = a;
      in.guard = [&](const std::vector<Vec2> &pos) {
        Allocation c = base;
        c.huav_position = pos[0];
        return cost_with(ctx, w, c, nullptr);
      };
      const ScaResult r = solve_huav_position(in, opts.sca);
      dec.sca_traces.push_back(r.guard_trace);
      if (r.moved) {
        Allocation cand = a;
        cand.huav_position = r.positions[0];
        try_accept(std::move(cand));
      }
    }

    dec.objective_trace.push_back(cur);
    if (before - cur <= opts.rel_tol * std::abs(cur)) {
      dec.converged = true;
      break;
    }
  }

  dec.objective = cost_with(ctx, w, a, &dec.evaluation);
  if (capped) {
    for (std::size_t u = 0; u < nu; ++u)
      if (dec.evaluation.luavs[u].total > ctx.energy_cap[u] * (1.0 + 1e-9)) dec.energy_cap_violated = true;
  }
  return dec;
}

}  // namespace latus
