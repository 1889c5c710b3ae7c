#include "latus/resource_allocator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace latus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double work(const AllocTask &t) { return t.bits * t.density; }

double relay_time(const AllocTask &t, double alpha) {
  const double bits = (1.0 - alpha) * t.bits;
  if (bits <= 0.0) return 0.0;
  if (!(t.relay_rate > 0.0)) return kInf;
  return bits / t.relay_rate;
}

double comp_time(double w, double f) {
  if (w <= 0.0) return 0.0;
  if (!(f > 0.0)) return kInf;
  return w / f;
}

double task_delay(const AllocTask &t, double alpha, double x, double y) {
  const double w = work(t);
  return t.v2lu_delay_s + comp_time(alpha * w, x) + relay_time(t, alpha) + comp_time((1.0 - alpha) * w, y);
}

double slack(const AllocTask &t, double alpha) { return t.deadline_s - t.v2lu_delay_s - relay_time(t, alpha); }

void check_sizes(const AllocProblem &prob, std::size_t n, const char *what) {
  if (n != prob.tasks.size()) throw std::invalid_argument(std::string(what) + ": one entry per task required");
}

/// Smallest z > 0 (up to bracketing tolerance) with fn(z) <= 0 for a
/// non-increasing fn with fn(0+) > 0. Returns the feasible end of the final
/// bracket, or +inf when no such z exists within the search range.
template <class Fn>
double feasible_root(Fn fn, double guess) {
  if (!(guess > 0.0) || !std::isfinite(guess)) guess = 1.0;
  double hi = guess;
  double fhi = fn(hi);
  double lo = hi;
  double flo = fhi;
  if (fhi > 0.0) {
    int n = 0;
    while (fhi > 0.0) {
      lo = hi;
      flo = fhi;
      hi *= 16.0;
      if (++n > 150 || !std::isfinite(hi)) return kInf;
      fhi = fn(hi);
    }
  } else {
    int n = 0;
    while (flo <= 0.0) {
      hi = lo;
      fhi = flo;
      lo /= 16.0;
      if (++n > 150 || lo < std::numeric_limits<double>::min()) return hi;
      flo = fn(lo);
    }
  }
  if (fhi == 0.0) return hi;
  auto g = [&](double t) { return fn(std::exp(t)); };
  std::uintmax_t iters = 100;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-11; };
  const auto r = boost::math::tools::toms748_solve(g, std::log(lo), std::log(hi), flo, fhi, tol, iters);
  return std::exp(r.second);
}

struct Coef {
  double a = 0.0;  // alpha * D * C
  double b = 0.0;  // (1 - alpha) * D * C
  double c = 0.0;  // w * kappa * a
  double s = 0.0;  // computation slack
};

/// Root of 2c x^3 + lam x^2 - k a = 0 on x > 0.
double lu_freq(const Coef &t, double lam, double k) {
  if (t.a <= 0.0) return 0.0;
  if (t.c <= 0.0) return lam > 0.0 ? std::sqrt(k * t.a / lam) : kInf;
  double x = std::cbrt(k * t.a / (2.0 * t.c));
  if (lam > 0.0) x = std::min(x, std::sqrt(k * t.a / lam));
  for (int i = 0; i < 100; ++i) {
    const double phi = 2.0 * t.c * x * x * x + lam * x * x - k * t.a;
    const double dphi = 6.0 * t.c * x * x + 2.0 * lam * x;
    const double step = phi / dphi;
    x -= step;
    if (std::abs(step) <= 1e-15 * x) break;
  }
  return x;
}

double hu_freq(const Coef &t, double mu, double k) {
  if (t.b <= 0.0) return 0.0;
  return mu > 0.0 ? std::sqrt(k * t.b / mu) : kInf;
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

Point task_point(const Coef &t, double lam, double mu, double k0) {
  auto at = [&](double k) {
    Point p{lu_freq(t, lam, k), hu_freq(t, mu, k)};
    return p;
  };
  auto load = [&](const Point &p) {
    return (t.a > 0.0 ? t.a / p.x : 0.0) + (t.b > 0.0 ? t.b / p.y : 0.0);
  };
  Point p = at(k0);
  if (load(p) <= t.s) return p;
  const double eta = feasible_root([&](double e) { return load(at(k0 + e)) - t.s; }, k0);
  if (!std::isfinite(eta)) return p;
  return at(k0 + eta);
}

struct Layout {
  std::vector<Coef> coef;
  std::vector<std::vector<std::size_t>> by_server;
};

Layout make_layout(const AllocProblem &prob, const std::vector<double> &alpha) {
  Layout l;
  l.coef.resize(prob.tasks.size());
  l.by_server.resize(prob.servers.size());
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    if (t.server >= prob.servers.size()) throw std::invalid_argument("allocator: task served by unknown L-UAV");
    const auto &srv = prob.servers[t.server];
    const double w = work(t);
    Coef &c = l.coef[i];
    c.a = alpha[i] * w;
    c.b = (1.0 - alpha[i]) * w;
    c.c = srv.energy_weight * srv.kappa * c.a;
    c.s = slack(t, alpha[i]);
    l.by_server[t.server].push_back(i);
  }
  return l;
}

}  // namespace

double p2_objective(const AllocProblem &prob, const std::vector<double> &alpha, const std::vector<double> &f_lu,
                    const std::vector<double> &f_h) {
  check_sizes(prob, alpha.size(), "p2_objective");
  check_sizes(prob, f_lu.size(), "p2_objective");
  check_sizes(prob, f_h.size(), "p2_objective");
  double delay = 0.0;
  double energy = 0.0;
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    const auto &srv = prob.servers.at(t.server);
    delay += task_delay(t, alpha[i], f_lu[i], f_h[i]);
    const double relay = relay_time(t, alpha[i]);
    energy += srv.energy_weight * (srv.kappa * alpha[i] * work(t) * f_lu[i] * f_lu[i] + srv.tx_power_w * relay);
  }
  return prob.delay_weight * delay + energy;
}

double max_deadline_excess(const AllocProblem &prob, const std::vector<double> &alpha,
                           const std::vector<double> &f_lu, const std::vector<double> &f_h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    const double d = task_delay(t, alpha[i], f_lu[i], f_h[i]);
    worst = std::max(worst, (d - t.deadline_s) / t.deadline_s);
  }
  return worst;
}

FeasibilityReport check_feasibility(const AllocProblem &prob, const std::vector<double> &alpha) {
  check_sizes(prob, alpha.size(), "check_feasibility");
  FeasibilityReport r;
  const Layout l = make_layout(prob, alpha);
  for (std::size_t u = 0; u < prob.servers.size(); ++u) {
    double a_sum = 0.0;
    double b_sum = 0.0;
    double p_sum = 0.0;
    bool ok = true;
    for (std::size_t i : l.by_server[u]) {
      const Coef &c = l.coef[i];
      if (c.a + c.b <= 0.0) continue;
      if (!(c.s > 0.0)) {
        r.violations.push_back("task_deadline(" + std::to_string(i) + ")");
        ok = false;
        continue;
      }
      a_sum += c.a / c.s;
      b_sum += c.b / c.s;
      p_sum += std::sqrt(c.a * c.b) / c.s;
    }
    if (!ok) {
      r.feasible = false;
      continue;
    }
    const double cap = prob.servers[u].cpu_hz;
    const bool lu_ok = p_sum > 0.0 ? a_sum < cap : a_sum <= cap;
    if (!lu_ok) {
      r.feasible = false;
      r.violations.push_back("lu_capacity(" + std::to_string(u) + ")");
      continue;
    }
    r.huav_demand_hz += b_sum + (p_sum > 0.0 ? p_sum * p_sum / (cap - a_sum) : 0.0);
  }
  if (r.huav_demand_hz > prob.huav_cpu_hz) {
    r.feasible = false;
    r.violations.push_back("hu_capacity");
  }
  return r;
}

FStep solve_f_given_alpha(const AllocProblem &prob, const std::vector<double> &alpha) {
  check_sizes(prob, alpha.size(), "solve_f_given_alpha");
  if (!(prob.delay_weight > 0.0)) throw std::invalid_argument("solve_f_given_alpha: delay weight must be positive");
  FStep out;
  const auto rep = check_feasibility(prob, alpha);
  if (!rep.feasible) {
    out.violations = rep.violations;
    return out;
  }
  const Layout l = make_layout(prob, alpha);
  const double k = prob.delay_weight;
  const std::size_t n = prob.tasks.size();

  // capacity multiplier of one L-UAV for a given H-UAV price
  auto server_lambda = [&](std::size_t u, double mu) {
    const auto &ids = l.by_server[u];
    double sum_sqrt_a = 0.0;
    for (std::size_t i : ids) sum_sqrt_a += std::sqrt(l.coef[i].a);
    if (sum_sqrt_a <= 0.0) return 0.0;
    const double cap = prob.servers[u].cpu_hz;
    auto excess = [&](double lam) {
      double s = 0.0;
      for (std::size_t i : ids) s += task_point(l.coef[i], lam, mu, k).x;
      return s - cap;
    };
    if (excess(0.0) <= 0.0) return 0.0;
    return feasible_root(excess, k * sum_sqrt_a * sum_sqrt_a / (cap * cap));
  };

  auto hu_load = [&](double mu) {
    double s = 0.0;
    for (std::size_t u = 0; u < prob.servers.size(); ++u) {
      const double lam = server_lambda(u, mu);
      for (std::size_t i : l.by_server[u]) s += task_point(l.coef[i], lam, mu, k).y;
    }
    return s;
  };

  double sum_sqrt_b = 0.0;
  for (const auto &c : l.coef) sum_sqrt_b += std::sqrt(c.b);
  double mu = 0.0;
  if (sum_sqrt_b > 0.0) {
    const double cap = prob.huav_cpu_hz;
    mu = feasible_root([&](double m) { return hu_load(m) - cap; }, k * sum_sqrt_b * sum_sqrt_b / (cap * cap));
    if (!std::isfinite(mu)) {
      out.violations.push_back("hu_capacity");
      return out;
    }
  }

  out.f_lu.assign(n, 0.0);
  out.f_h.assign(n, 0.0);
  for (std::size_t u = 0; u < prob.servers.size(); ++u) {
    const double lam = server_lambda(u, mu);
    if (!std::isfinite(lam)) {
      out.violations.push_back("lu_capacity(" + std::to_string(u) + ")");
      continue;
    }
    for (std::size_t i : l.by_server[u]) {
      const Point p = task_point(l.coef[i], lam, mu, k);
      out.f_lu[i] = p.x;
      out.f_h[i] = p.y;
    }
  }
  out.feasible = out.violations.empty();
  return out;
}

namespace {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool empty = false;
};

/// Split ratios that meet the deadline at frequencies (x, y).
Interval deadline_interval(const AllocTask &t, double x, double y) {
  const double w = work(t);
  if (w <= 0.0 && t.bits <= 0.0) return {};
  const double tol = 1e-12 * t.deadline_s;
  auto meets = [&](double alpha) { return task_delay(t, alpha, x, y) <= t.deadline_s + tol; };
  if (w > 0.0 && !(x > 0.0) && !(y > 0.0)) return {0.0, 0.0, true};
  if (w > 0.0 && !(x > 0.0)) return meets(0.0) ? Interval{0.0, 0.0, false} : Interval{0.0, 0.0, true};
  if (w > 0.0 && !(y > 0.0)) return meets(1.0) ? Interval{1.0, 1.0, false} : Interval{1.0, 1.0, true};
  // delay(alpha) = c0 + alpha * m
  const double d0 = task_delay(t, 0.0, x, y);
  const double d1 = task_delay(t, 1.0, x, y);
  if (!std::isfinite(d0)) return meets(1.0) ? Interval{1.0, 1.0, false} : Interval{1.0, 1.0, true};
  const double m = d1 - d0;
  const double room = t.deadline_s - d0;
  Interval iv;
  if (m > 0.0) {
    iv.hi = std::min(1.0, room / m);
  } else if (m < 0.0) {
    iv.lo = std::max(0.0, room / m);
  } else if (room < -tol) {
    iv.empty = true;
  }
  if (iv.lo > iv.hi) iv.empty = true;
  return iv;
}

/// d(objective)/d(alpha) of one task at fixed frequencies.
double alpha_slope(const AllocProblem &prob, const AllocTask &t, double x, double y) {
  const auto &srv = prob.servers[t.server];
  const double w = work(t);
  const double relay_full = t.bits > 0.0 ? t.bits / t.relay_rate : 0.0;
  const double lu = w > 0.0 ? w / x : 0.0;
  const double hu = w > 0.0 ? w / y : 0.0;
  const double delay_slope = lu - relay_full - hu;
  const double energy_slope = srv.kappa * w * x * x - srv.tx_power_w * relay_full;
  return prob.delay_weight * delay_slope + srv.energy_weight * energy_slope;
}

}  // namespace

AlphaStep solve_alpha_given_f(const AllocProblem &prob, const std::vector<double> &f_lu,
                              const std::vector<double> &f_h, const std::vector<double> &current) {
  check_sizes(prob, f_lu.size(), "solve_alpha_given_f");
  check_sizes(prob, f_h.size(), "solve_alpha_given_f");
  check_sizes(prob, current.size(), "solve_alpha_given_f");
  AlphaStep out;
  out.alpha = current;
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    const double x = f_lu[i];
    const double y = f_h[i];
    Interval iv = deadline_interval(t, x, y);
    if (iv.empty) {
      out.feasible = false;
      out.infeasible_tasks.push_back(i);
      continue;
    }
    if (iv.lo == iv.hi) {
      out.alpha[i] = iv.lo;
      continue;
    }
    const double c = alpha_slope(prob, t, x, y);
    out.alpha[i] = c < 0.0 ? iv.hi : iv.lo;
  }
  return out;
}

std::vector<double> initial_alpha(const AllocProblem &prob) {
  std::vector<std::size_t> load(prob.servers.size(), 0);
  for (const auto &t : prob.tasks) ++load.at(t.server);
  const double y = prob.tasks.empty() ? 0.0 : prob.huav_cpu_hz / static_cast<double>(prob.tasks.size());
  std::vector<double> alpha(prob.tasks.size(), 0.5);
  for (std::size_t i = 0; i < prob.tasks.size(); ++i) {
    const auto &t = prob.tasks[i];
    const double x = prob.servers[t.server].cpu_hz / static_cast<double>(load[t.server]);
    const Interval iv = deadline_interval(t, x, y);
    if (!iv.empty) {
      alpha[i] = std::clamp(0.5, iv.lo, iv.hi);
    } else {
      alpha[i] = task_delay(t, 1.0, x, y) < task_delay(t, 0.0, x, y) ? 1.0 : 0.0;
    }
  }
  return alpha;
}

ResourceSolution alternate_p2(const AllocProblem &prob, const std::vector<double> &alpha0,
                              const AlternateOptions &opts) {
  check_sizes(prob, alpha0.size(), "alternate_p2");
  ResourceSolution sol;
  sol.alpha = alpha0;
  FStep f = solve_f_given_alpha(prob, alpha0);
  if (!f.feasible) {
    sol.violations = f.violations;
    return sol;
  }
  sol.f_lu = std::move(f.f_lu);
  sol.f_h = std::move(f.f_h);
  sol.objective = p2_objective(prob, sol.alpha, sol.f_lu, sol.f_h);
  sol.feasible = true;

  for (int round = 0; round < opts.max_rounds; ++round) {
    ++sol.iterations;
    const AlphaStep a = solve_alpha_given_f(prob, sol.f_lu, sol.f_h, sol.alpha);
    if (a.alpha == sol.alpha) break;
    FStep next = solve_f_given_alpha(prob, a.alpha);
    if (!next.feasible) break;
    const double obj = p2_objective(prob, a.alpha, next.f_lu, next.f_h);
    if (!(obj <= sol.objective)) break;
    const double gain = sol.objective - obj;
    sol.alpha = a.alpha;
    sol.f_lu = std::move(next.f_lu);
    sol.f_h = std::move(next.f_h);
    sol.objective = obj;
    if (gain <= opts.rel_tol * std::max(std::abs(obj), 1e-300)) break;
  }
  return sol;
}

ResourceSolution solve_p2_multistart(const AllocProblem &prob, std::vector<std::vector<double>> starts,
                                     const AlternateOptions &opts) {
  const std::size_t n = prob.tasks.size();
  starts.emplace_back(n, 0.0);
  starts.emplace_back(n, 1.0);
  ResourceSolution best;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const auto &a0 = starts[k];
    if (a0.size() != n) continue;
    if (std::find(starts.begin(), starts.begin() + k, a0) != starts.begin() + k) continue;
    if (!check_feasibility(prob, a0).feasible) continue;
    ResourceSolution s = alternate_p2(prob, a0, opts);
    if (s.feasible && (!best.feasible || s.objective < best.objective)) best = std::move(s);
  }
  return best;
}

AllocProblem scale_deadlines(const AllocProblem &prob, double factor) {
  AllocProblem out = prob;
  for (auto &t : out.tasks) t.deadline_s *= factor;
  return out;
}

namespace {

std::vector<std::vector<double>> candidate_splits(const AllocProblem &prob) {
  const std::size_t n = prob.tasks.size();
  std::vector<std::vector<double>> c;
  c.push_back(initial_alpha(prob));
  c.emplace_back(n, 0.0);
  c.emplace_back(n, 1.0);
  std::vector<double> greedy(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &t = prob.tasks[i];
    const double x = prob.servers[t.server].cpu_hz;
    greedy[i] = task_delay(t, 1.0, x, prob.huav_cpu_hz) < task_delay(t, 0.0, x, prob.huav_cpu_hz) ? 1.0 : 0.0;
  }
  c.push_back(std::move(greedy));
  return c;
}

const std::vector<double> *first_feasible(const AllocProblem &prob,
                                          const std::vector<std::vector<double>> &cands) {
  for (const auto &a : cands)
    if (check_feasibility(prob, a).feasible) return &a;
  return nullptr;
}

}  // namespace

DeadlineRelaxation min_deadline_relaxation(const AllocProblem &prob) {
  {
    const auto cands = candidate_splits(prob);
    if (const auto *a = first_feasible(prob, cands)) return {1.0, *a};
  }
  auto feasible_at = [&](double rho) {
    const AllocProblem p = scale_deadlines(prob, rho);
    return first_feasible(p, candidate_splits(p)) != nullptr;
  };
  double lo = 1.0;
  double hi = 2.0;
  while (!feasible_at(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("min_deadline_relaxation: no finite relaxation restores feasibility");
  }
  for (int i = 0; i < 60 && hi - lo > 1e-6 * lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(mid) ? hi : lo) = mid;
  }
  DeadlineRelaxation r;
  r.factor = hi * (1.0 + 1e-3);
  const AllocProblem p = scale_deadlines(prob, r.factor);
  const auto cands = candidate_splits(p);
  if (const auto *a = first_feasible(p, cands)) {
    r.alpha = *a;
    return r;
  }
  r.factor = hi;
  const AllocProblem ph = scale_deadlines(prob, hi);
  r.alpha = *first_feasible(ph, candidate_splits(ph));
  return r;
}

}  // namespace latus
