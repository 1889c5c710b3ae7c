#include "latus/trajectory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace latus {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LinkShape LinkShape::make(double alt_diff, double bandwidth, double tx_power, double gamma0, double noise_psd) {
  return {alt_diff, bandwidth, tx_power * gamma0 / (noise_psd * bandwidth)};
}

double LinkShape::rate(double phi) const {
  return bandwidth * std::log2(1.0 + snr_scale / (alt_diff * alt_diff + phi));
}

double LinkShape::rate_slope(double phi) const {
  const double d = alt_diff * alt_diff + phi;
  return -bandwidth / std::numbers::ln2 * snr_scale / (d * (d + snr_scale));
}

double rate_lower_bound(const Vec2 &anchor, const Vec2 &eval, const Vec2 &peer, double alt_diff, double bandwidth,
                        double tx_power, double gamma0, double noise_psd) {
  const LinkShape l = LinkShape::make(alt_diff, bandwidth, tx_power, gamma0, noise_psd);
  const double phi_k = dist_sq(anchor, peer);
  return l.rate(phi_k) + l.rate_slope(phi_k) * (dist_sq(eval, peer) - phi_k);
}

double safety_lower_bound(const Vec2 &pos_u, const Vec2 &pos_v, const Vec2 &anchor_u, const Vec2 &anchor_v) {
  const Vec2 a = anchor_u - anchor_v;
  return -norm_sq(a) + 2.0 * dot(a, pos_u - pos_v);
}

namespace {

using Points = std::vector<Vec2>;

/// Linearised rate around an anchor: R_k + s_k * (|z - peer|^2 - phi_k).
struct RateCut {
  double r_k = 0.0;
  double slope = 0.0;
  double phi_k = 0.0;

  static RateCut at(const LinkShape &l, double phi_k) { return {l.rate(phi_k), l.rate_slope(phi_k), phi_k}; }
  double value(const Vec2 &z, const Vec2 &peer) const { return r_k + slope * (dist_sq(z, peer) - phi_k); }
};

/// bits / R_hat at z and its gradient; +inf outside the region where R_hat > 0.
double inv_rate_term(const RateCut &c, double bits, const Vec2 &z, const Vec2 &peer, Vec2 *grad) {
  if (bits <= 0.0) return 0.0;
  const double r = c.value(z, peer);
  if (!(r > 0.0)) return kInf;
  if (grad) *grad += (z - peer) * (-bits / (r * r) * c.slope * 2.0);
  return bits / r;
}

double comp_part(const TrajectoryTask &t) {
  const double w = t.bits * t.density;
  double s = 0.0;
  if (t.alpha > 0.0 && w > 0.0) s += t.f_lu > 0.0 ? t.alpha * w / t.f_lu : kInf;
  if (t.alpha < 1.0 && w > 0.0) s += t.f_h > 0.0 ? (1.0 - t.alpha) * w / t.f_h : kInf;
  return s;
}

double relay_bits(const TrajectoryTask &t) { return (1.0 - t.alpha) * t.bits; }

class ScaModel {
 public:
  virtual ~ScaModel() = default;
  virtual double true_objective(const Points &z) const = 0;
  virtual bool true_feasible(const Points &cand, const Points &ref) const = 0;
  virtual void set_anchor(const Points &a) = 0;
  virtual double surrogate(const Points &z, Points *grad) const = 0;
  virtual double violation(const Points &z, Points *grad) const = 0;
};

struct Discs {
  Points centre;
  std::vector<double> radius;
};

Points project(const Points &p, const Discs &speed, const Discs &trust) {
  Points out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = project_to_lens(p[i], speed.centre[i], speed.radius[i], trust.centre[i], trust.radius[i]);
  return out;
}

double max_norm(const Points &d) {
  double m = 0.0;
  for (const auto &v : d) m = std::max(m, norm(v));
  return m;
}

Points inner_solve(const ScaModel &m, const Points &anchor, const Discs &speed, const Discs &trust, double rho,
                   int max_inner) {
  const std::size_t n = anchor.size();
  auto eval = [&](const Points &z, Points &g) {
    g.assign(n, Vec2{});
    const double f = m.surrogate(z, &g);
    if (!std::isfinite(f)) return kInf;
    Points gv(n);
    const double v = m.violation(z, &gv);
    for (std::size_t i = 0; i < n; ++i) g[i] += gv[i] * rho;
    return f + rho * v;
  };
  Points z = anchor;
  Points g;
  double f = eval(z, g);
  if (!std::isfinite(f)) return anchor;
  double trust_r = 0.0;
  for (double r : trust.radius) trust_r = std::max(trust_r, r);
  const double gn = max_norm(g);
  if (gn <= 0.0) return z;
  double step = std::max(trust_r, 1e-3) / gn;
  for (int it = 0; it < max_inner; ++it) {
    bool accepted = false;
    Points zn;
    Points gn_vec;
    double fn = kInf;
    for (int bt = 0; bt < 60; ++bt) {
      Points trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] - g[i] * step;
      zn = project(trial, speed, trust);
      double model = f;
      double dn = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = zn[i] - z[i];
        model += dot(g[i], d);
        dn += norm_sq(d);
      }
      if (dn <= 1e-24) return z;
      model += dn / (2.0 * step);
      fn = eval(zn, gn_vec);
      if (std::isfinite(fn) && fn <= model) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Points dz(n);
    for (std::size_t i = 0; i < n; ++i) dz[i] = zn[i] - z[i];
    const double gain = f - fn;
    z = std::move(zn);
    g = std::move(gn_vec);
    f = fn;
    if (max_norm(dz) < 1e-7 || gain <= 1e-14 * std::abs(f)) break;
    step *= 2.0;
  }
  return z;
}

ScaResult run_sca(ScaModel &m, const Points &start, const Discs &speed_in, double delay_weight,
                  const GuardFn &guard, const ScaOptions &opts) {
  const std::size_t n = start.size();
  Discs speed = speed_in;
  for (auto &r : speed.radius) r *= 1.0 - 1e-12;
  ScaResult res;
  Points cur = start;
  double t_cur = m.true_objective(cur);
  double g_cur = guard ? guard(cur) : 0.0;
  res.objective_trace.push_back(t_cur);
  res.guard_trace.push_back(g_cur);

  auto accept = [&](const Points &c, double &t_new, double &g_new) {
    t_new = m.true_objective(c);
    if (!(t_new <= t_cur)) return false;
    if (!m.true_feasible(c, cur)) return false;
    g_new = guard ? guard(c) : 0.0;
    return !guard || g_new <= g_cur;
  };

  auto outer_step = [&](double trust_fraction) {
    Discs trust{cur, speed.radius};
    for (auto &r : trust.radius) r *= trust_fraction;
    m.set_anchor(cur);
    double rho = opts.penalty_scale * std::max(delay_weight, 1e-12);
    Points z = cur;
    for (int esc = 0; esc <= opts.max_escalations; ++esc) {
      z = inner_solve(m, cur, speed, trust, rho, opts.max_inner);
      if (m.violation(z, nullptr) <= 1e-12) break;
      rho *= 10.0;
    }
    double t = 1.0;
    for (int k = 0; k < 16; ++k, t *= 0.5) {
      Points c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = cur[i] + (z[i] - cur[i]) * t;
      if (c == cur) break;
      double t_new = 0.0;
      double g_new = 0.0;
      if (accept(c, t_new, g_new)) {
        const double gain = t_cur - t_new;
        cur = std::move(c);
        t_cur = t_new;
        g_cur = g_new;
        res.objective_trace.push_back(t_cur);
        res.guard_trace.push_back(g_cur);
        res.moved = true;
        return gain;
      }
    }
    return -1.0;
  };

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    ++res.outer_iterations;
    const double gain = outer_step(opts.trust_fraction);
    if (gain < 0.0 || gain <= opts.rel_tol * std::abs(t_cur)) break;
  }
  if (opts.trust_fraction < 1.0) {
    ++res.outer_iterations;
    outer_step(4.0);
  }
  res.positions = std::move(cur);
  return res;
}

// ---------------------------------------------------------------- L-UAVs

class LuavModel final : public ScaModel {
 public:
  explicit LuavModel(const LuavPlanInput &in) : in_(in) {
    const auto &p = *in.params;
    for (const auto &t : in.tasks) {
      if (t.uav >= in.prev.size()) throw std::invalid_argument("solve_luav_positions: task on unknown L-UAV");
      v2lu_.push_back(LinkShape::make(p.h1_m, p.bw_v2lu, t.vehicle_power_w, p.gamma0, p.noise_psd));
      comp_.push_back(comp_part(t));
    }
    for (double pw : in.tx_power_w)
      relay_.push_back(LinkShape::make(p.h2_m - p.h1_m, p.bw_lu2hu, pw, p.gamma0, p.noise_psd));
  }

  double flight(std::size_t u, const Vec2 &z) const {
    const double tau = in_.params->slot_s;
    return in_.energy_weight[u] * 0.5 * in_.mass_kg[u] / tau * dist_sq(z, in_.prev[u]);
  }

  double true_objective(const Points &z) const override {
    double delay = 0.0;
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      if (t.bits > 0.0) delay += t.bits / v2lu_[i].rate(dist_sq(z[t.uav], t.vehicle));
    }
    double e = 0.0;
    for (std::size_t u = 0; u < z.size(); ++u) e += flight(u, z[u]);
    return in_.delay_weight * delay + e;
  }

  double task_delay(std::size_t i, const Points &z) const {
    const auto &t = in_.tasks[i];
    double d = comp_[i];
    if (t.bits > 0.0) d += t.bits / v2lu_[i].rate(dist_sq(z[t.uav], t.vehicle));
    const double rb = relay_bits(t);
    if (rb > 0.0) d += rb / relay_[t.uav].rate(dist_sq(z[t.uav], in_.huav));
    return d;
  }

  bool true_feasible(const Points &cand, const Points &ref) const override {
    const double ds = in_.params->d_safe_m;
    for (std::size_t u = 0; u < cand.size(); ++u)
      for (std::size_t v = u + 1; v < cand.size(); ++v) {
        const double d = dist(cand[u], cand[v]);
        if (d < ds && d < dist(ref[u], ref[v])) return false;
      }
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const double limit = std::max(in_.tasks[i].deadline_s, task_delay(i, ref)) * (1.0 + 1e-12);
      if (!(task_delay(i, cand) <= limit)) return false;
    }
    return true;
  }

  void set_anchor(const Points &a) override {
    anchor_ = a;
    cut_vu_.clear();
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      cut_vu_.push_back(RateCut::at(v2lu_[i], dist_sq(a[t.uav], t.vehicle)));
    }
    cut_uh_.clear();
    for (std::size_t u = 0; u < a.size(); ++u) cut_uh_.push_back(RateCut::at(relay_[u], dist_sq(a[u], in_.huav)));
  }

  double surrogate(const Points &z, Points *grad) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      Vec2 g{};
      const double term = inv_rate_term(cut_vu_[i], t.bits, z[t.uav], t.vehicle, grad ? &g : nullptr);
      if (!std::isfinite(term)) return kInf;
      f += in_.delay_weight * term;
      if (grad) (*grad)[t.uav] += g * in_.delay_weight;
    }
    const double tau = in_.params->slot_s;
    for (std::size_t u = 0; u < z.size(); ++u) {
      f += flight(u, z[u]);
      if (grad) (*grad)[u] += (z[u] - in_.prev[u]) * (in_.energy_weight[u] * in_.mass_kg[u] / tau);
    }
    return f;
  }

  double violation(const Points &z, Points *grad) const override {
    if (grad) grad->assign(z.size(), Vec2{});
    double v = 0.0;
    const double ds2 = in_.params->d_safe_m * in_.params->d_safe_m;
    for (std::size_t u = 0; u < z.size(); ++u)
      for (std::size_t w = u + 1; w < z.size(); ++w) {
        const double gap = ds2 - safety_lower_bound(z[u], z[w], anchor_[u], anchor_[w]);
        if (gap <= 0.0) continue;
        v += gap;
        if (grad) {
          const Vec2 a = anchor_[u] - anchor_[w];
          (*grad)[u] -= a * 2.0;
          (*grad)[w] += a * 2.0;
        }
      }
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      Vec2 g{};
      double d = comp_[i];
      d += inv_rate_term(cut_vu_[i], t.bits, z[t.uav], t.vehicle, &g);
      d += inv_rate_term(cut_uh_[t.uav], relay_bits(t), z[t.uav], in_.huav, &g);
      if (!std::isfinite(d)) return kInf;
      if (d <= t.deadline_s) continue;
      v += d - t.deadline_s;
      if (grad) (*grad)[t.uav] += g;
    }
    return v;
  }

 private:
  const LuavPlanInput &in_;
  std::vector<LinkShape> v2lu_;
  std::vector<LinkShape> relay_;
  std::vector<double> comp_;
  Points anchor_;
  std::vector<RateCut> cut_vu_;
  std::vector<RateCut> cut_uh_;
};

// ---------------------------------------------------------------- H-UAV

class HuavModel final : public ScaModel {
 public:
  explicit HuavModel(const HuavPlanInput &in) : in_(in) {
    const auto &p = *in.params;
    for (double pw : in.tx_power_w)
      relay_.push_back(LinkShape::make(p.h2_m - p.h1_m, p.bw_lu2hu, pw, p.gamma0, p.noise_psd));
    for (const auto &t : in.tasks) {
      if (t.uav >= in.luav_positions.size()) throw std::invalid_argument("solve_huav_position: task on unknown L-UAV");
      const auto l = LinkShape::make(p.h1_m, p.bw_v2lu, t.vehicle_power_w, p.gamma0, p.noise_psd);
      const double tx = t.bits > 0.0 ? t.bits / l.rate(dist_sq(in.luav_positions[t.uav], t.vehicle)) : 0.0;
      fixed_.push_back(tx + comp_part(t));
      weight_.push_back(in.delay_weight + in.energy_weight[t.uav] * in.tx_power_w[t.uav]);
    }
  }

  double true_objective(const Points &z) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      const double rb = relay_bits(t);
      if (rb > 0.0) f += weight_[i] * rb / relay_[t.uav].rate(dist_sq(z[0], in_.luav_positions[t.uav]));
    }
    return f;
  }

  double task_delay(std::size_t i, const Vec2 &h) const {
    const auto &t = in_.tasks[i];
    const double rb = relay_bits(t);
    return fixed_[i] + (rb > 0.0 ? rb / relay_[t.uav].rate(dist_sq(h, in_.luav_positions[t.uav])) : 0.0);
  }

  bool true_feasible(const Points &cand, const Points &ref) const override {
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const double limit = std::max(in_.tasks[i].deadline_s, task_delay(i, ref[0])) * (1.0 + 1e-12);
      if (!(task_delay(i, cand[0]) <= limit)) return false;
    }
    return true;
  }

  void set_anchor(const Points &a) override {
    cut_.clear();
    for (std::size_t u = 0; u < in_.luav_positions.size(); ++u)
      cut_.push_back(RateCut::at(relay_[u], dist_sq(a[0], in_.luav_positions[u])));
  }

  double surrogate(const Points &z, Points *grad) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      Vec2 g{};
      const double term = inv_rate_term(cut_[t.uav], relay_bits(t), z[0], in_.luav_positions[t.uav], &g);
      if (!std::isfinite(term)) return kInf;
      f += weight_[i] * term;
      if (grad) (*grad)[0] += g * weight_[i];
    }
    return f;
  }

  double violation(const Points &z, Points *grad) const override {
    if (grad) grad->assign(1, Vec2{});
    double v = 0.0;
    for (std::size_t i = 0; i < in_.tasks.size(); ++i) {
      const auto &t = in_.tasks[i];
      Vec2 g{};
      const double d =
          fixed_[i] + inv_rate_term(cut_[t.uav], relay_bits(t), z[0], in_.luav_positions[t.uav], &g);
      if (!std::isfinite(d)) return kInf;
      if (d <= t.deadline_s) continue;
      v += d - t.deadline_s;
      if (grad) (*grad)[0] += g;
    }
    return v;
  }

 private:
  const HuavPlanInput &in_;
  std::vector<LinkShape> relay_;
  std::vector<double> fixed_;
  std::vector<double> weight_;
  std::vector<RateCut> cut_;
};

void check_luav_input(const LuavPlanInput &in) {
  if (!in.params) throw std::invalid_argument("solve_luav_positions: missing parameters");
  const std::size_t n = in.prev.size();
  if (in.start.size() != n || in.radius.size() != n || in.energy_weight.size() != n || in.mass_kg.size() != n ||
      in.tx_power_w.size() != n)
    throw std::invalid_argument("solve_luav_positions: per-UAV vectors must have equal length");
}

}  // namespace

double luav_true_objective(const LuavPlanInput &in, const std::vector<Vec2> &pos) {
  check_luav_input(in);
  return LuavModel(in).true_objective(pos);
}

ScaResult solve_luav_positions(const LuavPlanInput &in, const ScaOptions &opts) {
  check_luav_input(in);
  LuavModel m(in);
  return run_sca(m, in.start, Discs{in.prev, in.radius}, in.delay_weight, in.guard, opts);
}

namespace {

void check_huav_input(const HuavPlanInput &in) {
  if (!in.params) throw std::invalid_argument("solve_huav_position: missing parameters");
  const std::size_t n = in.luav_positions.size();
  if (in.energy_weight.size() != n || in.tx_power_w.size() != n)
    throw std::invalid_argument("solve_huav_position: per-UAV vectors must have equal length");
}

}  // namespace

double huav_true_objective(const HuavPlanInput &in, const Vec2 &pos) {
  check_huav_input(in);
  return HuavModel(in).true_objective({pos});
}

ScaResult solve_huav_position(const HuavPlanInput &in, const ScaOptions &opts) {
  check_huav_input(in);
  HuavModel m(in);
  GuardFn guard;
  if (in.guard) guard = in.guard;
  return run_sca(m, {in.start}, Discs{{in.prev}, {in.radius}}, in.delay_weight, guard, opts);
}

}  // namespace latus
