// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latus/experiment.hpp"
#include "latus/radio.hpp"
#include "latus/resource_allocator.hpp"
#include "latus/simulation.hpp"
#include "latus/trajectory.hpp"
#include "oracles.hpp"

using namespace latus;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and thresholds.
constexpr double kOracleRel = 1e-3;
constexpr double kSolverSeconds = 60.0;
constexpr double kMonotoneTol = 1e-9;
constexpr double kNetEnergyFactor = 1.05;
constexpr double kMedianFactor = 10.0;
constexpr std::size_t kMedianAfter = 20;
constexpr double kDeviationRatio = 2.0;
constexpr double kTransmitRatio = 0.85;
constexpr double kTransmitSeconds = 600.0;
constexpr double kDelayRatio = 1.10;
constexpr double kSweepNoise = 0.02;
constexpr double kSweepGap = 0.03;
constexpr double kFeasTol = 1e-9;

constexpr int kSeeds10 = 10;
constexpr int kSeeds5 = 5;
const std::vector<double> kSweep{0.1, 1.0, 10.0, 100.0, 1000.0};

int g_failed = 0;

void report(int id, const std::string &name, bool pass, const std::string &detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char *f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_gap(double got, double ref) { return std::abs(got - ref) / std::max(std::abs(ref), 1e-300); }

bool non_increasing(const std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + kMonotoneTol * std::max(1.0, std::abs(v[i - 1]))) return false;
  return true;
}

// ---------------------------------------------------------------- runs

class RunCache {
 public:
  const RunTrace &get(PolicyKind kind, std::uint64_t seed, double k = SystemParams{}.control_k) {
    const auto key = std::make_tuple(static_cast<int>(kind), seed, k);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    SystemParams p;
    p.control_k = k;
    return runs_.emplace(key, run(seed, Policy::make(kind), p, default_fleet())).first->second;
  }
  const std::map<std::tuple<int, std::uint64_t, double>, RunTrace> &all() const { return runs_; }

 private:
  std::map<std::tuple<int, std::uint64_t, double>, RunTrace> runs_;
};

double mean_over_seeds(RunCache &c, PolicyKind kind, int seeds, const std::function<double(const RunTrace &)> &f,
                       double k = SystemParams{}.control_k) {
  double s = 0.0;
  for (int i = 1; i <= seeds; ++i) s += f(c.get(kind, static_cast<std::uint64_t>(i), k));
  return s / seeds;
}

// ---------------------------------------------------------------- criteria

void solver_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  double worst_f = 0.0;
  double worst_a = 0.0;
  int n_f = 0;
  int n_a = 0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    auto p = oracle::random_single_server(rng, n);
    const auto alpha = oracle::random_alpha(rng, n);
    const auto f = solve_f_given_alpha(p, alpha);
    if (!f.feasible) {
      ok = false;
      continue;
    }
    worst_f = std::max(worst_f, rel_gap(p2_objective(p, alpha, f.f_lu, f.f_h), oracle::grid_f_objective(p, alpha)));
    ++n_f;

    // deadlines placed between the two pure-split delays so that the split interval binds
    for (int i = 0; i < n; ++i) {
      auto &t = p.tasks[i];
      if (!(f.f_lu[i] > 0.0) || !(f.f_h[i] > 0.0)) continue;
      const double w = t.bits * t.density;
      const double d0 = t.v2lu_delay_s + t.bits / t.relay_rate + w / f.f_h[i];
      const double d1 = t.v2lu_delay_s + w / f.f_lu[i];
      t.deadline_s = std::min(d0, d1) + oracle::uniform(rng, 0.0, 1.0) * std::abs(d1 - d0) + 1e-9;
    }
    const auto a = solve_alpha_given_f(p, f.f_lu, f.f_h, alpha);
    if (!a.feasible || max_deadline_excess(p, a.alpha, f.f_lu, f.f_h) > 1e-9) {
      ok = false;
      continue;
    }
    worst_a = std::max(worst_a, rel_gap(p2_objective(p, a.alpha, f.f_lu, f.f_h),
                                        oracle::scan_alpha_objective(p, f.f_lu, f.f_h)));
    ++n_a;
  }
  const double secs = seconds_since(t0);
  const bool pass = ok && n_f >= 100 && n_a >= 100 && worst_f <= kOracleRel && worst_a <= kOracleRel &&
                    secs < kSolverSeconds;
  report(1, "allocator vs grid/scan oracles", pass,
         std::to_string(n_f) + " CPU + " + std::to_string(n_a) + " split instances, worst rel gap " +
             fmt("%.2e", worst_f) + " / " + fmt("%.2e", worst_a) + ", " + fmt("%.1f s", secs));
}

void trajectory_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams sp;
  std::mt19937_64 rng(2002);
  double worst = 0.0;
  int count = 0;
  for (int trial = 0; trial < 30; ++trial) {
    TrajectoryTask t;
    const Vec2 prev{oracle::uniform(rng, 100, 900), oracle::uniform(rng, 100, 900)};
    t.vehicle = prev + Vec2{oracle::uniform(rng, -150, 150), oracle::uniform(rng, -150, 150)};
    t.bits = oracle::uniform(rng, 1e6, 10e6);
    t.density = oracle::uniform(rng, 10, 100);
    t.deadline_s = 100.0;
    t.alpha = 1.0;
    t.f_lu = 10e9;
    LuavPlanInput in;
    in.params = &sp;
    in.tasks = {t};
    in.prev = {prev};
    in.start = {prev};
    in.radius = {25.0 * sp.slot_s};
    in.energy_weight = {trial < 10 ? 0.0 : oracle::uniform(rng, 0.0, 30.0)};
    in.mass_kg = {4.0};
    in.tx_power_w = {1.0};
    in.huav = {500, 500};
    in.delay_weight = oracle::uniform(rng, 1.0, 1000.0);
    const auto r = solve_luav_positions(in);
    const double got = luav_true_objective(in, r.positions);
    const double grid =
        oracle::disc_grid_min(prev, in.radius[0], 1.0, [&](const Vec2 &z) { return luav_true_objective(in, {z}); });
    worst = std::max(worst, got <= grid ? 0.0 : rel_gap(got, grid));
    ++count;
  }
  for (int trial = 0; trial < 20; ++trial) {
    TrajectoryTask t;
    const Vec2 prev{oracle::uniform(rng, 100, 900), oracle::uniform(rng, 100, 900)};
    const Vec2 lu = prev + Vec2{oracle::uniform(rng, -300, 300), oracle::uniform(rng, -300, 300)};
    t.vehicle = lu;
    t.bits = oracle::uniform(rng, 1e6, 10e6);
    t.density = oracle::uniform(rng, 10, 100);
    t.deadline_s = 100.0;
    t.alpha = oracle::uniform(rng, 0.0, 0.9);
    t.f_lu = 5e9;
    t.f_h = 10e9;
    HuavPlanInput in;
    in.params = &sp;
    in.tasks = {t};
    in.luav_positions = {lu};
    in.energy_weight = {oracle::uniform(rng, 0.0, 30.0)};
    in.tx_power_w = {1.0};
    in.prev = prev;
    in.start = prev;
    in.radius = 25.0 * sp.slot_s;
    in.delay_weight = oracle::uniform(rng, 1.0, 1000.0);
    const auto r = solve_huav_position(in);
    const double got = huav_true_objective(in, r.positions[0]);
    const double grid =
        oracle::disc_grid_min(prev, in.radius, 1.0, [&](const Vec2 &z) { return huav_true_objective(in, z); });
    worst = std::max(worst, got <= grid ? 0.0 : rel_gap(got, grid));
    ++count;
  }
  const double secs = seconds_since(t0);
  report(2, "trajectory planners vs 1 m grid", count >= 50 && worst <= kOracleRel && secs < kSolverSeconds,
         std::to_string(count) + " instances, worst excess over grid " + fmt("%.2e", worst) + ", " +
             fmt("%.2f s", secs));
}

void surrogate_soundness() {
  const SystemParams sp;
  std::mt19937_64 rng(3003);
  int rate_bad = 0;
  int dist_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec2 peer{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const Vec2 anchor{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const Vec2 eval{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const bool ground = i % 2 == 0;
    const double alt = ground ? sp.h1_m : sp.h2_m - sp.h1_m;
    const double bw = ground ? sp.bw_v2lu : sp.bw_lu2hu;
    const double pw = ground ? 0.5 : 1.0;
    const double r = link_rate(bw, pw, los_gain(dist_sq(eval, peer), alt, sp.gamma0), sp.noise_psd);
    const double lb = rate_lower_bound(anchor, eval, peer, alt, bw, pw, sp.gamma0, sp.noise_psd);
    if (lb > r * (1 + 1e-12)) ++rate_bad;
  }
  for (int i = 0; i < 10000; ++i) {
    const Vec2 au{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const Vec2 av{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const Vec2 pu{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const Vec2 pv{oracle::uniform(rng, 0, 1000), oracle::uniform(rng, 0, 1000)};
    const double d2 = dist_sq(pu, pv);
    if (safety_lower_bound(pu, pv, au, av) > d2 + 1e-12 * std::max(1.0, d2 + dist_sq(au, av))) ++dist_bad;
  }
  report(3, "surrogate lower bounds", rate_bad == 0 && dist_bad == 0,
         "rate violations " + std::to_string(rate_bad) + "/10000, distance violations " + std::to_string(dist_bad) +
             "/10000");
}

void monotone_descent(RunCache &c) {
  const auto &t = c.get(PolicyKind::Latus, 1);
  int bcd_bad = 0;
  int sca_bad = 0;
  std::size_t sca_runs = 0;
  for (const auto &m : t.slots) {
    if (!non_increasing(m.objective_trace)) ++bcd_bad;
    for (const auto &s : m.sca_traces) {
      ++sca_runs;
      if (!non_increasing(s)) ++sca_bad;
    }
  }
  report(4, "monotone BCD and SCA descent", bcd_bad == 0 && sca_bad == 0 && t.slots.size() == 100,
         std::to_string(t.slots.size()) + " slots, non-monotone BCD traces " + std::to_string(bcd_bad) +
             ", non-monotone SCA traces " + std::to_string(sca_bad) + "/" + std::to_string(sca_runs));
}

void drift_bound(RunCache &c) {
  std::size_t bad = 0;
  std::size_t slots = 0;
  for (int s = 1; s <= kSeeds5; ++s) {
    const auto &t = c.get(PolicyKind::Latus, s);
    bad += t.summary.bound_violations;
    slots += t.slots.size();
  }
  report(5, "drift-plus-penalty bound per slot", bad == 0,
         std::to_string(bad) + " violations over " + std::to_string(slots) + " slots");
}

void energy_stability(RunCache &c) {
  const double quota = SystemParams{}.energy_quota_j;
  double worst_net = -1e300;
  std::size_t spikes = 0;
  double latus_dev = 0.0;
  double delay_only_dev = 0.0;
  for (int s = 1; s <= kSeeds5; ++s) {
    const auto &t = c.get(PolicyKind::Latus, s);
    for (double e : t.summary.mean_net_energy_j) worst_net = std::max(worst_net, e);
    std::vector<double> history;
    for (const auto &m : t.slots) {
      const double q = *std::max_element(m.queue_next_j.begin(), m.queue_next_j.end());
      history.push_back(q);
      if (m.slot < kMedianAfter) continue;
      std::vector<double> sorted = history;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t n = sorted.size();
      const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      if (q > kMedianFactor * median) ++spikes;
    }
    for (double q : t.slots.back().queue_next_j) latus_dev += q;
    for (double q : c.get(PolicyKind::DelayOnly, s).slots.back().queue_next_j) delay_only_dev += q;
  }
  const bool net_ok = worst_net <= kNetEnergyFactor * quota;
  const bool spike_ok = spikes == 0;
  const bool accum_ok = delay_only_dev >= kDeviationRatio * latus_dev;
  report(6, "energy stability", net_ok && spike_ok && accum_ok,
         "worst time-average E-e " + fmt("%.3f J", worst_net) + " (limit " + fmt("%.2f J", kNetEnergyFactor * quota) +
             "), median spikes " + std::to_string(spikes) + ", final deviation delay-only/LATUS " +
             fmt("%.1f", delay_only_dev) + "/" + fmt("%.1f J", latus_dev));
}

void transmit_energy(RunCache &c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tx = [](const RunTrace &t) { return t.summary.mean_transmit_energy_j; };
  const double latus = mean_over_seeds(c, PolicyKind::Latus, kSeeds10, tx);
  const double ft = mean_over_seeds(c, PolicyKind::FtLatus, kSeeds10, tx);
  const double secs = seconds_since(t0);
  report(7, "transmit energy vs fixed trajectory", latus <= kTransmitRatio * ft && secs < kTransmitSeconds,
         "LATUS " + fmt("%.5f J", latus) + ", FT_LATUS " + fmt("%.5f J", ft) + ", ratio " +
             fmt("%.3f", latus / ft) + ", " + fmt("%.0f s", secs));
}

void delay_direction(RunCache &c) {
  auto d = [](const RunTrace &t) { return t.summary.mean_task_delay_s; };
  const double latus = mean_over_seeds(c, PolicyKind::Latus, kSeeds10, d);
  const double ref = mean_over_seeds(c, PolicyKind::DelayOnly, kSeeds10, d);
  report(8, "delay vs delay-only", ref <= latus && latus <= kDelayRatio * ref,
         "LATUS " + fmt("%.4f s", latus) + ", DELAY_ONLY " + fmt("%.4f s", ref) + ", ratio " +
             fmt("%.3f", latus / ref));
}

void k_sweep(RunCache &c) {
  auto d = [](const RunTrace &t) { return t.summary.mean_task_delay_s; };
  std::vector<double> delays;
  std::string detail;
  for (double k : kSweep) {
    delays.push_back(mean_over_seeds(c, PolicyKind::Latus, kSeeds5, d, k));
    detail += "K=" + fmt("%g", k) + ":" + fmt("%.4f", delays.back()) + " ";
  }
  bool trend = true;
  for (std::size_t i = 1; i < delays.size(); ++i) trend = trend && delays[i] <= delays[i - 1] * (1 + kSweepNoise);
  const double ref = mean_over_seeds(c, PolicyKind::DelayOnly, kSeeds5, d);
  const double gap = (delays.back() - ref) / ref;
  report(9, "delay trend over K", trend && std::abs(gap) <= kSweepGap,
         detail + "DELAY_ONLY:" + fmt("%.4f", ref) + ", trend " + (trend ? "ok" : "broken") + ", gap at K=1000 " +
             fmt("%.1f%%", 100 * gap));
}

void dedr_stability(RunCache &c) {
  auto s = [](const RunTrace &t) { return t.summary.dedr_std; };
  const double latus = mean_over_seeds(c, PolicyKind::Latus, kSeeds5, s);
  const double ft = mean_over_seeds(c, PolicyKind::FtLatus, kSeeds5, s);
  report(10, "DEDR fluctuation vs fixed trajectory", latus <= ft,
         "std LATUS " + fmt("%.3e", latus) + ", FT_LATUS " + fmt("%.3e", ft));
}

void hard_feasibility(RunCache &c) {
  const SystemParams sp;
  const auto fleet = default_fleet();
  std::size_t speed = 0;
  std::size_t safety = 0;
  std::size_t unflagged = 0;
  std::size_t slots = 0;
  for (const auto &[key, t] : c.all()) {
    for (const auto &m : t.slots) {
      ++slots;
      if (m.max_luav_step_m > fleet.luavs[0].max_speed_mps * sp.slot_s * (1 + kFeasTol)) ++speed;
      if (m.huav_step_m > fleet.huav.max_speed_mps * sp.slot_s * (1 + kFeasTol)) ++speed;
      if (m.min_luav_separation_m < sp.d_safe_m) ++safety;
      if (m.deadline_violations > 0 && !m.deadline_relaxed) ++unflagged;
    }
  }
  report(11, "hard feasibility", speed == 0 && safety == 0 && unflagged == 0,
         std::to_string(slots) + " slots in " + std::to_string(c.all().size()) + " runs, speed " +
             std::to_string(speed) + ", safety " + std::to_string(safety) + ", unflagged deadline misses " +
             std::to_string(unflagged));
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism() {
  const auto base = fs::temp_directory_path() / "latus_acceptance";
  fs::remove_all(base);
  ExperimentSpec spec;
  spec.config = parse_config("");
  spec.policies = {PolicyKind::Latus, PolicyKind::FtLatus, PolicyKind::DelayOnly};
  spec.seeds = {1};
  bool same = true;
  std::string detail;
  std::vector<fs::path> dirs{base / "a", base / "b"};
  for (const auto &d : dirs) {
    spec.out_dir = d.string();
    write_outputs(run_experiment(spec), spec.out_dir);
  }
  for (const char *f : {"metrics.csv", "trajectories.csv", "summary.json"}) {
    const auto a = slurp(dirs[0] / f);
    const bool eq = !a.empty() && a == slurp(dirs[1] / f);
    same = same && eq;
    detail += std::string(f) + (eq ? " identical " : " DIFFERS ");
  }
  fs::remove_all(base);
  report(12, "byte-identical reruns", same, detail);
}

}  // namespace

int main() {
  std::printf("acceptance: 12 criteria, default parameters, seeds 1..%d\n", kSeeds10);
  RunCache cache;
  solver_oracles();
  trajectory_oracles();
  surrogate_soundness();
  monotone_descent(cache);
  drift_bound(cache);
  energy_stability(cache);
  transmit_energy(cache);
  delay_direction(cache);
  k_sweep(cache);
  dedr_stability(cache);
  hard_feasibility(cache);
  determinism();
  std::printf("acceptance: %d of 12 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
