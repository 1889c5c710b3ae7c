#include "latus/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace latus {

namespace fs = std::filesystem;

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::K: return "K";
    case SweepAxis::NLuavs: return "n_luavs";
    case SweepAxis::EnergyQuota: return "energy_quota";
    case SweepAxis::MaxHarvest: return "max_harvest";
    case SweepAxis::VCount: return "v_count";
  }
  return "none";
}

std::optional<SweepAxis> parse_axis(const std::string &name) {
  std::string low;
  for (char c : name) low.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (auto a : {SweepAxis::None, SweepAxis::K, SweepAxis::NLuavs, SweepAxis::EnergyQuota, SweepAxis::MaxHarvest,
                 SweepAxis::VCount}) {
    std::string n = axis_name(a);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == low) return a;
  }
  return std::nullopt;
}

namespace {

bool is_count(double v) { return std::isfinite(v) && v >= 1.0 && v == std::floor(v) && v < 1e6; }

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> validate_experiment(const ExperimentSpec &spec) {
  std::vector<std::string> v;
  if (spec.policies.empty()) v.push_back("at least one policy is required");
  if (spec.seeds.empty()) v.push_back("at least one seed is required");
  if (spec.axis != SweepAxis::None) {
    if (spec.values.empty()) v.push_back("sweep " + axis_name(spec.axis) + " needs at least one value");
    for (double x : spec.values) {
      if (!(std::isfinite(x) && x > 0.0)) v.push_back("sweep values must be positive");
      else if ((spec.axis == SweepAxis::NLuavs || spec.axis == SweepAxis::VCount) && !is_count(x))
        v.push_back("sweep " + axis_name(spec.axis) + " values must be whole numbers");
    }
  }
  return v;
}

SimConfig apply_sweep(const SimConfig &cfg, SweepAxis axis, double value) {
  SimConfig out = cfg;
  auto &p = out.params;
  switch (axis) {
    case SweepAxis::None: break;
    case SweepAxis::K: p.control_k = value; break;
    case SweepAxis::EnergyQuota: p.energy_quota_j = value; break;
    case SweepAxis::MaxHarvest: p.max_harvest_j = value; break;
    case SweepAxis::VCount:
      p.v_min = static_cast<int>(value);
      p.v_max = static_cast<int>(value);
      break;
    case SweepAxis::NLuavs: {
      const LUavSpec proto = cfg.fleet.luavs.empty() ? LUavSpec{} : cfg.fleet.luavs.front();
      out.fleet.luavs = grid_luavs(static_cast<int>(value), p.area_m, proto);
      break;
    }
  }
  return out;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec &spec, const BcdOptions &opts) {
  auto errors = validate_experiment(spec);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  std::vector<double> values = spec.axis == SweepAxis::None ? std::vector<double>{0.0} : spec.values;
  std::vector<RunRecord> runs;
  for (double value : values) {
    const SimConfig cfg = apply_sweep(spec.config, spec.axis, value);
    for (PolicyKind kind : spec.policies) {
      for (std::uint64_t seed : spec.seeds) {
        RunRecord r;
        r.axis = spec.axis;
        r.sweep_value = value;
        r.run_id = policy_name(kind) + "_s" + std::to_string(seed);
        if (spec.axis != SweepAxis::None) r.run_id += "_" + axis_name(spec.axis) + format_value(value);
        r.trace = run(seed, Policy::make(kind), cfg.params, cfg.fleet, opts);
        runs.push_back(std::move(r));
      }
    }
  }
  return runs;
}

namespace {

nlohmann::ordered_json config_json(const SystemParams &p, const FleetSpec &fleet) {
  nlohmann::ordered_json j;
  j["gamma0"] = p.gamma0;
  j["noise_psd_w_hz"] = p.noise_psd;
  j["bw_v2lu_hz"] = p.bw_v2lu;
  j["bw_lu2hu_hz"] = p.bw_lu2hu;
  j["bw_v2hu_hz"] = p.bw_v2hu;
  j["slot_s"] = p.slot_s;
  j["control_k"] = p.control_k;
  j["energy_quota_j"] = p.energy_quota_j;
  j["max_harvest_j"] = p.max_harvest_j;
  j["d_safe_m"] = p.d_safe_m;
  j["h1_m"] = p.h1_m;
  j["h2_m"] = p.h2_m;
  j["n_slots"] = p.n_slots;
  j["area_m"] = p.area_m;
  j["v_min"] = p.v_min;
  j["v_max"] = p.v_max;
  j["task_bits_min"] = p.task_bits_min;
  j["task_bits_max"] = p.task_bits_max;
  j["density_min"] = p.density_min;
  j["density_max"] = p.density_max;
  j["deadline_s_min"] = p.deadline_s_min;
  j["deadline_s_max"] = p.deadline_s_max;
  j["vehicle_speed_min_mps"] = p.vehicle_speed_min;
  j["vehicle_speed_max_mps"] = p.vehicle_speed_max;
  j["vehicle_tx_power_w"] = p.vehicle_tx_power_w;
  auto &lu = j["luavs"] = nlohmann::ordered_json::array();
  for (const auto &u : fleet.luavs) {
    nlohmann::ordered_json e;
    e["x_m"] = u.position.x;
    e["y_m"] = u.position.y;
    e["cpu_hz"] = u.cpu_hz;
    e["kappa"] = u.kappa;
    e["mass_kg"] = u.mass_kg;
    e["tx_power_w"] = u.tx_power_w;
    e["max_speed_mps"] = u.max_speed_mps;
    lu.push_back(e);
  }
  j["huav"] = {{"x_m", fleet.huav.position.x},
               {"y_m", fleet.huav.position.y},
               {"cpu_hz", fleet.huav.cpu_hz},
               {"max_speed_mps", fleet.huav.max_speed_mps}};
  return j;
}

}  // namespace

void ensure_output_dir(const std::string &dir_str) {
  const fs::path dir(dir_str);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("output directory " + dir.string() + " cannot be created");
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw std::runtime_error("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_outputs(const std::vector<RunRecord> &runs, const std::string &dir_str) {
  ensure_output_dir(dir_str);
  const fs::path dir(dir_str);

  std::size_t max_u = 0;
  for (const auto &r : runs) max_u = std::max(max_u, r.trace.fleet.luavs.size());

  std::ofstream metrics(dir / "metrics.csv", std::ios::binary);
  metrics << "run_id,seed,policy,sweep_axis,sweep_value,slot,n_tasks,total_delay_s,mean_task_delay_s";
  for (std::size_t u = 0; u < max_u; ++u) {
    const std::string s = std::to_string(u);
    metrics << ",q" << s << "_j,q_next" << s << "_j,e_comp" << s << "_j,e_relay" << s << "_j,e_flight" << s
            << "_j,e_total" << s << "_j,harvest" << s << "_j";
  }
  metrics << ",dedr,deadline_violations,deadline_relaxed,relaxation,bcd_iterations\n";
  for (const auto &r : runs) {
    const std::size_t nu = r.trace.fleet.luavs.size();
    for (const auto &m : r.trace.slots) {
      metrics << r.run_id << ',' << r.trace.seed << ',' << policy_name(r.trace.policy) << ',' << axis_name(r.axis)
              << ',' << num(r.sweep_value) << ',' << m.slot << ',' << m.n_tasks << ',' << num(m.total_delay_s) << ','
              << num(m.mean_task_delay_s);
      for (std::size_t u = 0; u < max_u; ++u) {
        if (u < nu) {
          metrics << ',' << num(m.queue_j[u]) << ',' << num(m.queue_next_j[u]) << ',' << num(m.e_comp_j[u]) << ','
                  << num(m.e_relay_j[u]) << ',' << num(m.e_flight_j[u]) << ',' << num(m.e_total_j[u]) << ','
                  << num(m.harvest_j[u]);
        } else {
          metrics << ",,,,,,,";
        }
      }
      metrics << ',' << num(m.dedr) << ',' << m.deadline_violations << ',' << (m.deadline_relaxed ? 1 : 0) << ','
              << num(m.relaxation) << ',' << m.bcd_iterations << '\n';
    }
  }

  std::ofstream traj(dir / "trajectories.csv", std::ios::binary);
  traj << "run_id,slot,entity_id,x_m,y_m\n";
  auto row = [&](const std::string &id, long slot, const std::string &entity, const Vec2 &p) {
    traj << id << ',' << slot << ',' << entity << ',' << num(p.x) << ',' << num(p.y) << '\n';
  };
  for (const auto &r : runs) {
    for (std::size_t u = 0; u < r.trace.luav_start.size(); ++u)
      row(r.run_id, -1, "luav" + std::to_string(u), r.trace.luav_start[u]);
    row(r.run_id, -1, "huav", r.trace.huav_start);
    for (const auto &m : r.trace.slots) {
      for (std::size_t u = 0; u < m.luav_positions.size(); ++u)
        row(r.run_id, static_cast<long>(m.slot), "luav" + std::to_string(u), m.luav_positions[u]);
      row(r.run_id, static_cast<long>(m.slot), "huav", m.huav_position);
    }
  }

  nlohmann::ordered_json summary;
  auto &arr = summary["runs"] = nlohmann::ordered_json::array();
  for (const auto &r : runs) {
    const auto &s = r.trace.summary;
    nlohmann::ordered_json j;
    j["run_id"] = r.run_id;
    j["seed"] = r.trace.seed;
    j["policy"] = policy_name(r.trace.policy);
    j["sweep_axis"] = axis_name(r.axis);
    j["sweep_value"] = r.sweep_value;
    j["slots"] = r.trace.slots.size();
    j["mean_task_delay_s"] = s.mean_task_delay_s;
    j["mean_transmit_energy_j"] = s.mean_transmit_energy_j;
    j["dedr_std"] = s.dedr_std;
    j["queue_max_j"] = s.queue_max_j;
    j["final_mean_queue_j"] = s.final_mean_queue_j;
    j["mean_net_energy_j"] = s.mean_net_energy_j;
    j["bcd_iterations_mean"] = s.mean_bcd_iterations;
    j["bcd_iterations_max"] = s.max_bcd_iterations;
    j["relaxed_slots"] = s.relaxed_slots;
    j["deadline_violations"] = s.deadline_violations;
    j["bound_violations"] = s.bound_violations;
    j["config"] = config_json(r.trace.params, r.trace.fleet);
    arr.push_back(std::move(j));
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  js << summary.dump(2) << '\n';
  metrics.flush();
  traj.flush();
  js.flush();
  if (!metrics || !traj || !js) throw std::runtime_error("failed while writing outputs to " + dir.string());
}

}  // namespace latus
