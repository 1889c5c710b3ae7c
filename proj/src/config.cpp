#include "latus/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace latus {

namespace {

class Reader {
 public:
  Reader(const YAML::Node &node, std::string prefix, std::vector<std::string> &errors)
      : node_(node), prefix_(std::move(prefix)), errors_(errors) {}

  template <typename T>
  void get(const std::string &key, T &out, double scale = 1.0) {
    seen_.insert(key);
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, int>) {
        out = v.as<int>();
      } else {
        out = v.as<double>() * scale;
      }
    } catch (const YAML::Exception &) {
      errors_.push_back(prefix_ + key + ": expected a " + (std::is_same_v<T, int> ? "integer" : "number"));
    }
  }

  YAML::Node child(const std::string &key) {
    seen_.insert(key);
    return node_[key];
  }

  void reject_unknown() {
    for (const auto &kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) errors_.push_back(prefix_ + key + ": unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string prefix_;
  std::vector<std::string> &errors_;
  std::set<std::string> seen_;
};

void read_luav(Reader &r, LUavSpec &u, bool with_position) {
  if (with_position) {
    r.get("x_m", u.position.x);
    r.get("y_m", u.position.y);
  }
  r.get("cpu_ghz", u.cpu_hz, 1e9);
  r.get("kappa", u.kappa);
  r.get("mass_kg", u.mass_kg);
  r.get("tx_power_w", u.tx_power_w);
  r.get("max_speed_mps", u.max_speed_mps);
  r.reject_unknown();
}

}  // namespace

SimConfig parse_config(const std::string &yaml_text) {
  std::vector<std::string> errors;
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception &e) {
    throw ConfigError({std::string("unparseable YAML: ") + e.what()});
  }
  SimConfig cfg;
  if (root.IsNull()) {
    cfg.fleet = default_fleet(cfg.params.area_m);
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError({"top level must be a mapping"});

  auto &p = cfg.params;
  Reader r(root, "", errors);
  double gamma0_db = linear_to_db(p.gamma0);
  double noise_dbm = w_per_hz_to_dbm_per_hz(p.noise_psd);
  r.get("gamma0_db", gamma0_db);
  r.get("noise_dbm_hz", noise_dbm);
  if (root["gamma0_db"]) p.gamma0 = db_to_linear(gamma0_db);
  if (root["noise_dbm_hz"]) p.noise_psd = dbm_per_hz_to_w_per_hz(noise_dbm);
  r.get("bw_v2lu_hz", p.bw_v2lu);
  r.get("bw_lu2hu_hz", p.bw_lu2hu);
  r.get("bw_v2hu_hz", p.bw_v2hu);
  r.get("slot_s", p.slot_s);
  r.get("control_k", p.control_k);
  r.get("energy_quota_j", p.energy_quota_j);
  r.get("max_harvest_j", p.max_harvest_j);
  r.get("d_safe_m", p.d_safe_m);
  r.get("h1_m", p.h1_m);
  r.get("h2_m", p.h2_m);
  r.get("n_slots", p.n_slots);
  r.get("area_m", p.area_m);
  r.get("v_min", p.v_min);
  r.get("v_max", p.v_max);
  r.get("task_mbits_min", p.task_bits_min, 1e6);
  r.get("task_mbits_max", p.task_bits_max, 1e6);
  r.get("density_min", p.density_min);
  r.get("density_max", p.density_max);
  r.get("deadline_ms_min", p.deadline_s_min, 1e-3);
  r.get("deadline_ms_max", p.deadline_s_max, 1e-3);
  r.get("vehicle_speed_kmh_min", p.vehicle_speed_min, 1.0 / 3.6);
  r.get("vehicle_speed_kmh_max", p.vehicle_speed_max, 1.0 / 3.6);
  r.get("vehicle_tx_power_w", p.vehicle_tx_power_w);

  int n_luavs = 4;
  r.get("n_luavs", n_luavs);
  LUavSpec proto;
  if (const auto node = r.child("luav_defaults")) {
    if (!node.IsMap()) {
      errors.push_back("luav_defaults: expected a mapping");
    } else {
      Reader ur(node, "luav_defaults.", errors);
      read_luav(ur, proto, false);
    }
  }
  const auto luavs = r.child("luavs");
  if (luavs) {
    if (!luavs.IsSequence()) {
      errors.push_back("luavs: expected a list");
    } else {
      if (root["n_luavs"] && static_cast<std::size_t>(n_luavs) != luavs.size())
        errors.push_back("n_luavs disagrees with the length of luavs");
      for (std::size_t i = 0; i < luavs.size(); ++i) {
        LUavSpec u = proto;
        const std::string tag = "luavs[" + std::to_string(i) + "].";
        if (!luavs[i].IsMap() || !luavs[i]["x_m"] || !luavs[i]["y_m"]) {
          errors.push_back(tag + "x_m and y_m are required");
          if (!luavs[i].IsMap()) continue;
        }
        Reader ur(luavs[i], tag, errors);
        read_luav(ur, u, true);
        cfg.fleet.luavs.push_back(u);
      }
    }
  } else if (n_luavs < 1) {
    errors.push_back("n_luavs must be >= 1");
  } else {
    cfg.fleet.luavs = grid_luavs(n_luavs, p.area_m, proto);
  }

  cfg.fleet.huav.position = {p.area_m / 2.0, p.area_m / 2.0};
  if (const auto node = r.child("huav")) {
    if (!node.IsMap()) {
      errors.push_back("huav: expected a mapping");
    } else {
      Reader hr(node, "huav.", errors);
      hr.get("x_m", cfg.fleet.huav.position.x);
      hr.get("y_m", cfg.fleet.huav.position.y);
      hr.get("cpu_ghz", cfg.fleet.huav.cpu_hz, 1e9);
      hr.get("max_speed_mps", cfg.fleet.huav.max_speed_mps);
      hr.reject_unknown();
    }
  }
  r.reject_unknown();

  for (auto &e : validate(p, cfg.fleet)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

SimConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace latus
