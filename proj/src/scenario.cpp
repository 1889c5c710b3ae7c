#include "latus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace latus {

namespace {

std::string join_lines(const std::vector<std::string> &lines) {
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto &l : lines) os << "; " << l;
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double w_per_hz_to_dbm_per_hz(double w) { return 10.0 * std::log10(w) + 30.0; }

std::vector<LUavSpec> grid_luavs(int count, double area_m, const LUavSpec &prototype) {
  std::vector<LUavSpec> out;
  if (count <= 0) return out;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  const int rows = (count + cols - 1) / cols;
  const double cw = area_m / cols;
  const double ch = area_m / rows;
  // even rows left to right, odd rows right to left
  for (int r = 0; r < rows && static_cast<int>(out.size()) < count; ++r) {
    for (int i = 0; i < cols && static_cast<int>(out.size()) < count; ++i) {
      const int c = (r % 2 == 0) ? i : cols - 1 - i;
      LUavSpec s = prototype;
      s.position = {(c + 0.5) * cw, (r + 0.5) * ch};
      out.push_back(s);
    }
  }
  return out;
}

FleetSpec default_fleet(double area_m) {
  FleetSpec fleet;
  fleet.luavs = grid_luavs(4, area_m);
  fleet.huav.position = {area_m / 2.0, area_m / 2.0};
  return fleet;
}

std::vector<LUavState> make_luav_states(const FleetSpec &fleet) {
  std::vector<LUavState> out;
  out.reserve(fleet.luavs.size());
  for (std::size_t i = 0; i < fleet.luavs.size(); ++i) {
    const auto &s = fleet.luavs[i];
    out.push_back({i, s.position, 0.0, s.cpu_hz, s.kappa, s.mass_kg, s.tx_power_w, s.max_speed_mps});
  }
  return out;
}

HUavState make_huav_state(const FleetSpec &fleet) {
  return {fleet.huav.position, fleet.huav.cpu_hz, fleet.huav.max_speed_mps};
}

std::vector<std::string> validate(const SystemParams &p, const FleetSpec &fleet) {
  std::vector<std::string> v;
  auto positive = [&](double x, const char *name) {
    if (!(std::isfinite(x) && x > 0.0)) v.push_back(std::string(name) + " must be positive");
  };
  positive(p.gamma0, "gamma0");
  positive(p.noise_psd, "noise_psd");
  positive(p.bw_v2lu, "bw_v2lu_hz");
  positive(p.bw_lu2hu, "bw_lu2hu_hz");
  positive(p.bw_v2hu, "bw_v2hu_hz");
  positive(p.slot_s, "slot_s");
  positive(p.energy_quota_j, "energy_quota_j");
  positive(p.max_harvest_j, "max_harvest_j");
  positive(p.d_safe_m, "d_safe_m");
  positive(p.h1_m, "h1_m");
  positive(p.h2_m, "h2_m");
  positive(p.area_m, "area_m");
  positive(p.task_bits_min, "task_mbits_min");
  positive(p.density_min, "density_min");
  positive(p.deadline_s_min, "deadline_ms_min");
  positive(p.vehicle_tx_power_w, "vehicle_tx_power_w");
  if (!(std::isfinite(p.control_k) && p.control_k > 0.0)) v.push_back("control_k must be positive");
  if (p.h2_m <= p.h1_m) v.push_back("h2_m must exceed h1_m");
  if (p.n_slots < 1) v.push_back("n_slots must be >= 1");
  if (p.v_min < 1) v.push_back("v_min must be >= 1");
  if (p.v_max < p.v_min) v.push_back("v_max must be >= v_min");
  if (p.task_bits_max < p.task_bits_min) v.push_back("task_mbits_max must be >= task_mbits_min");
  if (p.density_max < p.density_min) v.push_back("density_max must be >= density_min");
  if (p.deadline_s_max < p.deadline_s_min) v.push_back("deadline_ms_max must be >= deadline_ms_min");
  if (p.deadline_s_max > p.slot_s) v.push_back("deadline_ms_max must not exceed the slot length");
  if (p.vehicle_speed_min < 0.0 || p.vehicle_speed_max < p.vehicle_speed_min)
    v.push_back("vehicle speed range must satisfy 0 <= min <= max");

  if (fleet.luavs.empty()) v.push_back("at least one L-UAV is required");
  for (std::size_t i = 0; i < fleet.luavs.size(); ++i) {
    const auto &u = fleet.luavs[i];
    const std::string tag = "luavs[" + std::to_string(i) + "].";
    if (!(u.cpu_hz > 0.0)) v.push_back(tag + "cpu_hz must be positive");
    if (!(u.kappa > 0.0)) v.push_back(tag + "kappa must be positive");
    if (!(u.mass_kg > 0.0)) v.push_back(tag + "mass_kg must be positive");
    if (!(u.tx_power_w > 0.0)) v.push_back(tag + "tx_power_w must be positive");
    if (!(u.max_speed_mps > 0.0)) v.push_back(tag + "max_speed_mps must be positive");
    if (u.position.x < 0.0 || u.position.x > p.area_m || u.position.y < 0.0 || u.position.y > p.area_m)
      v.push_back(tag + "position must lie inside the area");
    for (std::size_t j = i + 1; j < fleet.luavs.size(); ++j) {
      if (dist(u.position, fleet.luavs[j].position) < p.d_safe_m)
        v.push_back("luavs[" + std::to_string(i) + "] and luavs[" + std::to_string(j) +
                    "] are closer than d_safe_m");
    }
  }
  if (!(fleet.huav.cpu_hz > 0.0)) v.push_back("huav.cpu_hz must be positive");
  if (!(fleet.huav.max_speed_mps > 0.0)) v.push_back("huav.max_speed_mps must be positive");
  return v;
}

double reflect_into(double coord, double side, double &velocity_sign) {
  // Repeated folding handles steps longer than the side.
  for (int guard = 0; guard < 64 && (coord < 0.0 || coord > side); ++guard) {
    if (coord > side) {
      coord = 2.0 * side - coord;
    } else {
      coord = -coord;
    }
    velocity_sign = -velocity_sign;
  }
  return std::clamp(coord, 0.0, side);
}

VehicleState advance_vehicle(const VehicleState &v, double dt, double area_m) {
  VehicleState out = v;
  if (v.speed_mps == 0.0) return out;
  double sx = 1.0;
  double sy = 1.0;
  const double vx = v.speed_mps * std::cos(v.heading_rad);
  const double vy = v.speed_mps * std::sin(v.heading_rad);
  out.position.x = reflect_into(v.position.x + vx * dt, area_m, sx);
  out.position.y = reflect_into(v.position.y + vy * dt, area_m, sy);
  if (sx < 0.0 || sy < 0.0) out.heading_rad = std::atan2(sy * vy, sx * vx);
  return out;
}

double sample_harvest(std::mt19937_64 &rng, double max_harvest_j) {
  if (!(max_harvest_j > 0.0)) return 0.0;
  return std::uniform_real_distribution<double>(0.0, max_harvest_j)(rng);
}

ScenarioGenerator::ScenarioGenerator(std::uint64_t seed, const SystemParams &params)
    : params_(params), traffic_rng_(seed), harvest_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

VehicleState ScenarioGenerator::spawn_vehicle() {
  std::uniform_real_distribution<double> pos(0.0, params_.area_m);
  std::uniform_real_distribution<double> speed(params_.vehicle_speed_min, params_.vehicle_speed_max);
  std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
  VehicleState v;
  v.id = next_vehicle_id_++;
  v.position = {pos(traffic_rng_), pos(traffic_rng_)};
  v.speed_mps = speed(traffic_rng_);
  v.heading_rad = heading(traffic_rng_);
  v.tx_power_w = params_.vehicle_tx_power_w;
  return v;
}

ScenarioGenerator::Slot ScenarioGenerator::generate_slot(const std::vector<VehicleState> &prev) {
  std::uniform_int_distribution<int> count_dist(params_.v_min, params_.v_max);
  const auto count = static_cast<std::size_t>(count_dist(traffic_rng_));

  Slot slot;
  slot.vehicles.reserve(count);
  for (std::size_t i = 0; i < std::min(count, prev.size()); ++i)
    slot.vehicles.push_back(advance_vehicle(prev[i], params_.slot_s, params_.area_m));
  while (slot.vehicles.size() < count) slot.vehicles.push_back(spawn_vehicle());

  std::uniform_real_distribution<double> bits(params_.task_bits_min, params_.task_bits_max);
  std::uniform_real_distribution<double> density(params_.density_min, params_.density_max);
  std::uniform_real_distribution<double> deadline(params_.deadline_s_min, params_.deadline_s_max);
  slot.tasks.reserve(count);
  for (const auto &v : slot.vehicles) {
    TaskRequest t;
    t.vehicle_id = v.id;
    t.bits = bits(traffic_rng_);
    t.density = density(traffic_rng_);
    t.deadline_s = deadline(traffic_rng_);
    slot.tasks.push_back(t);
  }
  return slot;
}

std::vector<double> ScenarioGenerator::sample_harvest(std::size_t n_luavs) {
  std::vector<double> out(n_luavs);
  for (auto &e : out) e = latus::sample_harvest(harvest_rng_, params_.max_harvest_j);
  return out;
}

}  // namespace latus
