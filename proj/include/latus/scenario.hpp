#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "latus/geometry.hpp"

namespace latus {

/// Global constants of the air-ground system, all in SI units.
struct SystemParams {
  double gamma0 = 1e-5;            // reference channel gain at 1 m (linear)
  double noise_psd = 3.981071705534973e-21;  // W/Hz
  double bw_v2lu = 2e6;            // Hz
  double bw_lu2hu = 10e6;          // Hz
  double bw_v2hu = 2e6;            // Hz
  double slot_s = 0.2;
  double control_k = 1000.0;
  double energy_quota_j = 4.0;
  double max_harvest_j = 0.5;
  double d_safe_m = 5.0;
  double h1_m = 100.0;
  double h2_m = 150.0;
  int n_slots = 100;
  double area_m = 1000.0;
  int v_min = 10;
  int v_max = 40;
  double task_bits_min = 1e6;
  double task_bits_max = 10e6;
  double density_min = 10.0;
  double density_max = 100.0;
  double deadline_s_min = 0.05;
  double deadline_s_max = 0.2;
  double vehicle_speed_min = 30.0 / 3.6;  // m/s
  double vehicle_speed_max = 80.0 / 3.6;  // m/s
  double vehicle_tx_power_w = 0.5;
};

struct LUavSpec {
  Vec2 position;
  double cpu_hz = 10e9;
  double kappa = 1e-27;
  double mass_kg = 4.0;
  double tx_power_w = 1.0;
  double max_speed_mps = 25.0;
};

struct HUavSpec {
  Vec2 position{500.0, 500.0};
  double cpu_hz = 50e9;
  double max_speed_mps = 25.0;
};

struct FleetSpec {
  std::vector<LUavSpec> luavs;
  HUavSpec huav;
};

/// Four L-UAVs on the quadrant centres and the H-UAV at the middle of the area.
FleetSpec default_fleet(double area_m = 1000.0);

/// Evenly spread `count` L-UAVs over the area (cell centres of a near-square grid, serpentine row order).
/// `count == 4` reproduces the layout of default_fleet.
std::vector<LUavSpec> grid_luavs(int count, double area_m, const LUavSpec &prototype = {});

struct VehicleState {
  std::uint64_t id = 0;
  Vec2 position;
  double speed_mps = 0.0;
  double heading_rad = 0.0;
  double tx_power_w = 0.5;
};

struct TaskRequest {
  std::uint64_t vehicle_id = 0;
  double bits = 0.0;      // D_v
  double density = 0.0;   // cycles per bit
  double deadline_s = 0.0;
};

struct LUavState {
  std::size_t id = 0;
  Vec2 position;
  double queue_j = 0.0;
  double cpu_hz = 10e9;
  double kappa = 1e-27;
  double mass_kg = 4.0;
  double tx_power_w = 1.0;
  double max_speed_mps = 25.0;
};

struct HUavState {
  Vec2 position;
  double cpu_hz = 50e9;
  double max_speed_mps = 25.0;
};

std::vector<LUavState> make_luav_states(const FleetSpec &fleet);
HUavState make_huav_state(const FleetSpec &fleet);

/// Thrown by load/validation routines; carries every violated constraint.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Returns the list of violated parameter invariants (empty when valid).
std::vector<std::string> validate(const SystemParams &params, const FleetSpec &fleet);

double db_to_linear(double db);
double dbm_per_hz_to_w_per_hz(double dbm);
double linear_to_db(double linear);
double w_per_hz_to_dbm_per_hz(double w);

/// Reflects a coordinate into [0, side]; flips `velocity_sign` once per bounce.
double reflect_into(double coord, double side, double &velocity_sign);

/// Seeded generator of the per-slot vehicle population and task stream.
/// Harvest samples come from a separate stream so that the vehicle stream
/// does not depend on the number of L-UAVs.
class ScenarioGenerator {
 public:
  ScenarioGenerator(std::uint64_t seed, const SystemParams &params);

  struct Slot {
    std::vector<VehicleState> vehicles;
    std::vector<TaskRequest> tasks;  // index-aligned with vehicles
  };

  /// Draws the next slot from the previous slot's vehicles.
  Slot generate_slot(const std::vector<VehicleState> &prev_vehicles);

  /// One harvest draw per L-UAV for the current slot.
  std::vector<double> sample_harvest(std::size_t n_luavs);

 private:
  VehicleState spawn_vehicle();

  SystemParams params_;
  std::mt19937_64 traffic_rng_;
  std::mt19937_64 harvest_rng_;
  std::uint64_t next_vehicle_id_ = 0;
};

/// Moves a vehicle by speed * dt along its heading, reflecting at the borders.
VehicleState advance_vehicle(const VehicleState &v, double dt, double area_m);

/// Uniform draw on [0, max_harvest]; exactly 0 when max_harvest <= 0.
double sample_harvest(std::mt19937_64 &rng, double max_harvest_j);

}  // namespace latus
