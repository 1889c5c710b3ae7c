#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "latus/bcd.hpp"

using namespace latus;

namespace {

struct SlotFixture {
  SystemParams params;
  std::vector<VehicleState> vehicles;
  std::vector<TaskRequest> tasks;
  std::vector<LUavState> luavs;
  HUavState huav;

  explicit SlotFixture(const FleetSpec &fleet = default_fleet())
      : luavs(make_luav_states(fleet)), huav(make_huav_state(fleet)) {}

  SlotContext context(double k, std::vector<double> q) const {
    SlotContext c;
    c.params = &params;
    c.vehicles = &vehicles;
    c.tasks = &tasks;
    c.luavs = &luavs;
    c.huav = huav;
    c.delay_weight = k;
    c.energy_weights = std::move(q);
    return c;
  }

  void draw(std::uint64_t seed) {
    ScenarioGenerator gen(seed, params);
    auto s = gen.generate_slot({});
    vehicles = std::move(s.vehicles);
    tasks = std::move(s.tasks);
  }
};

bool non_increasing(const std::vector<double> &v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + 1e-9 * std::max(1.0, std::abs(v[i - 1]))) return false;
  return true;
}

}  // namespace

TEST_CASE("an empty slot hovers with zero objective") {
  SlotFixture f;
  const auto d = optimize_slot(f.context(1000.0, {5, 5, 5, 5}));
  CHECK(d.objective == 0.0);
  CHECK(d.matching.assignment.empty());
  for (std::size_t u = 0; u < 4; ++u) CHECK(d.alloc.luav_positions[u] == f.luavs[u].position);
  CHECK(d.alloc.huav_position == f.huav.position);
  CHECK(d.converged);
}

TEST_CASE("slot objective trace never increases") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> q(0.0, 200.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SlotFixture f;
    f.draw(seed);
    const auto ctx = f.context(1000.0, {q(rng), q(rng), q(rng), q(rng)});
    const auto d = optimize_slot(ctx);
    CHECK(non_increasing(d.objective_trace));
    for (const auto &t : d.sca_traces) CHECK(non_increasing(t));
    CHECK(d.objective == doctest::Approx(d.objective_trace.back()).epsilon(1e-12));
    CHECK(slot_cost(ctx, d.alloc) == doctest::Approx(d.objective).epsilon(1e-12));
    for (std::size_t u = 0; u < 4; ++u)
      CHECK(dist(d.alloc.luav_positions[u], f.luavs[u].position) <= 25.0 * f.params.slot_s + 1e-9);
    CHECK(dist(d.alloc.huav_position, f.huav.position) <= 25.0 * f.params.slot_s + 1e-9);
  }
}

TEST_CASE("a single generous task converges within three iterations") {
  FleetSpec fleet = default_fleet();
  fleet.luavs.resize(1);
  SlotFixture f(fleet);
  VehicleState v;
  v.position = {260, 240};
  f.vehicles = {v};
  f.tasks = {{0, 2e6, 20.0, 1.0}};
  const auto d = optimize_slot(f.context(1000.0, {0.0}));
  CHECK(d.converged);
  CHECK(d.bcd_iterations <= 3);
  CHECK(non_increasing(d.objective_trace));
  CHECK_FALSE(d.deadline_relaxed);
}

TEST_CASE("a very large delay weight with empty queues reproduces the delay-only decision") {
  SlotFixture f;
  f.draw(21);
  const auto big = optimize_slot(f.context(1e6, {0, 0, 0, 0}));
  const auto ref = optimize_slot(f.context(1000.0, {0, 0, 0, 0}));
  CHECK(big.evaluation.total_delay == doctest::Approx(ref.evaluation.total_delay).epsilon(1e-6));
  CHECK(big.objective / 1e6 == doctest::Approx(ref.objective / 1000.0).epsilon(1e-6));
}

TEST_CASE("a scheduled H-UAV position is respected") {
  SlotFixture f;
  f.draw(2);
  auto ctx = f.context(1000.0, {1, 2, 3, 4});
  ctx.fixed_huav = Vec2{503, 504};
  const auto d = optimize_slot(ctx);
  CHECK(d.alloc.huav_position == Vec2{503, 504});
}

TEST_CASE("direct flags only on tasks kept entirely off the L-UAV") {
  SlotFixture f;
  f.draw(5);
  const auto d = optimize_slot(f.context(1000.0, {50, 50, 50, 50}));
  for (std::size_t i = 0; i < f.tasks.size(); ++i)
    if (d.alloc.direct[i]) CHECK(d.alloc.alpha[i] <= 1e-6);
}

TEST_CASE("per-slot energy cap holds unless flagged") {
  SlotFixture f;
  f.draw(9);
  auto ctx = f.context(1000.0, {0, 0, 0, 0});
  ctx.energy_cap = {4.2, 4.2, 4.2, 4.2};
  const auto d = optimize_slot(ctx);
  if (!d.energy_cap_violated)
    for (const auto &e : d.evaluation.luavs) CHECK(e.total <= 4.2 * (1 + 1e-9));
  CHECK(d.cap_weights.size() == 4);
}
