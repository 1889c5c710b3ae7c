#include <cmath>
#include <vector>

#include "doctest.h"
#include "latus/simulation.hpp"

using namespace latus;

namespace {

SlotInputs one_task_slot(Vec2 where, double harvest, std::size_t n_luavs) {
  SlotInputs in;
  VehicleState v;
  v.position = where;
  in.vehicles = {v};
  in.tasks = {{0, 6e6, 80.0, 0.5}};
  in.harvest.assign(n_luavs, harvest);
  return in;
}

SystemParams short_run(int n) {
  SystemParams p;
  p.n_slots = n;
  return p;
}

}  // namespace

TEST_CASE("policy names round-trip") {
  for (auto k : {PolicyKind::Latus, PolicyKind::FtLatus, PolicyKind::DelayOnly, PolicyKind::PerSlotCap,
                 PolicyKind::EnergyCentric})
    CHECK(parse_policy(policy_name(k)) == k);
  CHECK(parse_policy("latus") == PolicyKind::Latus);
  CHECK_FALSE(parse_policy("nope").has_value());
}

TEST_CASE("two-slot queue chain follows the recursion") {
  SystemParams p;
  const auto fleet = default_fleet();
  const auto policy = Policy::make(PolicyKind::Latus);
  auto state = initial_state(p, fleet, policy);
  const auto emax = luav_energy_upper_bounds(p, fleet);
  const auto m0 = step(state, one_task_slot({240, 250}, 0.3, 4), policy, p, emax);
  const auto m1 = step(state, one_task_slot({245, 255}, 0.1, 4), policy, p, emax);
  for (std::size_t u = 0; u < 4; ++u) {
    CHECK(m0.queue_j[u] == 0.0);
    const double q1 = std::max(0.0 + m0.e_total_j[u] - 0.3 - p.energy_quota_j, 0.0);
    CHECK(m1.queue_j[u] == doctest::Approx(q1).epsilon(1e-15));
    CHECK(m0.queue_next_j[u] == doctest::Approx(q1).epsilon(1e-15));
    const double q2 = std::max(q1 + m1.e_total_j[u] - 0.1 - p.energy_quota_j, 0.0);
    CHECK(m1.queue_next_j[u] == doctest::Approx(q2).epsilon(1e-15));
  }
  CHECK(m0.e_total_j[0] > 0.0);
}

TEST_CASE("first slot decision does not depend on the quota") {
  SystemParams a;
  SystemParams b;
  b.energy_quota_j = 40.0;
  const auto fleet = default_fleet();
  const auto policy = Policy::make(PolicyKind::Latus);
  auto sa = initial_state(a, fleet, policy);
  auto sb = initial_state(b, fleet, policy);
  ScenarioGenerator gen(4, a);
  auto slot = gen.generate_slot({});
  SlotInputs in{slot.vehicles, slot.tasks, gen.sample_harvest(4)};
  const auto ma = step(sa, in, policy, a, luav_energy_upper_bounds(a, fleet));
  const auto mb = step(sb, in, policy, b, luav_energy_upper_bounds(b, fleet));
  CHECK(ma.task_delay_s == mb.task_delay_s);
  CHECK(ma.luav_positions == mb.luav_positions);
  CHECK(ma.huav_position == mb.huav_position);
}

TEST_CASE("delay-only decisions ignore the queues it reports") {
  SystemParams p;
  const auto fleet = default_fleet();
  const auto policy = Policy::make(PolicyKind::DelayOnly);
  auto s1 = initial_state(p, fleet, policy);
  auto s2 = initial_state(p, fleet, policy);
  const auto emax = luav_energy_upper_bounds(p, fleet);
  ScenarioGenerator gen(8, p);
  bool grew = false;
  std::vector<VehicleState> prev;
  for (int n = 0; n < 4; ++n) {
    auto slot = gen.generate_slot(prev);
    prev = slot.vehicles;
    SlotInputs in{slot.vehicles, slot.tasks, gen.sample_harvest(4)};
    const auto m1 = step(s1, in, policy, p, emax);
    s2.queues.q.assign(4, 0.0);
    s2.last_energy.assign(4, 0.0);
    const auto m2 = step(s2, in, policy, p, emax);
    CHECK(m1.task_delay_s == m2.task_delay_s);
    CHECK(m1.luav_positions == m2.luav_positions);
    for (double q : m1.queue_next_j) grew = grew || q > 0.0;
  }
  CHECK(grew);
}

TEST_CASE("one-slot run summary equals the slot") {
  const auto t = run(3, Policy::make(PolicyKind::Latus), short_run(1), default_fleet());
  REQUIRE(t.slots.size() == 1);
  const auto &m = t.slots[0];
  CHECK(t.summary.mean_task_delay_s == m.mean_task_delay_s);
  for (std::size_t u = 0; u < 4; ++u)
    CHECK(t.summary.mean_net_energy_j[u] == doctest::Approx(m.e_total_j[u] - m.harvest_j[u]));
  CHECK(t.summary.dedr_std == 0.0);
  CHECK(t.summary.max_bcd_iterations == m.bcd_iterations);
}

TEST_CASE("runs are deterministic and summaries recomputable") {
  const auto p = short_run(4);
  const auto a = run(11, Policy::make(PolicyKind::Latus), p, default_fleet());
  const auto b = run(11, Policy::make(PolicyKind::Latus), p, default_fleet());
  REQUIRE(a.slots.size() == b.slots.size());
  for (std::size_t n = 0; n < a.slots.size(); ++n) {
    CHECK(a.slots[n].task_delay_s == b.slots[n].task_delay_s);
    CHECK(a.slots[n].e_total_j == b.slots[n].e_total_j);
    CHECK(a.slots[n].luav_positions == b.slots[n].luav_positions);
  }
  const auto s = summarize(a.slots, 4);
  CHECK(s.mean_task_delay_s == a.summary.mean_task_delay_s);
  CHECK(s.dedr_std == a.summary.dedr_std);
  CHECK(s.queue_max_j == a.summary.queue_max_j);
}

TEST_CASE("energy accounting closes per slot") {
  const auto t = run(5, Policy::make(PolicyKind::Latus), short_run(3), default_fleet());
  for (const auto &m : t.slots) {
    double delay = 0.0;
    for (double d : m.task_delay_s) delay += d;
    CHECK(m.total_delay_s == doctest::Approx(delay).epsilon(1e-12));
    for (std::size_t u = 0; u < 4; ++u)
      CHECK(m.e_total_j[u] == doctest::Approx(m.e_comp_j[u] + m.e_relay_j[u] + m.e_flight_j[u]).epsilon(1e-12));
    CHECK_FALSE(m.bound.violated);
  }
}

TEST_CASE("delay to deviation ratio") {
  CHECK(compute_dedr({0.2, 0.2}, {0.0, 0.0})[1] == doctest::Approx(0.2 / 1e-6));
  for (double r : compute_dedr({0.3, 0.3, 0.3}, {2.0, 2.0, 2.0})) CHECK(r == doctest::Approx(0.3 / (2.0 + 1e-6)));
  const auto c = compute_dedr({1.0, 2.0, 3.0}, {0.0, 1.0, 2.0});
  CHECK(c[0] == doctest::Approx(1.0 / 1e-6));
  CHECK(c[1] == doctest::Approx(1.5 / (0.5 + 1e-6)));
  CHECK(c[2] == doctest::Approx(2.0 / (1.0 + 1e-6)));
  const auto w = compute_dedr({1.0, 2.0, 3.0}, {0.0, 1.0, 2.0}, 2);
  CHECK(w[2] == doctest::Approx(2.5 / (1.5 + 1e-6)));
  CHECK_THROWS_AS(compute_dedr({1.0}, {}), std::invalid_argument);
}

TEST_CASE("fixed trajectory ping-pongs along the diagonal") {
  const std::vector<Vec2> diag{{0, 0}, {1000, 1000}};
  const double len = std::sqrt(2.0) * 1000.0;
  CHECK(fixed_trajectory_position(diag, 25.0, 0.2, 0) == Vec2{0, 0});
  const Vec2 one = fixed_trajectory_position(diag, 25.0, 0.2, 1);
  CHECK(one.x == doctest::Approx(5.0 / std::sqrt(2.0)));
  CHECK(one.y == doctest::Approx(one.x));
  const std::size_t k = static_cast<std::size_t>(std::ceil(len / 5.0)) + 2;
  const double back = 5.0 * k - len;
  const Vec2 r = fixed_trajectory_position(diag, 25.0, 0.2, k);
  CHECK(r.x == doctest::Approx((len - back) / std::sqrt(2.0)));
  for (std::size_t n = 0; n < 800; ++n)
    CHECK(dist(fixed_trajectory_position(diag, 25.0, 0.2, n), fixed_trajectory_position(diag, 25.0, 0.2, n + 1)) <=
          5.0 + 1e-9);
}

TEST_CASE("fixed-trajectory runs follow the schedule") {
  const auto p = short_run(3);
  const auto t = run(2, Policy::make(PolicyKind::FtLatus), p, default_fleet());
  const std::vector<Vec2> diag{{0, 0}, {p.area_m, p.area_m}};
  CHECK(t.huav_start == Vec2{0, 0});
  for (std::size_t n = 0; n < t.slots.size(); ++n)
    CHECK(dist(t.slots[n].huav_position, fixed_trajectory_position(diag, 25.0, p.slot_s, n + 1)) < 1e-9);
}

TEST_CASE("step rejects a harvest vector of the wrong size") {
  SystemParams p;
  const auto fleet = default_fleet();
  const auto policy = Policy::make(PolicyKind::Latus);
  auto s = initial_state(p, fleet, policy);
  CHECK_THROWS_AS(step(s, one_task_slot({0, 0}, 0.1, 3), policy, p, luav_energy_upper_bounds(p, fleet)),
                  std::invalid_argument);
}
