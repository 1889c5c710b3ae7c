#include <random>
#include <vector>

#include "doctest.h"
#include "latus/lyapunov.hpp"

using namespace latus;

TEST_CASE("queue update") {
  CHECK(update_queue(2.0, 5.0, 0.5, 4.0) == doctest::Approx(2.5));
  CHECK(update_queue(3.0, 4.5, 0.5, 4.0) == doctest::Approx(3.0));
  CHECK(update_queue(0.0, 0.0, 0.5, 4.0) == 0.0);
  CHECK(update_queue(1.0, 2.0, 0.0, 4.0) == 0.0);
}

TEST_CASE("queue update is monotone in backlog and usage") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = d(rng);
    const double e = d(rng);
    const double h = d(rng) * 0.05;
    const double dq = d(rng);
    CHECK(update_queue(q + dq, e, h, 4.0) >= update_queue(q, e, h, 4.0));
    CHECK(update_queue(q, e + dq, h, 4.0) >= update_queue(q, e, h, 4.0));
    CHECK(update_queue(q, e, h + dq, 4.0) <= update_queue(q, e, h, 4.0));
  }
}

TEST_CASE("advance_queues applies the recursion per L-UAV") {
  const auto s0 = QueueState::zeros(2);
  const std::vector<double> e{10.0, 1.0};
  const std::vector<double> h{0.5, 0.5};
  const auto s1 = advance_queues(s0, e, h, 4.0);
  CHECK(s1.slot_index == 1);
  CHECK(s1.q[0] == doctest::Approx(5.5));
  CHECK(s1.q[1] == 0.0);
  const std::vector<double> short_e{1.0};
  CHECK_THROWS_AS(advance_queues(s0, short_e, h, 4.0), std::invalid_argument);
}

TEST_CASE("per-slot objective") {
  const std::vector<double> q{1.0, 2.0};
  const std::vector<double> e{3.0, 4.0};
  CHECK(slot_objective(0.0, 5.0, q, e) == doctest::Approx(11.0));
  const std::vector<double> zero{0.0, 0.0};
  CHECK(slot_objective(7.0, 0.3, zero, e) == doctest::Approx(2.1));
}

TEST_CASE("drift bound hand example") {
  const std::vector<double> q{1.0};
  const std::vector<double> e{2.0};
  const std::vector<double> h{0.0};
  const std::vector<double> emax{2.0};
  BoundInputs in{10.0, 0.5, 4.0, 0.5, q, e, h, emax};
  const auto r = check_prop1(in);
  CHECK(r.lhs == doctest::Approx(-0.5 + 5.0));
  CHECK(r.b_const == doctest::Approx(0.5 * (4.0 + 4.5 * 4.5)));
  CHECK(r.rhs == doctest::Approx(r.b_const + 5.0 - 2.0));
  CHECK_FALSE(r.violated);
  CHECK(r.energy_within_bound);

  const std::vector<double> z{0.0};
  BoundInputs idle{3.0, 0.2, 4.0, 0.5, z, z, z, emax};
  const auto r0 = check_prop1(idle);
  CHECK(r0.lhs == doctest::Approx(0.6));
  CHECK(r0.lhs <= r0.rhs);
}

TEST_CASE("drift bound holds on random slots") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double quota = 4.0;
  const double em = 0.5;
  int violations = 0;
  for (int s = 0; s < 10000; ++s) {
    const std::size_t n = 1 + s % 6;
    std::vector<double> q(n), e(n), h(n), emax(n);
    for (std::size_t u = 0; u < n; ++u) {
      emax[u] = 1.0 + 500.0 * unit(rng);
      e[u] = unit(rng) < 0.1 ? 0.0 : emax[u] * unit(rng);
      h[u] = em * unit(rng);
      q[u] = unit(rng) < 0.2 ? 0.0 : 1000.0 * unit(rng);
    }
    BoundInputs in{1000.0 * unit(rng), unit(rng), quota, em, q, e, h, emax};
    if (check_prop1(in).violated) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("energy upper bounds are positive and exceed flight at top speed") {
  SystemParams p;
  const auto fleet = default_fleet();
  const auto b = luav_energy_upper_bounds(p, fleet);
  REQUIRE(b.size() == 4);
  for (double x : b) CHECK(x > 0.5 * 4.0 * p.slot_s * 25.0 * 25.0);
}
