#include <doctest.h>

#include <cmath>
#include <limits>

#include "lagns/core.hpp"

using namespace lagns;

TEST_CASE("make_grid extents and spacing") {
  const MassGrid c = make_grid({SetupKind::Cauchy}, 10.0, 100);
  CHECK(c.x_left() == -10.0);
  CHECK(c.x_right() == 10.0);
  CHECK(c.dm() == doctest::Approx(0.2).epsilon(1e-15));

  const MassGrid h = make_grid({SetupKind::HalfLineInsulated}, 20.0, 400);
  CHECK(h.x_left() == 0.0);
  CHECK(h.x_right() == 20.0);
  CHECK(h.dm() == doctest::Approx(0.05).epsilon(1e-15));

  CHECK(make_grid({SetupKind::HalfLineIsothermal}, 5.0, 10).x_left() == 0.0);
}

TEST_CASE("make_grid rejects bad configuration") {
  CHECK_THROWS_AS(make_grid({SetupKind::Cauchy}, 10.0, 3), ConfigError);
  CHECK_THROWS_AS(make_grid({SetupKind::Cauchy}, 0.0, 16), ConfigError);
  CHECK_THROWS_AS(make_grid({SetupKind::Cauchy}, -1.0, 16), ConfigError);
  CHECK_THROWS_AS(make_grid({SetupKind::Cauchy}, 10.0, -4), ConfigError);
}

TEST_CASE("uniform node spacing") {
  // Power-of-two spacing so every node is exact.
  const MassGrid g = make_grid({SetupKind::Cauchy}, 8.0, 64);
  for (std::size_t i = 0; i + 1 < g.n_nodes(); ++i) CHECK(g.node(i + 1) - g.node(i) == g.dm());
  CHECK(g.cell_center(0) == g.x_left() + 0.5 * g.dm());
  CHECK(g.node(g.n_cells()) == g.x_right());
}

TEST_CASE("steady_state is (1, 0, 1) and valid") {
  const MassGrid g = make_grid({SetupKind::Cauchy}, 1.0, 8);
  const FluidState s = steady_state(g);
  CHECK(s.t == 0.0);
  CHECK(s.matches(g));
  for (double v : s.v) CHECK(v == 1.0);
  for (double th : s.theta) CHECK(th == 1.0);
  for (double u : s.u) CHECK(u == 0.0);
  for (double floor : {1e-10, 0.5, 0.999}) CHECK_FALSE(validate_state(s, floor).has_value());
}

TEST_CASE("validate_state names the first offending entry") {
  const MassGrid g = make_grid({SetupKind::Cauchy}, 1.0, 8);
  FluidState s = steady_state(g);
  s.theta[5] = -0.1;
  auto bad = validate_state(s);
  REQUIRE(bad.has_value());
  CHECK(bad->index == 5);
  CHECK(bad->field == StateViolation::Field::Theta);
  CHECK(bad->reason == StateViolation::Reason::BelowFloor);

  s = steady_state(g);
  s.v[0] = std::numeric_limits<double>::quiet_NaN();
  bad = validate_state(s);
  REQUIRE(bad.has_value());
  CHECK(bad->index == 0);
  CHECK(bad->field == StateViolation::Field::V);
  CHECK(bad->reason == StateViolation::Reason::NonFinite);
  CHECK(bad->describe().find("non-finite") != std::string::npos);

  s = steady_state(g);
  s.u[8] = std::numeric_limits<double>::infinity();
  bad = validate_state(s);
  REQUIRE(bad.has_value());
  CHECK(bad->field == StateViolation::Field::U);
  CHECK(bad->index == 8);

  s = steady_state(g);
  s.u.pop_back();
  bad = validate_state(s);
  REQUIRE(bad.has_value());
  CHECK(bad->reason == StateViolation::Reason::Shape);
}

TEST_CASE("FluidState copies are independent") {
  const MassGrid g = make_grid({SetupKind::Cauchy}, 1.0, 8);
  const FluidState original = steady_state(g);
  FluidState copy = original;
  copy.v[3] = 7.0;
  copy.u[0] = 1.0;
  copy.t = 2.0;
  CHECK(original.v[3] == 1.0);
  CHECK(original.u[0] == 0.0);
  CHECK(original.t == 0.0);
}

TEST_CASE("gas parameters must be positive") {
  CHECK_NOTHROW(GasParams{}.validate());
  CHECK_THROWS_AS((GasParams{0.0, 1.0, 1.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GasParams{1.0, -1.0, 1.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GasParams{1.0, 1.0, 0.0, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GasParams{1.0, 1.0, 1.0, std::nan("")}.validate()), ConfigError);
}

TEST_CASE("setup names round-trip") {
  for (SetupKind k : {SetupKind::Cauchy, SetupKind::HalfLineInsulated, SetupKind::HalfLineIsothermal}) {
    CHECK(setup_from_string(to_string(k)) == k);
  }
  CHECK_FALSE(setup_from_string("periodic").has_value());
}
