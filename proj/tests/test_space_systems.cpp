#include <doctest.h>

#include <cmath>
#include <set>

#include "ergolab/rng.hpp"
#include "ergolab/system.hpp"

using namespace ergolab;

TEST_CASE("metric axioms on random triples") {
  const Metric arc{MetricKind::CircleArc};
  const Metric abs{MetricKind::IntervalAbsolute};
  for (int i = 0; i < 10000; ++i) {
    const double x = rng::uniform(1, 100, 3 * i);
    const double y = rng::uniform(1, 100, 3 * i + 1);
    const double z = rng::uniform(1, 100, 3 * i + 2);
    for (const Metric& m : {arc, abs}) {
      CHECK(distance(m, x, y) == distance(m, y, x));  // symmetry, exact
      CHECK(distance(m, x, x) == 0.0);
      CHECK(distance(m, x, z) <= distance(m, x, y) + distance(m, y, z) + 1e-12);
    }
    CHECK(distance(arc, x, y) <= 0.5);
  }
}

TEST_CASE("metric examples") {
  CHECK(distance(Metric{MetricKind::CircleArc}, 0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(distance(Metric{MetricKind::IntervalAbsolute}, 0.2, 0.7) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(make_tent(), 0.5) == 1.0);
  CHECK(evaluate(make_rotation(0.0), 0.3) == 0.3);
  CHECK(evaluate(make_doubling(), 0.3) == 0.6);
  CHECK_THROWS_AS(evaluate(make_tent(), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(make_doubling(), 1.0), std::invalid_argument);
}

TEST_CASE("orbit examples") {
  const Orbit id = orbit(make_identity(), 0.2, 3);
  REQUIRE(id.points.size() == 4);
  for (const double p : id.points) CHECK(p == 0.2);

  const Orbit dbl = orbit(make_doubling(), 0.1, 3);
  CHECK(dbl.points[0] == 0.1);
  CHECK(dbl.points[1] == 0.2);
  CHECK(dbl.points[2] == 0.4);
  CHECK(dbl.points[3] == 0.8);

  const Orbit tent = orbit(make_tent(), 0.4, 2);
  CHECK(tent.points[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(tent.points[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tent.points[2] == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("orbit determinism is bitwise") {
  const SystemSpec s = make_logistic(3.7);
  const Orbit a = orbit(s, 0.33, 500);
  const Orbit b = orbit(s, 0.33, 500);
  for (std::size_t i = 0; i < a.points.size(); ++i)
    CHECK(a.points[i] == b.points[i]);
}

TEST_CASE("circle evaluations stay canonical") {
  for (const SystemSpec& s :
       {make_doubling(), make_rotation(0.7), make_north_south(), make_denjoy()}) {
    for (int i = 0; i < 10000; ++i) {
      const double x = rng::uniform(2, 200, static_cast<std::uint64_t>(i));
      const double y = evaluate(s, x);
      CHECK(y >= 0.0);
      CHECK(y < 1.0);
    }
  }
}

TEST_CASE("statistical_step is a pure function and stays in space") {
  const SystemSpec s = make_tent();
  for (int i = 0; i < 1000; ++i) {
    const double x = rng::uniform(3, 300, static_cast<std::uint64_t>(i));
    const double y1 = statistical_step(s, x);
    const double y2 = statistical_step(s, x);
    CHECK(y1 == y2);
    CHECK(std::abs(y1 - evaluate(s, x)) <= 0x1.0p-40);
    CHECK(space_contains(s.space, y1));
  }
  // homeomorphisms are stepped exactly
  const SystemSpec r = make_rotation(0.37);
  CHECK(statistical_step(r, 0.2) == evaluate(r, 0.2));
}

TEST_CASE("north-south converges monotonically to the sink") {
  const SystemSpec s = make_north_south();
  const Metric arc{MetricKind::CircleArc};
  for (int i = 0; i < 200; ++i) {
    double x = rng::uniform(4, 400, static_cast<std::uint64_t>(i));
    if (distance(arc, x, s.ns_source) < 1e-6) continue;
    double prev = distance(arc, x, s.ns_sink);
    for (int n = 0; n < 200; ++n) {
      x = evaluate(s, x);
      const double d = distance(arc, x, s.ns_sink);
      CHECK(d <= prev + 1e-15);
      prev = d;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("north-south fixed points are exact") {
  const SystemSpec s = make_north_south();
  CHECK(evaluate(s, s.ns_source) == s.ns_source);
  CHECK(evaluate(s, s.ns_sink) == s.ns_sink);
  CHECK_THROWS_AS(make_north_south(0.6, 0.25, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_north_south(0.75, 0.25, 1.5), std::invalid_argument);
}

TEST_CASE("rotation number estimates") {
  const Metric arc{MetricKind::CircleArc};
  CHECK(std::abs(rotation_number_estimate(make_rotation(0.25), 0.3, 100000) - 0.25) <
        1e-12);
  const double ns = rotation_number_estimate(make_north_south(), 0.9, 100000);
  CHECK(distance(arc, ns, 0.0) < 1e-3);
  const SystemSpec dj = make_denjoy();
  const double rho = rotation_number_estimate(dj, 0.3, 100000);
  CHECK(distance(arc, rho, dj.denjoy->alpha) < 1e-3);
  CHECK_THROWS_AS(rotation_number_estimate(make_tent(), 0.3, 100), std::invalid_argument);
  CHECK_THROWS_AS(rotation_number_estimate(make_doubling(), 0.3, 100), std::invalid_argument);
}

TEST_CASE("system text form round-trips") {
  for (const SystemSpec& s :
       {make_tent(), make_doubling(), make_logistic(3.9), make_rotation(0.123456789),
        make_denjoy(0.6180339887498949, 0.5, 0.5, 40), make_north_south(),
        make_identity(Space::Circle),
        make_piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}})}) {
    const SystemSpec back = parse_system(format_system(s));
    CHECK(back.family == s.family);
    CHECK(back.space == s.space);
    CHECK(format_system(back) == format_system(s));
  }
  CHECK(parse_system("tent").family == Family::Tent);
  CHECK_THROWS_AS(parse_system("family=tent r=4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_system("family=warp"), std::invalid_argument);
  CHECK_THROWS_AS(parse_system("family=logistic r=5"), std::invalid_argument);
}

TEST_CASE("piecewise-linear tent reproduces the tent map") {
  const SystemSpec pw = make_piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(evaluate(pw, x) == doctest::Approx(evaluate(make_tent(), x)).epsilon(1e-12));
  }
}
