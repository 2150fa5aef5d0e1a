#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ergolab/measure.hpp"
#include "ergolab/rng.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {
const double kGolden = 0.6180339887498949;
}

TEST_CASE("lebesgue sampler basics") {
  const SystemSpec s = make_tent();
  const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 4, 7);
  REQUIRE(mu.size() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(mu.weights[i] == 0.25);
    CHECK(space_contains(mu.space, mu.points[i]));
  }
  const EmpiricalMeasure big = sample_measure(SamplerSpec::lebesgue(), s, 100000, 7);
  CHECK(std::abs(big.weights.sum() - 1.0) <= 1e-12);
}

TEST_CASE("atomic sampler ignores size") {
  const EmpiricalMeasure mu =
      sample_measure(SamplerSpec::atomic({0.5}), make_tent(), 1000, 1);
  REQUIRE(mu.size() == 1);
  CHECK(mu.points[0] == 0.5);
  CHECK(mu.weights[0] == 1.0);
}

TEST_CASE("sampler regeneration is bitwise reproducible") {
  const SystemSpec s = make_denjoy();
  const EmpiricalMeasure a = sample_measure(SamplerSpec::denjoy_pushforward(), s, 5000, 99);
  const EmpiricalMeasure b = sample_measure(SamplerSpec::denjoy_pushforward(), s, 5000, 99);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a.points[i] == b.points[i]);
}

TEST_CASE("sampler and system must match") {
  CHECK_THROWS_AS(sample_measure(SamplerSpec::denjoy_pushforward(), make_tent(), 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_measure(SamplerSpec::lebesgue(), make_tent(), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("birkhoff sampler walks the orbit") {
  const SystemSpec s = make_rotation(0.37);
  const EmpiricalMeasure mu =
      sample_measure(SamplerSpec::birkhoff(0.1, 0), s, 50, 1);
  double x = 0.1;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    CHECK(mu.points[i] == x);
    x = statistical_step(s, x);
  }
}

TEST_CASE("set_mass examples") {
  const SystemSpec s = make_tent();
  const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 100000, 3);
  const MassEstimate lens = set_mass(mu, IntervalSet{0.4, 0.6, true});
  CHECK(std::abs(lens.value - 0.2) <= 3.0 * lens.standard_error);

  const EmpiricalMeasure atom = sample_measure(SamplerSpec::atomic({0.5}), s, 1, 1);
  CHECK(set_mass(atom, IntervalSet{0.0, 0.4, true}).value == 0.0);
}

TEST_CASE("denjoy pushforward puts no mass in open gaps") {
  const SystemSpec s = make_denjoy();
  const EmpiricalMeasure mu =
      sample_measure(SamplerSpec::denjoy_pushforward(), s, 100000, 5);
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    CHECK_FALSE(denjoy_in_gap_interior(*s.denjoy, mu.points[i]));
  const auto& g0 = s.denjoy->gap_by_k(0);
  const MassEstimate interior =
      set_mass(mu, IntervalSet{g0.left, g0.left + g0.length, /*closed=*/false});
  CHECK(interior.value == 0.0);
}

TEST_CASE("mass monotonicity in the set") {
  const SystemSpec s = make_tent();
  const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 20000, 11);
  for (int i = 0; i < 50; ++i) {
    const double a = rng::uniform(21, 7, static_cast<std::uint64_t>(2 * i));
    const double b = a + 0.5 * rng::uniform(21, 7, static_cast<std::uint64_t>(2 * i + 1)) *
                             (1.0 - a);
    const double inner = set_mass(mu, IntervalSet{a, (a + b) / 2.0, true}).value;
    const double outer = set_mass(mu, IntervalSet{a, b, true}).value;
    CHECK(inner <= outer);
  }
}

TEST_CASE("bowen ball mass examples against exact values") {
  // identity: the ball is the fixed metric ball
  const SystemSpec id = make_identity();
  const EmpiricalMeasure mu_id = sample_measure(SamplerSpec::lebesgue(), id, 100000, 13);
  for (const int n : {1, 5, 20}) {
    const MassEstimate e = bowen_ball_mass(mu_id, id, 0.5, n, 0.1);
    CHECK(std::abs(e.value - 0.2) <= 3.0 * e.standard_error);
  }
  // irrational rotation: isometry, Bowen ball = arc of length 2 delta
  const SystemSpec rot = make_rotation(kGolden);
  const EmpiricalMeasure mu_rot = sample_measure(SamplerSpec::lebesgue(), rot, 100000, 13);
  for (const int n : {1, 5, 20}) {
    const MassEstimate e = bowen_ball_mass(mu_rot, rot, 0.3, n, 0.05);
    CHECK(std::abs(e.value - 0.10) <= 3.0 * e.standard_error);
  }
  // tent vs the independent grid oracle
  const SystemSpec tent = make_tent();
  const EmpiricalMeasure mu_t = sample_measure(SamplerSpec::lebesgue(), tent, 100000, 13);
  for (int n = 1; n <= 10; ++n) {
    const MassEstimate e = bowen_ball_mass(mu_t, tent, 0.3, n, 0.05);
    const double oracle = oracles::grid_bowen_mass(tent, 0.3, n, 0.05, 100000);
    const double se = std::max(e.standard_error, 1e-9);
    CHECK(std::abs(e.value - oracle) <= 3.0 * se);
  }
}

TEST_CASE("bowen ball mass is monotone in n and delta, and matches the metric ball at n=1") {
  const SystemSpec s = make_tent();
  const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 30000, 17);
  const double x = 0.37;
  double prev = 1.0;
  for (int n = 1; n <= 12; ++n) {
    const double m = bowen_ball_mass(mu, s, x, n, 0.05).value;
    CHECK(m <= prev);
    prev = m;
  }
  CHECK(bowen_ball_mass(mu, s, x, 4, 0.02).value <=
        bowen_ball_mass(mu, s, x, 4, 0.05).value);
  // n=1 reduces to the metric ball, bit for bit
  const double ball = set_mass(mu, [&](double y) {
                        return distance(s.metric, y, x) <= 0.05;
                      }).value;
  CHECK(bowen_ball_mass(mu, s, x, 1, 0.05).value == ball);
}

TEST_CASE("pushforward discrepancy") {
  std::vector<IntervalSet> dyadic;
  for (int i = 0; i < 20; ++i) dyadic.push_back({i / 20.0, (i + 1) / 20.0, true});

  const SystemSpec rot = make_rotation(kGolden);
  const EmpiricalMeasure mu_rot = sample_measure(SamplerSpec::lebesgue(), rot, 100000, 19);
  const double se = std::sqrt(0.05 * 0.95 / 100000.0);
  CHECK(pushforward_discrepancy(mu_rot, rot, dyadic) <= 3.0 * se);

  const SystemSpec tent = make_tent();
  const EmpiricalMeasure mu_t = sample_measure(SamplerSpec::lebesgue(), tent, 100000, 19);
  CHECK(pushforward_discrepancy(mu_t, tent, dyadic) <= 3.0 * se);
  // the exact preimage length of each dyadic cell equals its length
  for (const auto& cell : dyadic)
    CHECK(oracles::tent_preimage_length(cell.lo, cell.hi) ==
          doctest::Approx(cell.hi - cell.lo).epsilon(1e-15));

  // a non-invariant atom is detected with discrepancy 1
  const EmpiricalMeasure atom = sample_measure(SamplerSpec::atomic({0.3}), tent, 1, 1);
  const double d = pushforward_discrepancy(atom, tent, {{0.25, 0.35, true}});
  CHECK(d == 1.0);
}

TEST_CASE("sampler descriptors round-trip through text") {
  for (const SamplerSpec& s :
       {SamplerSpec::lebesgue(), SamplerSpec::denjoy_pushforward(),
        SamplerSpec::birkhoff(0.3, 5), SamplerSpec::atomic({0.5, 0.25})}) {
    const SamplerSpec back = parse_sampler(format_sampler(s));
    CHECK(back.kind == s.kind);
    CHECK(format_sampler(back) == format_sampler(s));
  }
  CHECK_THROWS_AS(parse_sampler("uniformish"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sampler("birkhoff speed=3"), std::invalid_argument);
}

TEST_CASE("cloud csv round-trips") {
  const SystemSpec s = make_tent();
  const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 500, 23);
  std::ostringstream out;
  write_cloud_csv(out, mu);
  std::istringstream in(out.str());
  const EmpiricalMeasure back = read_cloud_csv(in, s.space);
  REQUIRE(back.size() == mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    CHECK(back.points[i] == mu.points[i]);
    CHECK(back.weights[i] == mu.weights[i]);
  }
  std::istringstream no_header("0.5,1.0\n");
  CHECK_THROWS_AS(read_cloud_csv(no_header, s.space), std::invalid_argument);
}
