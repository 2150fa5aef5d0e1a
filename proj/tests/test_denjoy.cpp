#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ergolab/denjoy.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/system.hpp"

using namespace ergolab;

namespace {
const double kGolden = 0.6180339887498949;
}

TEST_CASE("model validation and derived quantities") {
  CHECK_THROWS_AS(make_denjoy_model(1.2, 0.5, 0.5, 40), std::invalid_argument);
  CHECK_THROWS_AS(make_denjoy_model(kGolden, 1.0, 0.5, 40), std::invalid_argument);
  CHECK_THROWS_AS(make_denjoy_model(kGolden, 0.5, 1.0, 40), std::invalid_argument);
  CHECK_THROWS_AS(make_denjoy_model(kGolden, 0.5, 0.5, 0), std::invalid_argument);

  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  // c = G (1-l)/(1+l) and the biggest gap is l_0 = c
  CHECK(m.gap_scale == doctest::Approx(0.5 / 3.0).epsilon(1e-14));
  CHECK(m.biggest_gap_length() == m.gap_scale);
  // materialized gaps + tail account for the whole gap budget
  double sum = 0.0;
  for (const auto& g : m.gaps) sum += g.length;
  CHECK(sum + m.tail == doctest::Approx(m.total_gap).epsilon(1e-12));
  // gaps are pairwise disjoint
  for (std::size_t i = 0; i + 1 < m.gaps.size(); ++i)
    CHECK(m.gaps[i].left + m.gaps[i].length <= m.gaps[i + 1].left + 1e-15);
}

TEST_CASE("phi normalization conventions") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  CHECK(denjoy_phi(m, 0.0) == 0.0);
  // phi(1^-) - phi(0) approaches 1 as K grows: deficit equals the tail
  for (const int K : {5, 10, 20, 40}) {
    const DenjoyModel mk = make_denjoy_model(kGolden, 0.5, 0.5, K);
    const double top = denjoy_phi(mk, std::nextafter(1.0, 0.0));
    CHECK(1.0 - top == doctest::Approx(mk.tail).epsilon(1e-6));
    CHECK(mk.tail == doctest::Approx(2.0 * mk.gap_scale * std::pow(0.5, K + 1) /
                                     (1.0 - 0.5))
                         .epsilon(1e-12));
  }
}

TEST_CASE("phi is strictly increasing on a sorted batch") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  std::vector<double> ts;
  for (int i = 0; i < 1000; ++i) ts.push_back(rng::uniform(11, 42, static_cast<std::uint64_t>(i)));
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    CHECK(denjoy_phi(m, ts[i]) < denjoy_phi(m, ts[i + 1]));
}

TEST_CASE("phi image avoids every open gap") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  for (int i = 0; i < 20000; ++i) {
    const double t = rng::uniform(12, 43, static_cast<std::uint64_t>(i));
    CHECK_FALSE(denjoy_in_gap_interior(m, denjoy_phi(m, t)));
  }
}

TEST_CASE("gap endpoints map to the next gap's endpoints") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  const auto& g0 = m.gap_by_k(0);
  const auto& g1 = m.gap_by_k(1);
  CHECK(denjoy_evaluate(m, g0.left) == doctest::Approx(g1.left).epsilon(1e-14));
  CHECK(denjoy_evaluate(m, g0.left + g0.length) ==
        doctest::Approx(g1.left + g1.length).epsilon(1e-14));
  // interior maps affinely
  const double mid = g0.left + 0.5 * g0.length;
  CHECK(denjoy_evaluate(m, mid) == doctest::Approx(g1.left + 0.5 * g1.length).epsilon(1e-13));
}

TEST_CASE("evaluate is conjugate to the rotation through phi") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  for (int i = 0; i < 100; ++i) {
    const double t = rng::uniform(13, 44, static_cast<std::uint64_t>(i));
    const double lhs = denjoy_evaluate(m, denjoy_phi(m, t));
    const double rhs = denjoy_phi(m, wrap_unit(t + m.alpha));
    CHECK(std::abs(lhs - rhs) <= 10.0 * m.tail + 1e-15);
  }
}

TEST_CASE("phi inverse is exact off the gaps") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  for (int i = 0; i < 5000; ++i) {
    const double t = rng::uniform(14, 45, static_cast<std::uint64_t>(i));
    const double y = denjoy_phi(m, t);
    const double back = denjoy_phi_inverse(m, y);
    CHECK(std::abs(denjoy_phi(m, back) - y) <= 1e-12);
  }
}

TEST_CASE("evaluate preserves circular order") {
  const DenjoyModel m = make_denjoy_model(kGolden, 0.5, 0.5, 40);
  std::vector<double> ys;
  for (int i = 0; i < 2000; ++i)
    ys.push_back(rng::uniform(15, 46, static_cast<std::uint64_t>(i)));
  std::sort(ys.begin(), ys.end());
  std::vector<double> fy;
  for (const double y : ys) fy.push_back(denjoy_evaluate(m, y));
  // images of an increasing sweep wrap the circle exactly once
  int descents = 0;
  for (std::size_t i = 0; i + 1 < fy.size(); ++i)
    if (fy[i + 1] < fy[i]) ++descents;
  CHECK(descents <= 1);
}
