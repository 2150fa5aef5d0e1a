#include "ergolab/denjoy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergolab/errors.hpp"

namespace ergolab {

const DenjoyModel::Gap& DenjoyModel::gap_by_k(int k) const {
  return gaps[static_cast<std::size_t>(position_of_k[k + truncation_K])];
}

double DenjoyModel::gap_length(int k) const {
  return gap_scale * std::pow(lambda, std::abs(k));
}

DenjoyModel make_denjoy_model(double alpha, double lambda, double total_gap,
                              int truncation_K) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("denjoy: alpha must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("denjoy: lambda must lie in (0,1)");
  if (!(total_gap > 0.0 && total_gap < 1.0))
    throw std::invalid_argument("denjoy: total_gap must lie in (0,1)");
  if (truncation_K < 1)
    throw std::invalid_argument("denjoy: truncation_K must be positive");

  DenjoyModel m;
  m.alpha = alpha;
  m.lambda = lambda;
  m.total_gap = total_gap;
  m.truncation_K = truncation_K;
  // sum over all k of lambda^|k| = (1 + lambda) / (1 - lambda)
  m.gap_scale = total_gap * (1.0 - lambda) / (1.0 + lambda);
  m.tail = 2.0 * m.gap_scale * std::pow(lambda, truncation_K + 1) /
           (1.0 - lambda);

  const int K = truncation_K;
  m.gaps.reserve(static_cast<std::size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) {
    DenjoyModel::Gap g;
    g.k = k;
    g.t = wrap_unit(static_cast<double>(k) * alpha);
    g.length = m.gap_length(k);
    g.left = 0.0;  // filled after sorting
    m.gaps.push_back(g);
  }
  std::sort(m.gaps.begin(), m.gaps.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });

  m.prefix_length.resize(m.gaps.size() + 1, 0.0);
  for (std::size_t i = 0; i < m.gaps.size(); ++i)
    m.prefix_length[i + 1] = m.prefix_length[i] + m.gaps[i].length;

  const double keep = 1.0 - total_gap;
  m.position_of_k.resize(static_cast<std::size_t>(2 * K + 1), -1);
  for (std::size_t i = 0; i < m.gaps.size(); ++i) {
    m.gaps[i].left = keep * m.gaps[i].t + m.prefix_length[i];
    m.position_of_k[static_cast<std::size_t>(m.gaps[i].k + K)] =
        static_cast<int>(i);
  }
  return m;
}

double denjoy_phi(const DenjoyModel& m, double t) {
  t = wrap_unit(t);
  // gaps with insertion parameter strictly below t
  auto it = std::lower_bound(
      m.gaps.begin(), m.gaps.end(), t,
      [](const DenjoyModel::Gap& g, double v) { return g.t < v; });
  const auto i = static_cast<std::size_t>(it - m.gaps.begin());
  return (1.0 - m.total_gap) * t + m.prefix_length[i];
}

namespace {

// Index of the last gap whose left endpoint is <= y, or -1.
int gap_at_or_before(const DenjoyModel& m, double y) {
  auto it = std::upper_bound(
      m.gaps.begin(), m.gaps.end(), y,
      [](double v, const DenjoyModel::Gap& g) { return v < g.left; });
  return static_cast<int>(it - m.gaps.begin()) - 1;
}

}  // namespace

bool denjoy_in_gap_interior(const DenjoyModel& m, double y) {
  const int i = gap_at_or_before(m, y);
  if (i < 0) return false;
  const auto& g = m.gaps[static_cast<std::size_t>(i)];
  return y > g.left && y < g.left + g.length;
}

double denjoy_phi_inverse(const DenjoyModel& m, double y) {
  y = wrap_unit(y);
  const int i = gap_at_or_before(m, y);
  double removed = 0.0;
  if (i >= 0) {
    const auto& g = m.gaps[static_cast<std::size_t>(i)];
    if (y <= g.left + g.length) return g.t;  // on or inside gap i
    removed = m.prefix_length[static_cast<std::size_t>(i) + 1];
  }
  double t = (y - removed) / (1.0 - m.total_gap);
  // The recovered parameter must lie strictly between the neighbouring
  // jumps; rounding in the prefix sums can push it one ulp across.
  if (i >= 0 && t <= m.gaps[static_cast<std::size_t>(i)].t)
    t = std::nextafter(m.gaps[static_cast<std::size_t>(i)].t, 2.0);
  if (i + 1 < static_cast<int>(m.gaps.size()) &&
      t >= m.gaps[static_cast<std::size_t>(i) + 1].t)
    t = std::nextafter(m.gaps[static_cast<std::size_t>(i) + 1].t, -1.0);
  // The truncated Phi reaches only 1 - tail; inputs in the leftover sliver
  // (width = tail) are glued to the top of the parameter circle.
  if (t >= 1.0) t = std::nextafter(1.0, 0.0);
  if (t < 0.0) t = 0.0;
  if (std::abs(denjoy_phi(m, t) - y) > 1e-9)
    throw NumericFailure("denjoy: inversion residual above 1e-9", y);
  return t;
}

double denjoy_evaluate(const DenjoyModel& m, double y) {
  y = wrap_unit(y);
  const int i = gap_at_or_before(m, y);
  if (i >= 0) {
    const auto& g = m.gaps[static_cast<std::size_t>(i)];
    if (y <= g.left + g.length) {
      // Affine branch: gap k onto gap k+1. For k = K the image gap is not
      // materialized; its nominal placement uses the same formulas.
      const int k_next = g.k + 1;
      const double len_next = m.gap_length(k_next);
      double left_next;
      if (k_next <= m.truncation_K) {
        left_next = m.gap_by_k(k_next).left;
      } else {
        left_next = denjoy_phi(m, wrap_unit(static_cast<double>(k_next) * m.alpha));
      }
      return wrap_unit(left_next + (y - g.left) * (len_next / g.length));
    }
  }
  const double t = denjoy_phi_inverse(m, y);
  return denjoy_phi(m, wrap_unit(t + m.alpha));
}

}  // namespace ergolab
