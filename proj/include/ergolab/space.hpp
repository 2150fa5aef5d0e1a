#pragma once

#include <algorithm>
#include <cmath>

namespace ergolab {

// Phase spaces: the unit interval [0,1] and the circle R/Z with
// representatives in [0,1).
enum class Space { Interval, Circle };

enum class MetricKind { IntervalAbsolute, CircleArc };

struct Metric {
  MetricKind kind = MetricKind::IntervalAbsolute;
};

// Representative of x in [0,1). floor() can leave exactly 1.0 for
// x just below an integer, hence the final branch.
inline double wrap_unit(double x) {
  double y = x - std::floor(x);
  return y < 1.0 ? y : 0.0;
}

inline double canonicalize(Space space, double x) {
  return space == Space::Circle ? wrap_unit(x) : x;
}

inline bool space_contains(Space space, double x) {
  return space == Space::Circle ? (x >= 0.0 && x < 1.0)
                                : (x >= 0.0 && x <= 1.0);
}

inline double distance(const Metric& metric, double x, double y) {
  const double d = std::abs(x - y);
  if (metric.kind == MetricKind::CircleArc) return std::min(d, 1.0 - d);
  return d;
}

inline Metric metric_for(Space space) {
  return Metric{space == Space::Circle ? MetricKind::CircleArc
                                       : MetricKind::IntervalAbsolute};
}

inline const char* space_name(Space s) {
  return s == Space::Circle ? "circle" : "interval";
}

inline const char* metric_name(MetricKind k) {
  return k == MetricKind::CircleArc ? "circle-arc" : "interval-absolute";
}

}  // namespace ergolab
