#include "ergolab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ergolab {

StableClassEstimate stable_class_mass(const SystemSpec& system,
                                      const EmpiricalMeasure& mu, double p,
                                      int horizon, double tol) {
  if (horizon < 10)
    throw std::invalid_argument("stable_class_mass: horizon must be >= 10");
  if (!(tol > 0.0))
    throw std::invalid_argument("stable_class_mass: tol must be > 0");
  if (!space_contains(system.space, p))
    throw std::invalid_argument("stable_class_mass: anchor outside space");

  const int window = std::max(horizon / 10, 1);
  const int window_start = horizon - window;
  const Eigen::Index n_points = mu.size();

  std::vector<double> cloud(mu.points.data(), mu.points.data() + n_points);
  std::vector<double> max_dist(static_cast<std::size_t>(n_points), 0.0);
  double anchor = p;

  for (int n = 1; n <= horizon; ++n) {
    anchor = statistical_step(system, anchor);
    const bool in_window = n >= window_start;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      cloud[j] = statistical_step(system, cloud[j]);
      if (in_window)
        max_dist[j] = std::max(max_dist[j], distance(system.metric, cloud[j], anchor));
    }
  }

  StableClassEstimate est;
  est.anchor = p;
  est.horizon = horizon;
  est.tol = tol;
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index j = 0; j < n_points; ++j) {
    if (max_dist[static_cast<std::size_t>(j)] < tol) {
      est.member_indices.push_back(j);
      const double t = mu.weights[j] - comp;
      const double next = sum + t;
      comp = (next - sum) - t;
      sum = next;
    }
  }
  est.mass.value = std::min(std::max(sum, 0.0), 1.0);
  est.mass.sample_size = n_points;
  est.mass.standard_error = std::sqrt(
      std::max(est.mass.value * (1.0 - est.mass.value), 0.0) * mu.weight_l2());
  return est;
}

double recurrence_fraction(const SystemSpec& system, const EmpiricalMeasure& mu,
                           int horizon, double tol) {
  if (horizon < 10)
    throw std::invalid_argument("recurrence_fraction: horizon must be >= 10");
  if (!(tol > 0.0))
    throw std::invalid_argument("recurrence_fraction: tol must be > 0");

  const Eigen::Index n_points = mu.size();
  std::vector<double> cloud(mu.points.data(), mu.points.data() + n_points);
  std::vector<double> min_return(static_cast<std::size_t>(n_points),
                                 std::numeric_limits<double>::infinity());
  const int from = horizon / 2;

  for (int n = 1; n <= horizon; ++n) {
    const bool in_window = n >= from;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      cloud[j] = statistical_step(system, cloud[j]);
      if (in_window)
        min_return[j] =
            std::min(min_return[j], distance(system.metric, cloud[j], mu.points[static_cast<Eigen::Index>(j)]));
    }
  }

  double sum = 0.0, comp = 0.0;
  for (Eigen::Index j = 0; j < n_points; ++j) {
    if (min_return[static_cast<std::size_t>(j)] < tol) {
      const double t = mu.weights[j] - comp;
      const double next = sum + t;
      comp = (next - sum) - t;
      sum = next;
    }
  }
  return std::min(std::max(sum, 0.0), 1.0);
}

double lyapunov_violation_density(const SystemSpec& system,
                                  const std::vector<double>& set_samples,
                                  double epsilon, double radius, int horizon) {
  if (set_samples.size() < 2)
    throw std::invalid_argument("lyapunov_violation_density: need >= 2 samples");
  if (!(radius > 0.0) || !(epsilon > 0.0))
    throw std::invalid_argument("lyapunov_violation_density: radius and epsilon must be > 0");
  if (horizon < 0)
    throw std::invalid_argument("lyapunov_violation_density: horizon must be >= 0");

  const auto m = static_cast<Eigen::Index>(set_samples.size());
  Eigen::MatrixXd orbits(horizon + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double x = set_samples[static_cast<std::size_t>(i)];
    if (!space_contains(system.space, x))
      throw std::invalid_argument("lyapunov_violation_density: sample outside space");
    orbits(0, i) = x;
    for (int n = 1; n <= horizon; ++n) {
      x = statistical_step(system, x);
      orbits(n, i) = x;
    }
  }

  std::vector<char> violated(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (violated[static_cast<std::size_t>(i)] && violated[static_cast<std::size_t>(j)])
        continue;
      const double d0 = distance(system.metric, orbits(0, i), orbits(0, j));
      if (!(d0 < radius) || d0 == 0.0) continue;
      for (int n = 0; n <= horizon; ++n) {
        if (distance(system.metric, orbits(n, i), orbits(n, j)) > epsilon) {
          violated[static_cast<std::size_t>(i)] = 1;
          violated[static_cast<std::size_t>(j)] = 1;
          break;
        }
      }
    }
  }

  std::size_t count = 0;
  for (const char v : violated) count += static_cast<std::size_t>(v);
  return static_cast<double>(count) / static_cast<double>(m);
}

ScrambledStats scrambled_pair_stats(const SystemSpec& system, double x, double y,
                                    int horizon, int burn_in) {
  if (burn_in < 0 || burn_in >= horizon)
    throw std::invalid_argument("scrambled_pair_stats: need 0 <= burn_in < horizon");
  ScrambledStats s;
  s.x = x;
  s.y = y;
  s.horizon = horizon;
  s.burn_in = burn_in;
  s.liminf_est = std::numeric_limits<double>::infinity();
  s.limsup_est = 0.0;
  double fx = x, fy = y;
  for (int n = 0; n <= horizon; ++n) {
    if (n > 0) {
      fx = statistical_step(system, fx);
      fy = statistical_step(system, fy);
    }
    if (n < burn_in) continue;
    const double d = distance(system.metric, fx, fy);
    s.liminf_est = std::min(s.liminf_est, d);
    s.limsup_est = std::max(s.limsup_est, d);
  }
  return s;
}

std::vector<double> greedy_scrambled_set(const SystemSpec& system,
                                         const std::vector<double>& candidates,
                                         double delta, int horizon, int burn_in,
                                         double tol_liminf) {
  if (delta < 0.0)
    throw std::invalid_argument("greedy_scrambled_set: delta must be >= 0");
  if (burn_in < 0 || burn_in >= horizon)
    throw std::invalid_argument("greedy_scrambled_set: need 0 <= burn_in < horizon");
  if (candidates.empty()) return {};

  const auto m = static_cast<Eigen::Index>(candidates.size());
  Eigen::MatrixXd orbits(horizon + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double x = candidates[static_cast<std::size_t>(i)];
    orbits(0, i) = x;
    for (int n = 1; n <= horizon; ++n) {
      x = statistical_step(system, x);
      orbits(n, i) = x;
    }
  }

  auto pair_ok = [&](Eigen::Index i, Eigen::Index j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int n = burn_in; n <= horizon; ++n) {
      const double d = distance(system.metric, orbits(n, i), orbits(n, j));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      if (lo < tol_liminf && hi > delta) return true;  // both already witnessed
    }
    return lo < tol_liminf && hi > delta;
  };

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < m; ++i) {
    bool ok = true;
    for (const Eigen::Index k : kept) {
      if (!pair_ok(k, i)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(i);
  }

  std::vector<double> out;
  out.reserve(kept.size());
  for (const Eigen::Index i : kept) out.push_back(candidates[static_cast<std::size_t>(i)]);
  return out;
}

// ---- wandering intervals ---------------------------------------------------

namespace {

struct Seg {
  double lo, hi;
};

void add_seg(std::vector<Seg>& out, double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  out.push_back({lo, hi});
}

std::vector<Seg> merge_segs(std::vector<Seg> segs) {
  if (segs.empty()) return segs;
  std::sort(segs.begin(), segs.end(),
            [](const Seg& a, const Seg& b) { return a.lo < b.lo; });
  std::vector<Seg> out;
  out.push_back(segs.front());
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, segs[i].hi);
    } else {
      out.push_back(segs[i]);
    }
  }
  // outer hull fallback keeps the approximation an over-estimate
  if (out.size() > 256) return {{out.front().lo, out.back().hi}};
  return out;
}

// Monotone branch of an interval map: on [lo, hi] the map is monotone, so
// the image of any subsegment is spanned by its endpoint values.
struct Branch {
  double lo, hi;
};

std::vector<Branch> branches_of(const SystemSpec& s) {
  switch (s.family) {
    case Family::Tent:
    case Family::Logistic:
      return {{0.0, 0.5}, {0.5, 1.0}};
    case Family::Identity:
      return {{0.0, 1.0}};
    case Family::PiecewiseLinear: {
      std::vector<Branch> b;
      for (std::size_t i = 0; i + 1 < s.knots.size(); ++i)
        b.push_back({s.knots[i].first, s.knots[i + 1].first});
      return b;
    }
    default:
      throw std::logic_error("branches_of: not an interval family");
  }
}

std::vector<Seg> step_segments(const SystemSpec& s, const std::vector<Seg>& segs) {
  std::vector<Seg> out;
  if (s.family == Family::Doubling) {
    for (const Seg& g : segs) {
      if (g.hi - g.lo >= 0.5) {
        add_seg(out, 0.0, 1.0);
        continue;
      }
      const double lo = wrap_unit(2.0 * g.lo);
      const double len = 2.0 * (g.hi - g.lo);
      if (lo + len <= 1.0) {
        add_seg(out, lo, lo + len);
      } else {
        add_seg(out, lo, 1.0);
        add_seg(out, 0.0, lo + len - 1.0);
      }
    }
    return merge_segs(std::move(out));
  }
  const auto branches = branches_of(s);
  for (const Seg& g : segs) {
    for (const Branch& b : branches) {
      const double lo = std::max(g.lo, b.lo);
      const double hi = std::min(g.hi, b.hi);
      if (lo > hi) continue;
      add_seg(out, evaluate(s, lo), evaluate(s, hi));
    }
  }
  return merge_segs(std::move(out));
}

bool segs_intersect(const std::vector<Seg>& a, const std::vector<Seg>& b,
                    bool circle) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].lo <= b[j].hi && b[j].lo <= a[i].hi) return true;
    if (a[i].hi < b[j].hi) ++i;
    else ++j;
  }
  if (circle) {
    // 1 and 0 are the same circle point
    const bool a_top = a.back().hi >= 1.0, a_bot = a.front().lo <= 0.0;
    const bool b_top = b.back().hi >= 1.0, b_bot = b.front().lo <= 0.0;
    if ((a_top && b_bot) || (b_top && a_bot)) return true;
  }
  return false;
}

std::vector<Seg> arc_to_segs(double start, double end) {
  // counter-clockwise arc on the circle
  if (start <= end) return {{start, end}};
  return {{0.0, end}, {start, 1.0}};
}

// Both endpoint orbits settle onto a periodic orbit of period <= 64 within
// 1e-9: the interval sits in the basin of an attracting periodic orbit.
bool endpoint_converges_to_periodic(const SystemSpec& s, double x, int horizon) {
  const int settle = 512 + 4 * horizon;
  for (int i = 0; i < settle; ++i) x = evaluate(s, x);
  constexpr int kWindow = 160;
  double vals[kWindow];
  for (int i = 0; i < kWindow; ++i) {
    vals[i] = x;
    x = evaluate(s, x);
  }
  for (int p = 1; p <= 64; ++p) {
    bool periodic = true;
    for (int i = 0; i + p < kWindow; ++i) {
      if (distance(s.metric, vals[i], vals[i + p]) >= 1e-9) {
        periodic = false;
        break;
      }
    }
    if (periodic) return true;
  }
  return false;
}

}  // namespace

const char* wandering_name(WanderingKind k) {
  switch (k) {
    case WanderingKind::Wandering: return "wandering";
    case WanderingKind::NotWandering: return "not-wandering";
    case WanderingKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

WanderingVerdict wandering_interval_verdict(const SystemSpec& system, double a,
                                            double b, int horizon) {
  if (!(a < b))
    throw std::invalid_argument("wandering_interval_verdict: degenerate interval");
  if (!space_contains(system.space, a) || !space_contains(system.space, b))
    throw std::invalid_argument("wandering_interval_verdict: interval outside space");
  if (horizon < 2)
    throw std::invalid_argument("wandering_interval_verdict: horizon must be >= 2");

  WanderingVerdict v;
  v.a = a;
  v.b = b;
  v.horizon = horizon;

  const bool circle = system.space == Space::Circle;
  const bool homeo =
      is_circle_homeomorphism(system) ||
      (system.family == Family::Identity && system.space == Space::Interval);

  std::vector<std::vector<Seg>> images;
  images.reserve(static_cast<std::size_t>(horizon));

  if (homeo && circle) {
    double lo = a, hi = b;
    for (int n = 0; n < horizon; ++n) {
      images.push_back(arc_to_segs(lo, hi));
      lo = evaluate(system, lo);
      hi = evaluate(system, hi);
    }
  } else {
    std::vector<Seg> cur = {{a, b}};
    for (int n = 0; n < horizon; ++n) {
      images.push_back(cur);
      cur = step_segments(system, cur);
    }
  }

  for (std::size_t m = 1; m < images.size() && !v.first_collision; ++m)
    for (std::size_t n = 0; n < m; ++n)
      if (segs_intersect(images[n], images[m], circle)) {
        v.first_collision = {static_cast<int>(n), static_cast<int>(m)};
        break;
      }

  if (v.first_collision) {
    v.verdict = WanderingKind::NotWandering;
    return v;
  }
  const bool basin = endpoint_converges_to_periodic(system, a, horizon) &&
                     endpoint_converges_to_periodic(system, b, horizon);
  v.verdict = basin ? WanderingKind::Inconclusive : WanderingKind::Wandering;
  return v;
}

std::vector<LimitClass> limit_class_census(const SystemSpec& system,
                                           const std::vector<double>& anchors,
                                           int horizon, double cluster_tol) {
  if (anchors.empty()) return {};
  if (!(cluster_tol > 0.0))
    throw std::invalid_argument("limit_class_census: cluster_tol must be > 0");

  std::vector<double> ends;
  ends.reserve(anchors.size());
  for (double x : anchors) {
    for (int n = 0; n < horizon; ++n) x = statistical_step(system, x);
    ends.push_back(x);
  }
  std::sort(ends.begin(), ends.end());

  std::vector<LimitClass> classes;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= ends.size(); ++i) {
    if (i == ends.size() || ends[i] - ends[i - 1] > cluster_tol) {
      LimitClass c;
      c.count = static_cast<Eigen::Index>(i - start);
      double mean = 0.0;
      for (std::size_t j = start; j < i; ++j) mean += ends[j];
      c.representative = mean / static_cast<double>(c.count);
      classes.push_back(c);
      start = i;
    }
  }
  // wrap-around merge on the circle
  if (system.space == Space::Circle && classes.size() > 1) {
    const double wrap_gap = ends.front() + 1.0 - ends.back();
    if (wrap_gap <= cluster_tol) {
      LimitClass& first = classes.front();
      LimitClass& last = classes.back();
      const double total = static_cast<double>(first.count + last.count);
      double rep = (first.representative * static_cast<double>(first.count) +
                    (last.representative - 1.0) * static_cast<double>(last.count)) /
                   total;
      first.representative = wrap_unit(rep);
      first.count += last.count;
      classes.pop_back();
    }
  }
  std::sort(classes.begin(), classes.end(), [](const LimitClass& x, const LimitClass& y) {
    return x.representative < y.representative;
  });
  return classes;
}

void write_scrambled_csv(std::ostream& out, const std::vector<ScrambledStats>& stats) {
  char buf[160];
  out << "x,y,liminf,limsup,horizon\n";
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", s.x, s.y,
                  s.liminf_est, s.limsup_est, s.horizon);
    out << buf;
  }
}

std::string wandering_json(const WanderingVerdict& v) {
  nlohmann::ordered_json j;
  j["interval"] = {v.a, v.b};
  j["verdict"] = wandering_name(v.verdict);
  if (v.first_collision) {
    j["first_collision"] = {v.first_collision->first, v.first_collision->second};
  } else {
    j["first_collision"] = nullptr;
  }
  j["horizon"] = v.horizon;
  return j.dump(2) + "\n";
}

}  // namespace ergolab
