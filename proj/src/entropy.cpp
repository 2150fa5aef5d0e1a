#include "ergolab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ergolab/parallel.hpp"

namespace ergolab {

namespace {

// Row-major so a candidate's orbit is contiguous.
using OrbitMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

OrbitMatrix grid_orbits(const SystemSpec& system, Eigen::Index grid, int steps) {
  OrbitMatrix orbits(grid, steps);
  parallel_for(grid, [&](Eigen::Index i) {
    double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    for (int s = 0; s < steps; ++s) {
      orbits(i, s) = x;
      if (s + 1 < steps) x = evaluate(system, x);
    }
  });
  return orbits;
}

// Bowen distance over the first n steps exceeds epsilon? Scanned from the
// last step down: expanding maps separate late, so the loop usually exits
// immediately.
bool separated(const OrbitMatrix& orbits, const Metric& metric, Eigen::Index i,
               Eigen::Index j, int n, double epsilon) {
  for (int s = n - 1; s >= 0; --s)
    if (distance(metric, orbits(i, s), orbits(j, s)) > epsilon) return true;
  return false;
}

Eigen::Index greedy_count(const OrbitMatrix& orbits, const SystemSpec& system,
                          int n, double epsilon) {
  const Eigen::Index grid = orbits.rows();
  const bool circle = system.space == Space::Circle;
  // kept candidates in scan (= ascending base coordinate) order
  std::vector<Eigen::Index> kept;
  std::vector<double> kept_x;

  for (Eigen::Index j = 0; j < grid; ++j) {
    const double x = orbits(j, 0);
    bool dominated = false;
    // Only kept points within base distance epsilon can dominate: the Bowen
    // distance is at least the step-0 distance. Scan newest (nearest) first.
    for (std::size_t r = kept.size(); r-- > 0;) {
      if (x - kept_x[r] > epsilon) break;
      if (!separated(orbits, system.metric, kept[r], j, n, epsilon)) {
        dominated = true;
        break;
      }
    }
    if (!dominated && circle && !kept.empty()) {
      // wrap range: kept near 0 can still dominate candidates near 1
      const double wrap_hi = x + epsilon - 1.0;
      for (std::size_t k = 0; k < kept_x.size() && kept_x[k] <= wrap_hi; ++k) {
        if (!separated(orbits, system.metric, kept[k], j, n, epsilon)) {
          dominated = true;
          break;
        }
      }
    }
    if (!dominated) {
      kept.push_back(j);
      kept_x.push_back(x);
    }
  }
  return static_cast<Eigen::Index>(kept.size());
}

void validate_grid(double epsilon, Eigen::Index grid) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("separated sets: epsilon must be > 0");
  if (grid < 2) throw std::invalid_argument("separated sets: grid too small");
  const double spacing = 1.0 / static_cast<double>(grid);
  if (spacing > epsilon / 4.0)
    throw std::invalid_argument(
        "separated sets: candidate grid coarser than epsilon/4");
}

}  // namespace

Eigen::Index separated_set_size(const SystemSpec& system, int n, double epsilon,
                                Eigen::Index candidate_grid_size) {
  if (n < 1) throw std::invalid_argument("separated_set_size: n must be >= 1");
  validate_grid(epsilon, candidate_grid_size);
  const OrbitMatrix orbits = grid_orbits(system, candidate_grid_size, n);
  return greedy_count(orbits, system, n, epsilon);
}

EntropyEstimate topological_entropy_estimate(const SystemSpec& system,
                                             const std::vector<double>& epsilon_list,
                                             int n_lo, int n_hi,
                                             Eigen::Index grid_size) {
  if (epsilon_list.empty())
    throw std::invalid_argument("entropy estimate: empty epsilon list");
  for (std::size_t i = 1; i < epsilon_list.size(); ++i)
    if (!(epsilon_list[i] < epsilon_list[i - 1]))
      throw std::invalid_argument("entropy estimate: epsilon list must descend");
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("entropy estimate: bad n range");
  for (const double eps : epsilon_list) validate_grid(eps, grid_size);

  EntropyEstimate est;
  est.epsilon_list = epsilon_list;
  est.n_lo = n_lo;
  est.n_hi = n_hi;
  est.grid_size = grid_size;

  const OrbitMatrix orbits = grid_orbits(system, grid_size, n_hi);
  const int levels = n_hi - n_lo + 1;
  const auto n_eps = static_cast<Eigen::Index>(epsilon_list.size());
  est.counts.resize(levels, n_eps);

  parallel_for(static_cast<Eigen::Index>(levels) * n_eps, [&](Eigen::Index cell) {
    const auto row = static_cast<int>(cell / n_eps);
    const auto col = cell % n_eps;
    est.counts(row, col) = static_cast<double>(
        greedy_count(orbits, system, n_lo + row,
                     epsilon_list[static_cast<std::size_t>(col)]));
  });

  est.slope_per_epsilon.resize(epsilon_list.size());
  double best = 0.0;
  for (Eigen::Index c = 0; c < n_eps; ++c) {
    double sn = 0, sy = 0, snn = 0, sny = 0;
    for (int r = 0; r < levels; ++r) {
      const double n = static_cast<double>(n_lo + r);
      const double y = std::log(est.counts(r, c));
      sn += n;
      sy += y;
      snn += n * n;
      sny += n * y;
    }
    const double k = static_cast<double>(levels);
    const double slope = (k * sny - sn * sy) / (k * snn - sn * sn);
    est.slope_per_epsilon[static_cast<std::size_t>(c)] = slope;
    best = std::max(best, slope);
  }
  est.h_top_estimate = std::max(best, 0.0);
  return est;
}

void write_entropy_csv(std::ostream& out, const EntropyEstimate& est) {
  char buf[120];
  out << "epsilon,n,count,log_count\n";
  for (Eigen::Index c = 0; c < est.counts.cols(); ++c) {
    for (Eigen::Index r = 0; r < est.counts.rows(); ++r) {
      const auto count = static_cast<long long>(est.counts(r, c));
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%lld,%.17g\n",
                    est.epsilon_list[static_cast<std::size_t>(c)],
                    est.n_lo + static_cast<int>(r), count,
                    std::log(est.counts(r, c)));
      out << buf;
    }
  }
}

std::string entropy_json(const EntropyEstimate& est) {
  nlohmann::ordered_json j;
  j["h_top_estimate"] = est.h_top_estimate;
  j["slope_per_epsilon"] = est.slope_per_epsilon;
  return j.dump(2) + "\n";
}

}  // namespace ergolab
