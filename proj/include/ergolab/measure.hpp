#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ergolab/system.hpp"

namespace ergolab {

enum class SamplerKind { Lebesgue, DenjoyPushforward, Birkhoff, Atomic, Imported };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::Lebesgue;
  double birkhoff_x0 = 0.2;
  long birkhoff_burn_in = 0;
  std::vector<double> atoms{0.5};

  static SamplerSpec lebesgue();
  static SamplerSpec denjoy_pushforward();
  static SamplerSpec birkhoff(double x0, long burn_in = 0);
  static SamplerSpec atomic(std::vector<double> atoms);
};

std::string format_sampler(const SamplerSpec& s);
SamplerSpec parse_sampler(const std::string& text);

// Weighted sample cloud standing in for a Borel probability measure.
// Immutable after construction; regeneration from (sampler, seed, size) is
// bitwise reproducible.
struct EmpiricalMeasure {
  Space space = Space::Interval;
  Eigen::ArrayXd points;
  Eigen::ArrayXd weights;
  SamplerSpec sampler;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.size(); }
  double weight_l2() const { return (weights * weights).sum(); }
};

EmpiricalMeasure sample_measure(const SamplerSpec& sampler, const SystemSpec& system,
                                Eigen::Index size, std::uint64_t seed);

struct MassEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  Eigen::Index sample_size = 0;
};

// Interval (or circle arc) with optional open endpoints. On the circle,
// lo > hi denotes the arc through 0.
struct IntervalSet {
  double lo = 0.0;
  double hi = 0.0;
  bool closed = true;

  bool contains(Space space, double x) const;
};

MassEstimate set_mass(const EmpiricalMeasure& mu, const IntervalSet& set);
MassEstimate set_mass(const EmpiricalMeasure& mu,
                      const std::function<bool(double)>& member);

// Mass of the Bowen ball B[x,n,delta] = {y : d(f^i x, f^i y) <= delta,
// 0 <= i < n}. Closed comparison, no epsilon slack.
MassEstimate bowen_ball_mass(const EmpiricalMeasure& mu, const SystemSpec& system,
                             double center, int n, double delta);

// max over the test intervals A of |mu(A) - mu(f^{-1} A)|, the second mass
// evaluated pointwise on the cloud as {y : f(y) in A}.
double pushforward_discrepancy(const EmpiricalMeasure& mu, const SystemSpec& system,
                               const std::vector<IntervalSet>& test_intervals);

// CSV with mandatory header `point,weight`.
void write_cloud_csv(std::ostream& out, const EmpiricalMeasure& mu);
EmpiricalMeasure read_cloud_csv(std::istream& in, Space space);

namespace detail {

// masses(n-1, c) = weighted mass of B[centers[c], n, delta] for n = 1..n_max,
// all from the same cloud. Single pass over orbit steps; points dead for
// every center are no longer iterated.
Eigen::MatrixXd bowen_mass_matrix(const SystemSpec& system, const EmpiricalMeasure& mu,
                                  const std::vector<double>& centers, int n_max,
                                  double delta);

}  // namespace detail

}  // namespace ergolab
