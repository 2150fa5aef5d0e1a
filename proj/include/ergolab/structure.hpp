#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/measure.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

// Empirical stand-in for the stable set of p: a cloud point belongs when its
// orbit stays within tol of the orbit of p over the trailing tenth of the
// horizon.
struct StableClassEstimate {
  double anchor = 0.0;
  MassEstimate mass;
  int horizon = 0;
  double tol = 0.0;
  std::vector<Eigen::Index> member_indices;
};

StableClassEstimate stable_class_mass(const SystemSpec& system,
                                      const EmpiricalMeasure& mu, double p,
                                      int horizon, double tol);

// Weighted fraction of cloud points returning within tol of themselves at
// some step in [horizon/2, horizon].
double recurrence_fraction(const SystemSpec& system, const EmpiricalMeasure& mu,
                           int horizon, double tol);

// Fraction of sample points x witnessed unstable: some other sample within
// `radius` of x whose orbit leaves the epsilon-tube of the orbit of x within
// the horizon.
double lyapunov_violation_density(const SystemSpec& system,
                                  const std::vector<double>& set_samples,
                                  double epsilon, double radius, int horizon);

// Finite-horizon liminf/limsup of the orbit distance of a pair.
struct ScrambledStats {
  double x = 0.0;
  double y = 0.0;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  int horizon = 0;
  int burn_in = 0;
};

ScrambledStats scrambled_pair_stats(const SystemSpec& system, double x, double y,
                                    int horizon, int burn_in = 0);

// Greedy maximal subset whose pairs all have liminf below tol_liminf and
// limsup above delta. Candidate order fixes the result.
std::vector<double> greedy_scrambled_set(const SystemSpec& system,
                                         const std::vector<double>& candidates,
                                         double delta, int horizon,
                                         int burn_in = 0,
                                         double tol_liminf = 1e-2);

enum class WanderingKind { Wandering, NotWandering, Inconclusive };
const char* wandering_name(WanderingKind k);

struct WanderingVerdict {
  double a = 0.0, b = 0.0;
  WanderingKind verdict = WanderingKind::Inconclusive;
  std::optional<std::pair<int, int>> first_collision;  // (n, m), n < m
  int horizon = 0;
};

// Tracks {f^n(J)}_{0 <= n < horizon} — exactly through endpoints for the
// injective families, as unions of monotone-branch images otherwise — and
// reports wandering only when every pairwise intersection is empty and the
// endpoints do not settle onto a detected periodic orbit.
WanderingVerdict wandering_interval_verdict(const SystemSpec& system, double a,
                                            double b, int horizon);

// Anchors bucketed by their horizon-end point; clusters are maximal runs
// closer than cluster_tol. Returns (representative, count) sorted by
// representative.
struct LimitClass {
  double representative = 0.0;
  Eigen::Index count = 0;
};

std::vector<LimitClass> limit_class_census(const SystemSpec& system,
                                           const std::vector<double>& anchors,
                                           int horizon, double cluster_tol);

// CSV columns: x,y,liminf,limsup,horizon.
void write_scrambled_csv(std::ostream& out, const std::vector<ScrambledStats>& stats);
// JSON fields: interval, verdict, first_collision, horizon.
std::string wandering_json(const WanderingVerdict& v);

}  // namespace ergolab
