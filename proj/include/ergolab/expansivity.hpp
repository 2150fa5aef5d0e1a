#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/measure.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

// y stays within delta of the orbit of x for the first n iterates.
bool bowen_ball_contains(const SystemSpec& system, double x, double y, int n,
                         double delta);

// n -> mu(B[x,n,delta]) for n = 1..n_max; the terminal mass approximates the
// mass of the dynamical ball (the intersection over n).
struct BallDecayCurve {
  double center = 0.0;
  double delta = 0.0;
  int n_max = 0;
  Eigen::ArrayXd masses;    // index n-1
  Eigen::ArrayXd std_errs;  // binomial/weighted bound per mass
  Eigen::Index sample_size = 0;

  double terminal_mass() const { return masses[masses.size() - 1]; }
};

BallDecayCurve ball_decay_curve(const SystemSpec& system, const EmpiricalMeasure& mu,
                                double center, double delta, int n_max);

struct FitWindow {
  int n_lo = 4;
  int n_hi = 12;
};

// Least-squares slope of -log mass(n) against n over the window: the
// finite-n stand-in for the local entropy at (center, delta).
struct LocalEntropyEstimate {
  double center = 0.0;
  double delta = 0.0;
  double slope = 0.0;
  double residual = 0.0;  // rms of fit residuals
  FitWindow window;
};

// Throws WindowTruncation when a mass in the window is zero.
LocalEntropyEstimate local_entropy_estimate(const BallDecayCurve& curve,
                                            FitWindow window);

enum class Verdict { Expansive, NotExpansive, Inconclusive };
const char* verdict_name(Verdict v);

struct ExpansivityOptions {
  int centers = 200;
  int n_max = 14;
  double threshold = 1e-3;   // terminal mass below this counts as "zero"
  double rate_floor = 0.05;  // nats/step a certified decay must exceed
  FitWindow fit_window{4, 12};
  std::uint64_t seed = 42;
  // Centers come from the measure itself by default; the uniform grid mode
  // exists for the half-delta cross-check.
  bool grid_centers = false;
};

struct ExpansivityReport {
  double delta = 0.0;
  std::vector<double> centers;
  std::vector<double> terminal_masses;
  std::vector<double> decay_rates;  // +inf when the ball empties before the window
  double x_delta_fraction = 0.0;    // fraction of centers with terminal mass < threshold
  double decay_rate_median = 0.0;   // median over the finite rates
  Verdict verdict = Verdict::Inconclusive;
  ExpansivityOptions options;
  Eigen::Index sample_size = 0;
  double weight_l2 = 0.0;  // sum of squared cloud weights, for standard errors
  Eigen::MatrixXd masses;  // (n_max x centers) decay curves
};

// Pure verdict rule, exposed for the scale-invariance property:
//   expansive      iff every terminal mass < threshold and the median decay
//                  rate exceeds rate_floor;
//   not-expansive  iff some center stabilizes above threshold with |rate|
//                  below rate_floor;
//   inconclusive   otherwise.
Verdict classify_expansivity(const std::vector<double>& terminal_masses,
                             const std::vector<double>& decay_rates,
                             double threshold, double rate_floor);

ExpansivityReport expansivity_report(const SystemSpec& system,
                                     const EmpiricalMeasure& mu, double delta,
                                     const ExpansivityOptions& options);

// Largest delta in the descending grid whose report is expansive.
std::optional<double> expansivity_constant_search(const SystemSpec& system,
                                                  const EmpiricalMeasure& mu,
                                                  const std::vector<double>& delta_grid,
                                                  const ExpansivityOptions& options);

// Fraction of sampled centers whose fitted slope at delta = 1/m exceeds h.
double xm_fraction(const SystemSpec& system, const EmpiricalMeasure& mu, int m,
                   double h, const ExpansivityOptions& options);

// CSV columns: center,delta,n,mass,std_err.
void write_curves_csv(std::ostream& out, const ExpansivityReport& report);
// JSON fields: delta,threshold,n_max,centers,x_delta_fraction,verdict,
// decay_rate_median,seed.
std::string report_json(const ExpansivityReport& report);

}  // namespace ergolab
