#include "ergolab/expansivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Expansive: return "expansive";
    case Verdict::NotExpansive: return "not-expansive";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool bowen_ball_contains(const SystemSpec& system, double x, double y, int n,
                         double delta) {
  if (n < 1) throw std::invalid_argument("bowen_ball_contains: n must be >= 1");
  if (!(delta > 0.0))
    throw std::invalid_argument("bowen_ball_contains: delta must be > 0");
  double fx = x, fy = y;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      fx = evaluate(system, fx);
      fy = evaluate(system, fy);
    }
    if (distance(system.metric, fx, fy) > delta) return false;
  }
  return true;
}

BallDecayCurve ball_decay_curve(const SystemSpec& system, const EmpiricalMeasure& mu,
                                double center, double delta, int n_max) {
  if (n_max < 2) throw std::invalid_argument("ball_decay_curve: n_max must be >= 2");
  const Eigen::MatrixXd m =
      detail::bowen_mass_matrix(system, mu, {center}, n_max, delta);
  BallDecayCurve curve;
  curve.center = center;
  curve.delta = delta;
  curve.n_max = n_max;
  curve.sample_size = mu.size();
  curve.masses = m.col(0).array();
  const double w2 = mu.weight_l2();
  curve.std_errs = (curve.masses * (1.0 - curve.masses)).max(0.0).sqrt() *
                   std::sqrt(w2);
  return curve;
}

namespace {

struct SlopeFit {
  double slope = 0.0;
  double residual = 0.0;
  int points = 0;
};

// LS fit of -log(mass) against n over [n_lo, n_hi], masses indexed by n-1.
// Only strictly positive masses participate; `strict` throws on a zero mass
// inside the window instead of shrinking it.
SlopeFit fit_decay_rate(const Eigen::ArrayXd& masses, int n_lo, int n_hi,
                        bool strict) {
  n_lo = std::max(n_lo, 1);
  n_hi = std::min<int>(n_hi, static_cast<int>(masses.size()));
  std::vector<double> ns, ys;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double mass = masses[n - 1];
    if (mass <= 0.0) {
      if (strict)
        throw WindowTruncation("local_entropy_estimate: zero mass at n=" +
                                   std::to_string(n) + "; shrink n_hi",
                               n - 1);
      break;  // masses are non-increasing: nothing positive further out
    }
    ns.push_back(static_cast<double>(n));
    ys.push_back(-std::log(mass));
  }
  SlopeFit fit;
  fit.points = static_cast<int>(ns.size());
  if (fit.points < 2) {
    fit.slope = std::numeric_limits<double>::infinity();
    return fit;
  }
  const auto count = static_cast<Eigen::Index>(ns.size());
  Eigen::Map<const Eigen::ArrayXd> n_arr(ns.data(), count);
  Eigen::Map<const Eigen::ArrayXd> y_arr(ys.data(), count);
  const double n_mean = n_arr.mean();
  const double y_mean = y_arr.mean();
  const double var = ((n_arr - n_mean) * (n_arr - n_mean)).sum();
  fit.slope = ((n_arr - n_mean) * (y_arr - y_mean)).sum() / var;
  const Eigen::ArrayXd resid =
      y_arr - (y_mean + fit.slope * (n_arr - n_mean));
  fit.residual = std::sqrt((resid * resid).sum() / static_cast<double>(count));
  return fit;
}

}  // namespace

LocalEntropyEstimate local_entropy_estimate(const BallDecayCurve& curve,
                                            FitWindow window) {
  if (window.n_lo < 1 || window.n_hi > curve.n_max || window.n_lo > window.n_hi)
    throw std::invalid_argument("local_entropy_estimate: bad fit window");
  const SlopeFit fit = fit_decay_rate(curve.masses, window.n_lo, window.n_hi,
                                      /*strict=*/true);
  LocalEntropyEstimate est;
  est.center = curve.center;
  est.delta = curve.delta;
  est.slope = fit.slope;
  est.residual = fit.residual;
  est.window = window;
  return est;
}

Verdict classify_expansivity(const std::vector<double>& terminal_masses,
                             const std::vector<double>& decay_rates,
                             double threshold, double rate_floor) {
  if (terminal_masses.empty() || terminal_masses.size() != decay_rates.size())
    throw std::invalid_argument("classify_expansivity: mismatched inputs");

  std::size_t below = 0;
  bool stabilized_positive = false;
  for (std::size_t i = 0; i < terminal_masses.size(); ++i) {
    if (terminal_masses[i] < threshold) ++below;
    if (terminal_masses[i] >= threshold && std::abs(decay_rates[i]) < rate_floor)
      stabilized_positive = true;
  }

  std::vector<double> finite;
  for (double r : decay_rates)
    if (std::isfinite(r)) finite.push_back(r);
  double median = std::numeric_limits<double>::infinity();
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    const std::size_t mid = finite.size() / 2;
    median = finite.size() % 2 ? finite[mid]
                               : 0.5 * (finite[mid - 1] + finite[mid]);
  }

  if (below == terminal_masses.size() && median > rate_floor)
    return Verdict::Expansive;
  if (stabilized_positive) return Verdict::NotExpansive;
  return Verdict::Inconclusive;
}

namespace {

std::vector<double> draw_centers(const EmpiricalMeasure& mu,
                                 const ExpansivityOptions& opt) {
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(opt.centers));
  if (opt.grid_centers) {
    for (int j = 0; j < opt.centers; ++j)
      centers.push_back((static_cast<double>(j) + 0.5) /
                        static_cast<double>(opt.centers));
    return centers;
  }
  // inverse-CDF draw from the cloud weights
  std::vector<double> prefix(static_cast<std::size_t>(mu.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    acc += mu.weights[i];
    prefix[static_cast<std::size_t>(i)] = acc;
  }
  for (int j = 0; j < opt.centers; ++j) {
    const double u = rng::uniform(opt.seed, rng::kCenterStream,
                                  static_cast<std::uint64_t>(j)) *
                     acc;
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
    const auto idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - prefix.begin()), prefix.size() - 1);
    centers.push_back(mu.points[static_cast<Eigen::Index>(idx)]);
  }
  return centers;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ExpansivityReport expansivity_report(const SystemSpec& system,
                                     const EmpiricalMeasure& mu, double delta,
                                     const ExpansivityOptions& options) {
  if (options.centers < 1)
    throw std::invalid_argument("expansivity_report: need at least one center");
  if (!(options.threshold > 0.0))
    throw std::invalid_argument("expansivity_report: threshold must be > 0");

  ExpansivityReport report;
  report.delta = delta;
  report.options = options;
  report.sample_size = mu.size();
  report.weight_l2 = mu.weight_l2();
  report.centers = draw_centers(mu, options);
  report.masses = detail::bowen_mass_matrix(system, mu, report.centers,
                                            options.n_max, delta);

  const auto n_centers = static_cast<Eigen::Index>(report.centers.size());
  report.terminal_masses.resize(report.centers.size());
  report.decay_rates.resize(report.centers.size());
  for (Eigen::Index c = 0; c < n_centers; ++c) {
    const Eigen::ArrayXd col = report.masses.col(c).array();
    report.terminal_masses[static_cast<std::size_t>(c)] =
        col[col.size() - 1];
    report.decay_rates[static_cast<std::size_t>(c)] =
        fit_decay_rate(col, options.fit_window.n_lo, options.fit_window.n_hi,
                       /*strict=*/false)
            .slope;
  }

  std::size_t below = 0;
  for (double t : report.terminal_masses)
    if (t < options.threshold) ++below;
  report.x_delta_fraction =
      static_cast<double>(below) / static_cast<double>(report.centers.size());

  std::vector<double> finite;
  for (double r : report.decay_rates)
    if (std::isfinite(r)) finite.push_back(r);
  report.decay_rate_median = median_of(std::move(finite));

  report.verdict =
      classify_expansivity(report.terminal_masses, report.decay_rates,
                           options.threshold, options.rate_floor);
  return report;
}

std::optional<double> expansivity_constant_search(const SystemSpec& system,
                                                  const EmpiricalMeasure& mu,
                                                  const std::vector<double>& delta_grid,
                                                  const ExpansivityOptions& options) {
  if (delta_grid.empty())
    throw std::invalid_argument("constant search: empty delta grid");
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0))
      throw std::invalid_argument("constant search: deltas must be positive");
    if (i > 0 && !(delta_grid[i] < delta_grid[i - 1]))
      throw std::invalid_argument("constant search: grid must descend");
  }
  for (const double delta : delta_grid) {
    const ExpansivityReport r = expansivity_report(system, mu, delta, options);
    if (r.verdict == Verdict::Expansive) return delta;
  }
  return std::nullopt;
}

double xm_fraction(const SystemSpec& system, const EmpiricalMeasure& mu, int m,
                   double h, const ExpansivityOptions& options) {
  if (m < 1) throw std::invalid_argument("xm_fraction: m must be >= 1");
  const ExpansivityReport r =
      expansivity_report(system, mu, 1.0 / static_cast<double>(m), options);
  std::size_t above = 0;
  for (const double rate : r.decay_rates)
    if (rate > h) ++above;
  return static_cast<double>(above) / static_cast<double>(r.decay_rates.size());
}

void write_curves_csv(std::ostream& out, const ExpansivityReport& report) {
  char buf[128];
  out << "center,delta,n,mass,std_err\n";
  const double w2_scale = report.weight_l2;
  for (Eigen::Index c = 0; c < report.masses.cols(); ++c) {
    for (Eigen::Index n = 0; n < report.masses.rows(); ++n) {
      const double mass = report.masses(n, c);
      const double se = std::sqrt(std::max(mass * (1.0 - mass), 0.0) * w2_scale);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%lld,%.17g,%.17g\n",
                    report.centers[static_cast<std::size_t>(c)], report.delta,
                    static_cast<long long>(n + 1), mass, se);
      out << buf;
    }
  }
}

std::string report_json(const ExpansivityReport& report) {
  nlohmann::ordered_json j;
  j["delta"] = report.delta;
  j["threshold"] = report.options.threshold;
  j["n_max"] = report.options.n_max;
  j["centers"] = report.centers.size();
  j["x_delta_fraction"] = report.x_delta_fraction;
  j["verdict"] = verdict_name(report.verdict);
  j["decay_rate_median"] = report.decay_rate_median;
  j["seed"] = report.options.seed;
  return j.dump(2) + "\n";
}

}  // namespace ergolab
