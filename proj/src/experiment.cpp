#include "ergolab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ergolab/entropy.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/expansivity.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/structure.hpp"

namespace ergolab {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct Sink {
  fs::path dir;
  std::vector<std::string>* files;

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
    files->push_back(name);
  }
};

void check_expect_verdict(const ExperimentConfig& c, const std::string& got,
                          std::vector<std::string>& mismatches) {
  if (c.expect && *c.expect != got)
    mismatches.push_back("expect = " + *c.expect + ", got " + got);
}

template <typename T>
void check_max(const std::optional<double>& bound, T got, const char* what,
               std::vector<std::string>& mismatches) {
  if (bound && !(static_cast<double>(got) <= *bound)) {
    std::ostringstream msg;
    msg << what << " = " << got << " exceeds expected max " << *bound;
    mismatches.push_back(msg.str());
  }
}

template <typename T>
void check_min(const std::optional<double>& bound, T got, const char* what,
               std::vector<std::string>& mismatches) {
  if (bound && !(static_cast<double>(got) >= *bound)) {
    std::ostringstream msg;
    msg << what << " = " << got << " below expected min " << *bound;
    mismatches.push_back(msg.str());
  }
}

ExpansivityOptions options_from(const ExperimentConfig& c) {
  ExpansivityOptions opt;
  opt.centers = c.centers;
  opt.n_max = c.n_max;
  opt.threshold = c.threshold;
  opt.rate_floor = c.rate_floor;
  opt.fit_window = FitWindow{c.fit_lo, std::min(c.fit_hi, c.n_max)};
  opt.seed = c.seed;
  opt.grid_centers = c.grid_centers;
  return opt;
}

ordered_json run_expansivity(const ExperimentConfig& c, const Sink& sink,
                             std::vector<std::string>& mismatches) {
  const EmpiricalMeasure mu = sample_measure(c.measure, c.system, c.samples, c.seed);
  const ExpansivityReport report =
      expansivity_report(c.system, mu, c.delta, options_from(c));

  std::ostringstream curves;
  write_curves_csv(curves, report);
  sink.write("curves.csv", curves.str());
  sink.write("report.json", report_json(report));

  check_expect_verdict(c, verdict_name(report.verdict), mismatches);

  ordered_json j;
  j["verdict"] = verdict_name(report.verdict);
  j["x_delta_fraction"] = report.x_delta_fraction;
  j["decay_rate_median"] = report.decay_rate_median;
  return j;
}

ordered_json run_entropy(const ExperimentConfig& c, const Sink& sink,
                         std::vector<std::string>& mismatches) {
  const EntropyEstimate est =
      topological_entropy_estimate(c.system, c.epsilons, c.n_lo, c.n_hi, c.grid);
  std::ostringstream csv;
  write_entropy_csv(csv, est);
  sink.write("entropy.csv", csv.str());
  sink.write("entropy.json", entropy_json(est));

  check_max(c.expect_h_top_max, est.h_top_estimate, "h_top_estimate", mismatches);

  ordered_json j;
  j["h_top_estimate"] = est.h_top_estimate;
  j["slope_per_epsilon"] = est.slope_per_epsilon;
  return j;
}

ordered_json run_stable_class(const ExperimentConfig& c, const Sink& sink,
                              std::vector<std::string>& mismatches) {
  const EmpiricalMeasure mu = sample_measure(c.measure, c.system, c.samples, c.seed);
  std::ostringstream csv;
  csv << "anchor,mass,std_err,members\n";
  double max_mass = 0.0;
  char buf[160];
  for (int i = 0; i < c.anchors; ++i) {
    const double p = canonicalize(
        c.system.space,
        rng::uniform(c.seed, rng::kAnchorStream, static_cast<std::uint64_t>(i)));
    const StableClassEstimate est =
        stable_class_mass(c.system, mu, p, c.horizon, c.tol);
    max_mass = std::max(max_mass, est.mass.value);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu\n", p, est.mass.value,
                  est.mass.standard_error, est.member_indices.size());
    csv << buf;
  }
  sink.write("stable_classes.csv", csv.str());

  check_max(c.expect_mass_max, max_mass, "max stable-class mass", mismatches);

  ordered_json j;
  j["anchors"] = c.anchors;
  j["max_mass"] = max_mass;
  return j;
}

ordered_json run_scrambled(const ExperimentConfig& c, const Sink& sink,
                           std::vector<std::string>& mismatches) {
  std::vector<ScrambledStats> stats;
  stats.reserve(static_cast<std::size_t>(c.pairs));
  std::size_t successes = 0;
  for (int i = 0; i < c.pairs; ++i) {
    const double x = rng::uniform(c.seed, rng::kPairStream,
                                  static_cast<std::uint64_t>(2 * i));
    const double y = rng::uniform(c.seed, rng::kPairStream,
                                  static_cast<std::uint64_t>(2 * i + 1));
    const ScrambledStats s =
        scrambled_pair_stats(c.system, x, y, c.horizon, c.burn_in);
    if (s.liminf_est < c.tol_liminf && s.limsup_est > c.delta) ++successes;
    stats.push_back(s);
  }
  const double success_fraction =
      static_cast<double>(successes) / static_cast<double>(c.pairs);

  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(c.candidates));
  for (int i = 0; i < c.candidates; ++i)
    candidates.push_back(rng::uniform(c.seed, rng::kCandidateStream,
                                      static_cast<std::uint64_t>(i)));
  const std::vector<double> set = greedy_scrambled_set(
      c.system, candidates, c.delta, c.horizon, c.burn_in, c.tol_liminf);

  std::ostringstream csv;
  write_scrambled_csv(csv, stats);
  sink.write("scrambled_pairs.csv", csv.str());

  ordered_json j;
  j["pairs"] = c.pairs;
  j["success_fraction"] = success_fraction;
  j["greedy_set_size"] = set.size();
  j["delta"] = c.delta;
  sink.write("scrambled.json", j.dump(2) + "\n");

  check_min(c.expect_success_min, success_fraction, "success_fraction", mismatches);
  if (c.expect_set_min && static_cast<int>(set.size()) < *c.expect_set_min) {
    std::ostringstream msg;
    msg << "greedy_set_size = " << set.size() << " below expected min "
        << *c.expect_set_min;
    mismatches.push_back(msg.str());
  }
  return j;
}

ordered_json run_wandering(const ExperimentConfig& c, const Sink& sink,
                           std::vector<std::string>& mismatches) {
  const WanderingVerdict v =
      wandering_interval_verdict(c.system, c.interval_a, c.interval_b, c.horizon);
  sink.write("wandering.json", wandering_json(v));
  check_expect_verdict(c, wandering_name(v.verdict), mismatches);

  ordered_json j;
  j["verdict"] = wandering_name(v.verdict);
  if (v.first_collision)
    j["first_collision"] = {v.first_collision->first, v.first_collision->second};
  return j;
}

ordered_json run_recurrence(const ExperimentConfig& c, const Sink& sink,
                            std::vector<std::string>& mismatches) {
  const EmpiricalMeasure mu = sample_measure(c.measure, c.system, c.samples, c.seed);
  const double fraction = recurrence_fraction(c.system, mu, c.horizon, c.tol);

  ordered_json j;
  j["recurrence_fraction"] = fraction;
  j["horizon"] = c.horizon;
  j["tol"] = c.tol;
  sink.write("recurrence.json", j.dump(2) + "\n");

  check_min(c.expect_fraction_min, fraction, "recurrence_fraction", mismatches);
  check_max(c.expect_fraction_max, fraction, "recurrence_fraction", mismatches);
  return j;
}

ordered_json run_lyapunov(const ExperimentConfig& c, const Sink& sink,
                          std::vector<std::string>& mismatches) {
  const EmpiricalMeasure mu = sample_measure(c.measure, c.system, c.points, c.seed);
  const std::vector<double> samples(mu.points.data(),
                                    mu.points.data() + mu.size());
  const double density = lyapunov_violation_density(c.system, samples, c.epsilon,
                                                    c.radius, c.horizon);

  ordered_json j;
  j["violation_density"] = density;
  j["epsilon"] = c.epsilon;
  j["radius"] = c.radius;
  j["horizon"] = c.horizon;
  sink.write("lyapunov.json", j.dump(2) + "\n");

  check_max(c.expect_density_max, density, "violation_density", mismatches);
  return j;
}

ordered_json run_denjoy_suite(const ExperimentConfig& c, const Sink& sink,
                              std::vector<std::string>& mismatches) {
  const DenjoyModel& model = *c.system.denjoy;
  const double delta = model.biggest_gap_length() / 4.0;

  const EmpiricalMeasure mu = sample_measure(c.measure, c.system, c.samples, c.seed);
  const ExpansivityReport report =
      expansivity_report(c.system, mu, delta, options_from(c));
  std::ostringstream curves;
  write_curves_csv(curves, report);
  sink.write("curves.csv", curves.str());
  sink.write("report.json", report_json(report));

  const EntropyEstimate est =
      topological_entropy_estimate(c.system, c.epsilons, c.n_lo, c.n_hi, c.grid);
  std::ostringstream en;
  write_entropy_csv(en, est);
  sink.write("entropy.csv", en.str());
  sink.write("entropy.json", entropy_json(est));

  const auto& central = model.gap_by_k(0);
  const WanderingVerdict wv = wandering_interval_verdict(
      c.system, central.left, central.left + central.length, c.horizon);
  sink.write("wandering.json", wandering_json(wv));

  const MassEstimate gap_interior = set_mass(
      mu, IntervalSet{central.left, central.left + central.length, /*closed=*/false});

  check_expect_verdict(c, verdict_name(report.verdict), mismatches);
  check_max(c.expect_h_top_max, est.h_top_estimate, "h_top_estimate", mismatches);

  ordered_json j;
  j["delta"] = delta;
  j["verdict"] = verdict_name(report.verdict);
  j["x_delta_fraction"] = report.x_delta_fraction;
  j["decay_rate_median"] = report.decay_rate_median;
  j["h_top_estimate"] = est.h_top_estimate;
  j["central_gap_wandering"] = wandering_name(wv.verdict);
  j["central_gap_interior_mass"] = gap_interior.value;
  j["truncation_tail"] = model.tail;
  return j;
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  ReportBundle bundle;
  bundle.config_echo = serialize_config(config);

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  Sink sink{dir, &bundle.files_written};
  sink.write("config_echo.txt", bundle.config_echo);

  ordered_json result;
  if (config.experiment == "expansivity")
    result = run_expansivity(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "entropy")
    result = run_entropy(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "stable-class")
    result = run_stable_class(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "scrambled")
    result = run_scrambled(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "wandering")
    result = run_wandering(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "recurrence")
    result = run_recurrence(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "lyapunov")
    result = run_lyapunov(config, sink, bundle.expect_mismatches);
  else if (config.experiment == "denjoy-suite")
    result = run_denjoy_suite(config, sink, bundle.expect_mismatches);
  else
    throw ConfigError("unknown experiment '" + config.experiment + "'");

  ordered_json summary;
  summary["experiment"] = config.experiment;
  summary["system"] = format_system(config.system);
  summary["version"] = bundle.version;
  summary["seed"] = config.seed;
  summary["result"] = result;
  summary["expect_mismatches"] = bundle.expect_mismatches;
  bundle.summary_json = summary.dump(2) + "\n";
  sink.write("summary.json", bundle.summary_json);

  const auto t1 = std::chrono::steady_clock::now();
  bundle.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  // wall clock lives outside the reproducibility contract
  std::ostringstream log;
  log << "ergolab " << bundle.version << "\nwall_seconds " << bundle.wall_seconds
      << "\n";
  std::ofstream(dir / "run_log.txt", std::ios::binary) << log.str();

  return bundle;
}

}  // namespace ergolab
