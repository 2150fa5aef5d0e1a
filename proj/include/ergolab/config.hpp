#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ergolab/measure.hpp"
#include "ergolab/system.hpp"

namespace ergolab {

// Parsed experiment configuration. The text form is flat `key = value`
// lines; unknown keys are fatal, as are keys that do not belong to the
// declared experiment.
struct ExperimentConfig {
  std::string experiment;
  SystemSpec system = make_tent();
  SamplerSpec measure;  // lebesgue by default
  std::uint64_t seed = 42;
  Eigen::Index samples = 100000;
  std::string output_dir = "ergolab-out";

  // expansivity / denjoy-suite
  double delta = 0.05;
  int centers = 200;
  int n_max = 14;
  double threshold = 1e-3;
  double rate_floor = 0.05;
  int fit_lo = 4;
  int fit_hi = 12;
  bool grid_centers = false;

  // entropy / denjoy-suite
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  int n_lo = 2;
  int n_hi = 10;
  Eigen::Index grid = 100000;

  // structure experiments
  int horizon = 200;
  double tol = 1e-3;
  int anchors = 20;
  int pairs = 100;
  int candidates = 200;
  int burn_in = 0;
  double tol_liminf = 1e-2;
  double interval_a = 0.4;
  double interval_b = 0.6;
  double epsilon = 0.1;  // lyapunov tube
  double radius = 0.01;  // lyapunov neighbour radius
  int points = 1000;     // lyapunov sample count

  // optional expectations; a mismatch makes the run exit nonzero
  std::optional<std::string> expect;
  std::optional<double> expect_h_top_max;
  std::optional<double> expect_mass_max;
  std::optional<double> expect_fraction_min;
  std::optional<double> expect_fraction_max;
  std::optional<double> expect_density_max;
  std::optional<double> expect_success_min;
  std::optional<int> expect_set_min;

  // keys that appeared explicitly in the source text
  std::set<std::string> explicit_keys;
};

ExperimentConfig parse_config(const std::string& text);
// Canonical text form; parse(serialize(parse(text))) == parse(text).
std::string serialize_config(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

}  // namespace ergolab
