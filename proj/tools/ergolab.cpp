#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ergolab/errors.hpp"
#include "ergolab/experiment.hpp"
#include "ergolab/measure.hpp"

namespace {

using namespace ergolab;

int finish(const ReportBundle& bundle) {
  if (!bundle.ok()) {
    std::cerr << "expectation mismatches:\n";
    for (const auto& m : bundle.expect_mismatches) std::cerr << "  " << m << "\n";
    return 1;
  }
  return 0;
}

int run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open config file " << path << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const ExperimentConfig config = parse_config(text.str());
  const ReportBundle bundle = run_experiment(config);
  std::cout << bundle.summary_json;
  return finish(bundle);
}

// Assembles a config text from subcommand flags so the flag path and the
// config-file path share one code path.
struct ConfigBuilder {
  std::ostringstream text;

  ConfigBuilder& set(const std::string& key, const std::string& value) {
    if (!value.empty()) text << key << " = " << value << "\n";
    return *this;
  }
  ConfigBuilder& set(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    text << key << " = " << buf << "\n";
    return *this;
  }
  ConfigBuilder& set(const std::string& key, long value) {
    text << key << " = " << value << "\n";
    return *this;
  }
  int run() {
    const ExperimentConfig config = parse_config(text.str());
    const ReportBundle bundle = run_experiment(config);
    std::cout << bundle.summary_json;
    return finish(bundle);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: a desk-scale laboratory for measurable dynamics"};
  app.require_subcommand(1);

  // run <config-file>
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  run_cmd->add_option("config", config_path, "flat key = value config file")
      ->required();

  // systems list
  auto* systems_cmd = app.add_subcommand("systems", "system catalog");
  auto* systems_list = systems_cmd->add_subcommand("list", "list the map catalog");

  // orbit
  std::string orbit_system = "tent";
  double orbit_x0 = 0.2;
  long orbit_n = 10;
  auto* orbit_cmd = app.add_subcommand("orbit", "print an orbit");
  orbit_cmd->add_option("--system", orbit_system, "system spec string");
  orbit_cmd->add_option("--x0", orbit_x0, "initial point")->required();
  orbit_cmd->add_option("--n", orbit_n, "iterates")->required();

  // sample: write a cloud as point,weight csv
  std::string sample_system = "tent", sample_measure_text = "lebesgue", sample_out;
  long sample_n = 10000, sample_seed = 42;
  auto* sample_cmd = app.add_subcommand("sample", "write a measure cloud as CSV");
  sample_cmd->add_option("--system", sample_system, "system spec string");
  sample_cmd->add_option("--measure", sample_measure_text, "sampler descriptor");
  sample_cmd->add_option("--samples", sample_n, "cloud size");
  sample_cmd->add_option("--seed", sample_seed, "root seed");
  sample_cmd->add_option("--out", sample_out, "output csv path")->required();

  // shared experiment flags
  struct Flags {
    std::string system = "tent";
    std::string measure;
    std::string out;
    std::string expect;
    long seed = 42;
    long samples = -1;
  };

  auto add_common = [](CLI::App* cmd, Flags& f) {
    cmd->add_option("--system", f.system, "system spec string");
    cmd->add_option("--seed", f.seed, "root seed");
    cmd->add_option("--out", f.out, "output directory")->required();
  };

  Flags ex;
  double ex_delta = 0.05, ex_threshold = -1, ex_rate_floor = -1;
  long ex_centers = -1, ex_nmax = -1, ex_fit_lo = -1, ex_fit_hi = -1;
  bool ex_grid_centers = false;
  auto* ex_cmd = app.add_subcommand("expansivity", "dynamical-ball decay verdict");
  add_common(ex_cmd, ex);
  ex_cmd->add_option("--measure", ex.measure, "sampler descriptor");
  ex_cmd->add_option("--samples", ex.samples, "cloud size");
  ex_cmd->add_option("--delta", ex_delta, "ball radius");
  ex_cmd->add_option("--centers", ex_centers, "number of centers");
  ex_cmd->add_option("--nmax", ex_nmax, "curve length");
  ex_cmd->add_option("--threshold", ex_threshold, "terminal-mass threshold");
  ex_cmd->add_option("--rate-floor", ex_rate_floor, "decay-rate floor");
  ex_cmd->add_option("--fit-lo", ex_fit_lo, "fit window start");
  ex_cmd->add_option("--fit-hi", ex_fit_hi, "fit window end");
  ex_cmd->add_flag("--grid-centers", ex_grid_centers, "centers on a uniform grid");
  ex_cmd->add_option("--expect", ex.expect, "expected verdict");

  Flags en;
  std::string en_epsilons;
  long en_nlo = -1, en_nhi = -1, en_grid = -1;
  double en_expect_htop = -1;
  auto* en_cmd = app.add_subcommand("entropy", "separated-set entropy estimate");
  add_common(en_cmd, en);
  en_cmd->add_option("--epsilons", en_epsilons, "descending comma list");
  en_cmd->add_option("--nlo", en_nlo, "first n");
  en_cmd->add_option("--nhi", en_nhi, "last n");
  en_cmd->add_option("--grid", en_grid, "candidate grid size");
  en_cmd->add_option("--expect-htop-max", en_expect_htop, "expected h_top bound");

  Flags sc;
  double sc_delta = -1, sc_tol_liminf = -1;
  long sc_pairs = -1, sc_candidates = -1, sc_horizon = -1, sc_burnin = -1;
  auto* sc_cmd = app.add_subcommand("scrambled", "scrambled pair statistics");
  add_common(sc_cmd, sc);
  sc_cmd->add_option("--pairs", sc_pairs, "number of seeded pairs");
  sc_cmd->add_option("--candidates", sc_candidates, "greedy-set candidates");
  sc_cmd->add_option("--delta", sc_delta, "limsup threshold");
  sc_cmd->add_option("--horizon", sc_horizon, "iterates per pair");
  sc_cmd->add_option("--burnin", sc_burnin, "steps ignored at the front");
  sc_cmd->add_option("--tol-liminf", sc_tol_liminf, "liminf threshold");

  Flags st;
  double st_tol = -1;
  long st_anchors = -1, st_horizon = -1;
  double st_expect_mass = -1;
  auto* st_cmd = app.add_subcommand("stable", "stable-class masses");
  add_common(st_cmd, st);
  st_cmd->add_option("--measure", st.measure, "sampler descriptor");
  st_cmd->add_option("--samples", st.samples, "cloud size");
  st_cmd->add_option("--anchors", st_anchors, "number of anchors");
  st_cmd->add_option("--horizon", st_horizon, "orbit horizon");
  st_cmd->add_option("--tol", st_tol, "membership tolerance");
  st_cmd->add_option("--expect-mass-max", st_expect_mass, "expected mass bound");

  Flags wa;
  double wa_a = 0.4, wa_b = 0.6;
  long wa_horizon = -1;
  auto* wa_cmd = app.add_subcommand("wandering", "wandering-interval verdict");
  add_common(wa_cmd, wa);
  wa_cmd->add_option("--a", wa_a, "left endpoint")->required();
  wa_cmd->add_option("--b", wa_b, "right endpoint")->required();
  wa_cmd->add_option("--horizon", wa_horizon, "images tracked");
  wa_cmd->add_option("--expect", wa.expect, "expected verdict");

  Flags re;
  double re_tol = -1;
  long re_horizon = -1;
  auto* re_cmd = app.add_subcommand("recurrence", "recurrent fraction");
  add_common(re_cmd, re);
  re_cmd->add_option("--measure", re.measure, "sampler descriptor");
  re_cmd->add_option("--samples", re.samples, "cloud size");
  re_cmd->add_option("--horizon", re_horizon, "orbit horizon");
  re_cmd->add_option("--tol", re_tol, "return tolerance");

  Flags ly;
  double ly_epsilon = -1, ly_radius = -1;
  long ly_points = -1, ly_horizon = -1;
  auto* ly_cmd = app.add_subcommand("lyapunov", "Lyapunov violation density");
  add_common(ly_cmd, ly);
  ly_cmd->add_option("--measure", ly.measure, "sampler descriptor");
  ly_cmd->add_option("--points", ly_points, "sample count");
  ly_cmd->add_option("--epsilon", ly_epsilon, "orbit tube width");
  ly_cmd->add_option("--radius", ly_radius, "neighbour radius");
  ly_cmd->add_option("--horizon", ly_horizon, "orbit horizon");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_config_file(config_path);

    if (*systems_cmd) {
      if (*systems_list) {
        for (const auto& line : ergolab::system_catalog()) std::cout << line << "\n";
        return 0;
      }
      std::cerr << "usage: ergolab systems list\n";
      return 2;
    }

    if (*orbit_cmd) {
      const SystemSpec s = parse_system(orbit_system);
      const Orbit o = orbit(s, orbit_x0, static_cast<int>(orbit_n));
      char buf[40];
      for (const double p : o.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p);
        std::cout << buf << "\n";
      }
      return 0;
    }

    if (*sample_cmd) {
      const SystemSpec s = parse_system(sample_system);
      const EmpiricalMeasure mu =
          sample_measure(parse_sampler(sample_measure_text), s, sample_n,
                         static_cast<std::uint64_t>(sample_seed));
      std::ofstream out(sample_out, std::ios::binary);
      if (!out) {
        std::cerr << "cannot write " << sample_out << "\n";
        return 2;
      }
      write_cloud_csv(out, mu);
      return 0;
    }

    auto common = [](ConfigBuilder& b, const Flags& f, const char* experiment) {
      b.set("experiment", std::string(experiment));
      b.set("system", f.system);
      b.set("measure", f.measure);
      b.set("seed", f.seed);
      if (f.samples >= 0) b.set("samples", f.samples);
      b.set("out", f.out);
      b.set("expect", f.expect);
    };

    if (*ex_cmd) {
      ConfigBuilder b;
      common(b, ex, "expansivity");
      b.set("delta", ex_delta);
      if (ex_centers >= 0) b.set("centers", ex_centers);
      if (ex_nmax >= 0) b.set("n_max", ex_nmax);
      if (ex_threshold >= 0) b.set("threshold", ex_threshold);
      if (ex_rate_floor >= 0) b.set("rate_floor", ex_rate_floor);
      if (ex_fit_lo >= 0) b.set("fit_lo", ex_fit_lo);
      if (ex_fit_hi >= 0) b.set("fit_hi", ex_fit_hi);
      if (ex_grid_centers) b.set("grid_centers", std::string("true"));
      return b.run();
    }
    if (*en_cmd) {
      ConfigBuilder b;
      common(b, en, "entropy");
      b.set("epsilons", en_epsilons);
      if (en_nlo >= 0) b.set("n_lo", en_nlo);
      if (en_nhi >= 0) b.set("n_hi", en_nhi);
      if (en_grid >= 0) b.set("grid", en_grid);
      if (en_expect_htop >= 0) b.set("expect_h_top_max", en_expect_htop);
      return b.run();
    }
    if (*sc_cmd) {
      ConfigBuilder b;
      common(b, sc, "scrambled");
      if (sc_pairs >= 0) b.set("pairs", sc_pairs);
      if (sc_candidates >= 0) b.set("candidates", sc_candidates);
      if (sc_delta >= 0) b.set("delta", sc_delta);
      if (sc_horizon >= 0) b.set("horizon", sc_horizon);
      if (sc_burnin >= 0) b.set("burn_in", sc_burnin);
      if (sc_tol_liminf >= 0) b.set("tol_liminf", sc_tol_liminf);
      return b.run();
    }
    if (*st_cmd) {
      ConfigBuilder b;
      common(b, st, "stable-class");
      if (st_anchors >= 0) b.set("anchors", st_anchors);
      if (st_horizon >= 0) b.set("horizon", st_horizon);
      if (st_tol >= 0) b.set("tol", st_tol);
      if (st_expect_mass >= 0) b.set("expect_mass_max", st_expect_mass);
      return b.run();
    }
    if (*wa_cmd) {
      ConfigBuilder b;
      common(b, wa, "wandering");
      b.set("interval_a", wa_a);
      b.set("interval_b", wa_b);
      if (wa_horizon >= 0) b.set("horizon", wa_horizon);
      return b.run();
    }
    if (*re_cmd) {
      ConfigBuilder b;
      common(b, re, "recurrence");
      if (re_horizon >= 0) b.set("horizon", re_horizon);
      if (re_tol >= 0) b.set("tol", re_tol);
      return b.run();
    }
    if (*ly_cmd) {
      ConfigBuilder b;
      common(b, ly, "lyapunov");
      if (ly_points >= 0) b.set("points", ly_points);
      if (ly_epsilon >= 0) b.set("epsilon", ly_epsilon);
      if (ly_radius >= 0) b.set("radius", ly_radius);
      if (ly_horizon >= 0) b.set("horizon", ly_horizon);
      return b.run();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
