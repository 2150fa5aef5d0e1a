#include "ergolab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "ergolab/errors.hpp"

namespace ergolab {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "expansivity", "entropy",    "stable-class", "scrambled",
      "wandering",   "recurrence", "lyapunov",     "denjoy-suite"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::set<std::string> kCommonKeys = {"experiment", "system", "out"};

// Keys an experiment actually consumes; anything else is fatal.
const std::map<std::string, std::set<std::string>> kExperimentKeys = {
    {"expansivity",
     {"measure", "seed", "samples", "delta", "centers", "n_max", "threshold",
      "rate_floor", "fit_lo", "fit_hi", "grid_centers", "expect"}},
    {"entropy", {"epsilons", "n_lo", "n_hi", "grid", "expect_h_top_max"}},
    {"stable-class",
     {"measure", "seed", "samples", "anchors", "horizon", "tol",
      "expect_mass_max"}},
    {"scrambled",
     {"seed", "pairs", "candidates", "delta", "horizon", "burn_in", "tol_liminf",
      "expect_success_min", "expect_set_min"}},
    {"wandering", {"interval_a", "interval_b", "horizon", "expect"}},
    {"recurrence",
     {"measure", "seed", "samples", "horizon", "tol", "expect_fraction_min",
      "expect_fraction_max"}},
    {"lyapunov",
     {"measure", "seed", "points", "epsilon", "radius", "horizon",
      "expect_density_max"}},
    {"denjoy-suite",
     {"measure", "seed", "samples", "centers", "n_max", "threshold", "rate_floor",
      "fit_lo", "fit_hi", "epsilons", "n_lo", "n_hi", "grid", "horizon", "expect",
      "expect_h_top_max"}},
};

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' has a bad numeric value '" + v + "'",
                      line, key);
  }
}

long to_long(const std::string& v, int line, const std::string& key) {
  const double d = to_double(v, line, key);
  return static_cast<long>(d);
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                        "' wants true/false",
                    line, key);
}

std::vector<double> to_double_list(const std::string& v, int line,
                                   const std::string& key) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(trim(item), line, key));
  if (out.empty())
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' wants a comma-separated list",
                      line, key);
  return out;
}

// Defaults that depend on the experiment; applied to keys the text left out.
void apply_contextual_defaults(ExperimentConfig& c) {
  auto unset = [&](const char* key) { return !c.explicit_keys.count(key); };
  if (c.experiment == "scrambled") {
    if (unset("delta")) c.delta = 0.25;
    if (unset("horizon")) c.horizon = 5000;
  } else if (c.experiment == "recurrence") {
    if (unset("horizon")) c.horizon = 10000;
    if (unset("tol")) c.tol = 1e-2;
    if (unset("samples")) c.samples = 2000;
  } else if (c.experiment == "lyapunov") {
    if (unset("horizon")) c.horizon = 50;
  } else if (c.experiment == "stable-class") {
    if (unset("samples")) c.samples = 20000;
  } else if (c.experiment == "wandering") {
    if (unset("horizon")) c.horizon = 50;
  } else if (c.experiment == "denjoy-suite") {
    if (unset("system")) c.system = make_denjoy();
    if (unset("measure")) c.measure = SamplerSpec::denjoy_pushforward();
    if (unset("samples")) c.samples = 50000;
    if (unset("centers")) c.centers = 100;
    // Bowen-ball masses of a circle homeomorphism decay like 1/n, not
    // exponentially; the suite defaults scale threshold and fit window to
    // that rate (threshold still sits an order of magnitude above the
    // Monte-Carlo noise floor).
    if (unset("n_max")) c.n_max = 800;
    if (unset("threshold")) c.threshold = 5e-3;
    if (unset("rate_floor")) c.rate_floor = 0.02;
    if (unset("fit_hi")) c.fit_hi = 24;
    if (unset("epsilons")) c.epsilons = {0.1, 0.05};
    if (unset("n_lo")) c.n_lo = 40;
    if (unset("n_hi")) c.n_hi = 80;
    if (unset("grid")) c.grid = 20000;
    if (unset("horizon")) c.horizon = 50;
  }
}

void validate(const ExperimentConfig& c) {
  auto positive = [&](double v, const char* key) {
    if (!(v > 0.0))
      throw ConfigError(std::string("config: knob '") + key + "' must be positive",
                        0, key);
  };
  positive(static_cast<double>(c.samples), "samples");
  positive(c.delta, "delta");
  positive(static_cast<double>(c.centers), "centers");
  positive(static_cast<double>(c.n_max), "n_max");
  positive(c.threshold, "threshold");
  positive(c.rate_floor, "rate_floor");
  positive(static_cast<double>(c.fit_lo), "fit_lo");
  positive(static_cast<double>(c.fit_hi), "fit_hi");
  positive(static_cast<double>(c.n_lo), "n_lo");
  positive(static_cast<double>(c.n_hi), "n_hi");
  positive(static_cast<double>(c.grid), "grid");
  positive(static_cast<double>(c.horizon), "horizon");
  positive(c.tol, "tol");
  positive(static_cast<double>(c.anchors), "anchors");
  positive(static_cast<double>(c.pairs), "pairs");
  positive(static_cast<double>(c.candidates), "candidates");
  positive(c.tol_liminf, "tol_liminf");
  positive(c.epsilon, "epsilon");
  positive(c.radius, "radius");
  positive(static_cast<double>(c.points), "points");
  if (c.burn_in < 0)
    throw ConfigError("config: knob 'burn_in' must be >= 0", 0, "burn_in");
  for (const double e : c.epsilons) positive(e, "epsilons");
  if (c.experiment == "denjoy-suite" && c.system.family != Family::Denjoy)
    throw ConfigError("config: denjoy-suite requires a denjoy system", 0, "system");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::tuple<int, std::string, std::string>> entries;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                            ": expected 'key = value'",
                        line_no);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                            ": empty key or value",
                        line_no);
    if (c.explicit_keys.count(key))
      throw ConfigError("config line " + std::to_string(line_no) +
                            ": duplicate key '" + key + "'",
                        line_no, key);
    c.explicit_keys.insert(key);
    entries.emplace_back(line_no, key, value);
  }

  if (!c.explicit_keys.count("experiment"))
    throw ConfigError("config: missing required key 'experiment'", 0, "experiment");

  // experiment first: it scopes the allowed keys
  for (const auto& [ln, key, value] : entries) {
    if (key != "experiment") continue;
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), value) == names.end())
      throw ConfigError("config line " + std::to_string(ln) +
                            ": unknown experiment '" + value + "'",
                        ln, key);
    c.experiment = value;
  }
  const auto& allowed = kExperimentKeys.at(c.experiment);

  for (const auto& [ln, key, value] : entries) {
    if (key == "experiment") continue;
    if (!kCommonKeys.count(key) && !allowed.count(key))
      throw ConfigError("config line " + std::to_string(ln) + ": unknown key '" +
                            key + "' for experiment " + c.experiment,
                        ln, key);
    if (key == "system") {
      try {
        c.system = parse_system(value);
      } catch (const std::exception& e) {
        throw ConfigError("config line " + std::to_string(ln) + ": " + e.what(), ln,
                          key);
      }
    } else if (key == "measure") {
      try {
        c.measure = parse_sampler(value);
      } catch (const std::exception& e) {
        throw ConfigError("config line " + std::to_string(ln) + ": " + e.what(), ln,
                          key);
      }
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(to_long(value, ln, key));
    } else if (key == "samples") {
      c.samples = to_long(value, ln, key);
    } else if (key == "out") {
      c.output_dir = value;
    } else if (key == "delta") {
      c.delta = to_double(value, ln, key);
    } else if (key == "centers") {
      c.centers = static_cast<int>(to_long(value, ln, key));
    } else if (key == "n_max") {
      c.n_max = static_cast<int>(to_long(value, ln, key));
    } else if (key == "threshold") {
      c.threshold = to_double(value, ln, key);
    } else if (key == "rate_floor") {
      c.rate_floor = to_double(value, ln, key);
    } else if (key == "fit_lo") {
      c.fit_lo = static_cast<int>(to_long(value, ln, key));
    } else if (key == "fit_hi") {
      c.fit_hi = static_cast<int>(to_long(value, ln, key));
    } else if (key == "grid_centers") {
      c.grid_centers = to_bool(value, ln, key);
    } else if (key == "epsilons") {
      c.epsilons = to_double_list(value, ln, key);
    } else if (key == "n_lo") {
      c.n_lo = static_cast<int>(to_long(value, ln, key));
    } else if (key == "n_hi") {
      c.n_hi = static_cast<int>(to_long(value, ln, key));
    } else if (key == "grid") {
      c.grid = to_long(value, ln, key);
    } else if (key == "horizon") {
      c.horizon = static_cast<int>(to_long(value, ln, key));
    } else if (key == "tol") {
      c.tol = to_double(value, ln, key);
    } else if (key == "anchors") {
      c.anchors = static_cast<int>(to_long(value, ln, key));
    } else if (key == "pairs") {
      c.pairs = static_cast<int>(to_long(value, ln, key));
    } else if (key == "candidates") {
      c.candidates = static_cast<int>(to_long(value, ln, key));
    } else if (key == "burn_in") {
      c.burn_in = static_cast<int>(to_long(value, ln, key));
    } else if (key == "tol_liminf") {
      c.tol_liminf = to_double(value, ln, key);
    } else if (key == "interval_a") {
      c.interval_a = to_double(value, ln, key);
    } else if (key == "interval_b") {
      c.interval_b = to_double(value, ln, key);
    } else if (key == "epsilon") {
      c.epsilon = to_double(value, ln, key);
    } else if (key == "radius") {
      c.radius = to_double(value, ln, key);
    } else if (key == "points") {
      c.points = static_cast<int>(to_long(value, ln, key));
    } else if (key == "expect") {
      c.expect = value;
    } else if (key == "expect_h_top_max") {
      c.expect_h_top_max = to_double(value, ln, key);
    } else if (key == "expect_mass_max") {
      c.expect_mass_max = to_double(value, ln, key);
    } else if (key == "expect_fraction_min") {
      c.expect_fraction_min = to_double(value, ln, key);
    } else if (key == "expect_fraction_max") {
      c.expect_fraction_max = to_double(value, ln, key);
    } else if (key == "expect_density_max") {
      c.expect_density_max = to_double(value, ln, key);
    } else if (key == "expect_success_min") {
      c.expect_success_min = to_double(value, ln, key);
    } else if (key == "expect_set_min") {
      c.expect_set_min = static_cast<int>(to_long(value, ln, key));
    } else {
      throw ConfigError("config line " + std::to_string(ln) + ": unhandled key '" +
                            key + "'",
                        ln, key);
    }
  }

  apply_contextual_defaults(c);
  validate(c);
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment = " << c.experiment << "\n";
  out << "system = " << format_system(c.system) << "\n";
  const auto& allowed = kExperimentKeys.at(c.experiment);
  if (allowed.count("measure"))
    out << "measure = " << format_sampler(c.measure) << "\n";
  if (allowed.count("seed")) out << "seed = " << c.seed << "\n";
  if (allowed.count("samples")) out << "samples = " << c.samples << "\n";
  out << "out = " << c.output_dir << "\n";

  auto put_d = [&](const char* k, double v) { out << k << " = " << fmt_double(v) << "\n"; };
  auto put_i = [&](const char* k, long v) { out << k << " = " << v << "\n"; };

  const std::string& e = c.experiment;
  if (e == "expansivity" || e == "denjoy-suite") {
    if (e == "expansivity") put_d("delta", c.delta);
    put_i("centers", c.centers);
    put_i("n_max", c.n_max);
    put_d("threshold", c.threshold);
    put_d("rate_floor", c.rate_floor);
    put_i("fit_lo", c.fit_lo);
    put_i("fit_hi", c.fit_hi);
    if (e == "expansivity")
      out << "grid_centers = " << (c.grid_centers ? "true" : "false") << "\n";
  }
  if (e == "entropy" || e == "denjoy-suite") {
    out << "epsilons = ";
    for (std::size_t i = 0; i < c.epsilons.size(); ++i)
      out << (i ? "," : "") << fmt_double(c.epsilons[i]);
    out << "\n";
    put_i("n_lo", c.n_lo);
    put_i("n_hi", c.n_hi);
    put_i("grid", c.grid);
  }
  if (e == "stable-class") {
    put_i("anchors", c.anchors);
    put_i("horizon", c.horizon);
    put_d("tol", c.tol);
  }
  if (e == "scrambled") {
    put_i("pairs", c.pairs);
    put_i("candidates", c.candidates);
    put_d("delta", c.delta);
    put_i("horizon", c.horizon);
    put_i("burn_in", c.burn_in);
    put_d("tol_liminf", c.tol_liminf);
  }
  if (e == "wandering" || e == "denjoy-suite") {
    if (e == "wandering") {
      put_d("interval_a", c.interval_a);
      put_d("interval_b", c.interval_b);
    }
    put_i("horizon", c.horizon);
  }
  if (e == "recurrence") {
    put_i("horizon", c.horizon);
    put_d("tol", c.tol);
  }
  if (e == "lyapunov") {
    put_i("points", c.points);
    put_d("epsilon", c.epsilon);
    put_d("radius", c.radius);
    put_i("horizon", c.horizon);
  }

  if (c.expect) out << "expect = " << *c.expect << "\n";
  if (c.expect_h_top_max) put_d("expect_h_top_max", *c.expect_h_top_max);
  if (c.expect_mass_max) put_d("expect_mass_max", *c.expect_mass_max);
  if (c.expect_fraction_min) put_d("expect_fraction_min", *c.expect_fraction_min);
  if (c.expect_fraction_max) put_d("expect_fraction_max", *c.expect_fraction_max);
  if (c.expect_density_max) put_d("expect_density_max", *c.expect_density_max);
  if (c.expect_success_min) put_d("expect_success_min", *c.expect_success_min);
  if (c.expect_set_min) put_i("expect_set_min", *c.expect_set_min);
  return out.str();
}

}  // namespace ergolab
