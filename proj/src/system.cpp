#include "ergolab/system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ergolab/rng.hpp"

namespace ergolab {

const char* family_name(Family f) {
  switch (f) {
    case Family::Tent: return "tent";
    case Family::Doubling: return "doubling";
    case Family::Logistic: return "logistic";
    case Family::Rotation: return "rotation";
    case Family::Denjoy: return "denjoy";
    case Family::NorthSouth: return "north-south";
    case Family::Identity: return "identity";
    case Family::PiecewiseLinear: return "piecewise-linear";
  }
  return "?";
}

namespace {

SystemSpec base_spec(Family f, Space sp) {
  SystemSpec s;
  s.family = f;
  s.space = sp;
  s.metric = metric_for(sp);
  return s;
}

}  // namespace

SystemSpec make_tent() { return base_spec(Family::Tent, Space::Interval); }

SystemSpec make_doubling() { return base_spec(Family::Doubling, Space::Circle); }

SystemSpec make_logistic(double r) {
  if (!(r > 0.0 && r <= 4.0))
    throw std::invalid_argument("logistic: r must lie in (0,4]");
  SystemSpec s = base_spec(Family::Logistic, Space::Interval);
  s.logistic_r = r;
  return s;
}

SystemSpec make_rotation(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("rotation: alpha must lie in [0,1)");
  SystemSpec s = base_spec(Family::Rotation, Space::Circle);
  s.rotation_alpha = alpha;
  return s;
}

SystemSpec make_denjoy(double alpha, double lambda, double total_gap,
                       int truncation_K) {
  SystemSpec s = base_spec(Family::Denjoy, Space::Circle);
  s.denjoy = std::make_shared<const DenjoyModel>(
      make_denjoy_model(alpha, lambda, total_gap, truncation_K));
  s.rotation_alpha = alpha;
  return s;
}

SystemSpec make_north_south(double sink, double source, double contraction) {
  if (!(contraction > 0.0 && contraction < 1.0))
    throw std::invalid_argument("north-south: contraction must lie in (0,1)");
  if (!space_contains(Space::Circle, sink) ||
      !space_contains(Space::Circle, source))
    throw std::invalid_argument("north-south: fixed points must lie in [0,1)");
  // The sin-shaped displacement vanishes exactly at source and its antipode.
  const Metric arc{MetricKind::CircleArc};
  if (std::abs(distance(arc, sink, source) - 0.5) > 1e-12)
    throw std::invalid_argument(
        "north-south: sink must be antipodal to source (sink = source + 1/2)");
  SystemSpec s = base_spec(Family::NorthSouth, Space::Circle);
  s.ns_sink = sink;
  s.ns_source = source;
  s.ns_contraction = contraction;
  return s;
}

SystemSpec make_identity(Space space) { return base_spec(Family::Identity, space); }

SystemSpec make_piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2)
    throw std::invalid_argument("piecewise-linear: need at least two knots");
  if (knots.front().first != 0.0 || knots.back().first != 1.0)
    throw std::invalid_argument("piecewise-linear: knots must span [0,1]");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i].first < knots[i + 1].first))
      throw std::invalid_argument("piecewise-linear: knot abscissae must increase");
  for (const auto& [x, y] : knots)
    if (!(y >= 0.0 && y <= 1.0))
      throw std::invalid_argument("piecewise-linear: knot values must lie in [0,1]");
  SystemSpec s = base_spec(Family::PiecewiseLinear, Space::Interval);
  s.knots = std::move(knots);
  return s;
}

namespace {

double piecewise_value(const std::vector<std::pair<double, double>>& knots,
                       double x) {
  auto it = std::upper_bound(
      knots.begin(), knots.end(), x,
      [](double v, const auto& k) { return v < k.first; });
  if (it == knots.begin()) return knots.front().second;
  if (it == knots.end()) return knots.back().second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (x - lo.first) / (hi.first - lo.first);
  const double y = lo.second + w * (hi.second - lo.second);
  return std::clamp(y, 0.0, 1.0);
}

}  // namespace

double evaluate(const SystemSpec& s, double x) {
  if (!space_contains(s.space, x))
    throw std::invalid_argument("evaluate: point outside the system's space");
  switch (s.family) {
    case Family::Tent:
      return 1.0 - std::abs(2.0 * x - 1.0);
    case Family::Doubling: {
      const double y = 2.0 * x;
      return y >= 1.0 ? y - 1.0 : y;
    }
    case Family::Logistic:
      return s.logistic_r * x * (1.0 - x);
    case Family::Rotation: {
      const double y = x + s.rotation_alpha;
      return y >= 1.0 ? y - 1.0 : y;
    }
    case Family::Denjoy:
      return denjoy_evaluate(*s.denjoy, x);
    case Family::NorthSouth: {
      const double u = x - s.ns_source;
      const double disp = s.ns_contraction / (2.0 * std::numbers::pi) *
                          std::sin(2.0 * std::numbers::pi * u);
      return wrap_unit(x + disp);
    }
    case Family::Identity:
      return x;
    case Family::PiecewiseLinear:
      return piecewise_value(s.knots, x);
  }
  throw std::logic_error("evaluate: unknown family");
}

namespace {

bool needs_low_bit_refresh(Family f) {
  switch (f) {
    case Family::Tent:
    case Family::Doubling:
    case Family::Logistic:
    case Family::PiecewiseLinear:
      return true;
    default:
      return false;
  }
}

double jitter_low_bits(Space space, double y) {
  const auto bits = std::bit_cast<std::uint64_t>(y);
  const double u = rng::to_unit(rng::splitmix64(bits));
  double z = y + (u - 0.5) * 0x1.0p-39;
  if (space == Space::Circle) return wrap_unit(z);
  if (z < 0.0) z = -z;
  if (z > 1.0) z = 2.0 - z;
  return z;
}

}  // namespace

double statistical_step(const SystemSpec& s, double x) {
  const double y = evaluate(s, x);
  return needs_low_bit_refresh(s.family) ? jitter_low_bits(s.space, y) : y;
}

Orbit orbit(const SystemSpec& s, double x0, int n) {
  if (n < 0) throw std::invalid_argument("orbit: n must be >= 0");
  Orbit o;
  o.x0 = x0;
  o.points.reserve(static_cast<std::size_t>(n) + 1);
  o.points.push_back(x0);
  double x = x0;
  for (int i = 0; i < n; ++i) {
    x = evaluate(s, x);
    o.points.push_back(x);
  }
  return o;
}

bool is_circle_homeomorphism(const SystemSpec& s) {
  switch (s.family) {
    case Family::Rotation:
    case Family::Denjoy:
    case Family::NorthSouth:
      return true;
    case Family::Identity:
      return s.space == Space::Circle;
    default:
      return false;
  }
}

double rotation_number_estimate(const SystemSpec& s, double x0, long iterates) {
  if (!is_circle_homeomorphism(s))
    throw std::invalid_argument(
        "rotation_number_estimate: system is not a circle homeomorphism");
  if (iterates < 1)
    throw std::invalid_argument("rotation_number_estimate: need iterates >= 1");
  double x = canonicalize(s.space, x0);
  double sum = 0.0, comp = 0.0;  // Kahan
  for (long i = 0; i < iterates; ++i) {
    const double y = evaluate(s, x);
    double d = y - x;
    if (d < 0.0) d += 1.0;
    const double t = d - comp;
    const double next = sum + t;
    comp = (next - sum) - t;
    sum = next;
    x = y;
  }
  return wrap_unit(sum / static_cast<double>(iterates));
}

// ---- text form ------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("system: bad numeric value for '" + key + "'");
  }
}

}  // namespace

std::string format_system(const SystemSpec& s) {
  std::string out = "family=";
  out += family_name(s.family);
  switch (s.family) {
    case Family::Logistic:
      out += " r=" + fmt_double(s.logistic_r);
      break;
    case Family::Rotation:
      out += " alpha=" + fmt_double(s.rotation_alpha);
      break;
    case Family::Denjoy:
      out += " alpha=" + fmt_double(s.denjoy->alpha);
      out += " lambda=" + fmt_double(s.denjoy->lambda);
      out += " total_gap=" + fmt_double(s.denjoy->total_gap);
      out += " K=" + std::to_string(s.denjoy->truncation_K);
      break;
    case Family::NorthSouth:
      out += " sink=" + fmt_double(s.ns_sink);
      out += " source=" + fmt_double(s.ns_source);
      out += " contraction=" + fmt_double(s.ns_contraction);
      break;
    case Family::Identity:
      out += std::string(" space=") + space_name(s.space);
      break;
    case Family::PiecewiseLinear: {
      out += " knots=";
      for (std::size_t i = 0; i < s.knots.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(s.knots[i].first) + ":" + fmt_double(s.knots[i].second);
      }
      break;
    }
    default:
      break;
  }
  return out;
}

SystemSpec parse_system(const std::string& text) {
  auto toks = split_ws(text);
  if (toks.empty()) throw std::invalid_argument("system: empty specification");

  std::string family;
  std::vector<std::pair<std::string, std::string>> kv;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos) {
      if (i == 0) {
        family = toks[i];  // bare family shorthand, e.g. "tent"
        continue;
      }
      throw std::invalid_argument("system: expected key=value, got '" + toks[i] + "'");
    }
    kv.emplace_back(toks[i].substr(0, eq), toks[i].substr(eq + 1));
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    for (auto& [k, v] : kv)
      if (k == key) {
        k.clear();  // mark consumed
        return v;
      }
    return std::nullopt;
  };
  if (const auto f = take("family")) family = *f;
  if (family.empty()) throw std::invalid_argument("system: missing family");

  SystemSpec s;
  if (family == "tent") {
    s = make_tent();
  } else if (family == "doubling") {
    s = make_doubling();
  } else if (family == "logistic") {
    double r = 4.0;
    if (const auto v = take("r")) r = parse_double(*v, "r");
    s = make_logistic(r);
  } else if (family == "rotation") {
    double alpha = 0.0;
    if (const auto v = take("alpha")) alpha = parse_double(*v, "alpha");
    s = make_rotation(alpha);
  } else if (family == "denjoy") {
    double alpha = 0.6180339887498949, lambda = 0.5, total_gap = 0.5;
    int K = 40;
    if (const auto v = take("alpha")) alpha = parse_double(*v, "alpha");
    if (const auto v = take("lambda")) lambda = parse_double(*v, "lambda");
    if (const auto v = take("total_gap")) total_gap = parse_double(*v, "total_gap");
    if (const auto v = take("K")) K = static_cast<int>(parse_double(*v, "K"));
    s = make_denjoy(alpha, lambda, total_gap, K);
  } else if (family == "north-south") {
    double sink = 0.75, source = 0.25, contraction = 0.5;
    if (const auto v = take("sink")) sink = parse_double(*v, "sink");
    if (const auto v = take("source")) source = parse_double(*v, "source");
    if (const auto v = take("contraction"))
      contraction = parse_double(*v, "contraction");
    s = make_north_south(sink, source, contraction);
  } else if (family == "identity") {
    Space sp = Space::Interval;
    if (const auto v = take("space")) {
      if (*v == "circle") sp = Space::Circle;
      else if (*v == "interval") sp = Space::Interval;
      else throw std::invalid_argument("system: unknown space '" + *v + "'");
    }
    s = make_identity(sp);
  } else if (family == "piecewise-linear") {
    const auto v = take("knots");
    if (!v) throw std::invalid_argument("piecewise-linear: missing knots");
    std::vector<std::pair<double, double>> knots;
    std::string item;
    std::istringstream in(*v);
    while (std::getline(in, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("piecewise-linear: knots must be x:y pairs");
      knots.emplace_back(parse_double(item.substr(0, colon), "knots"),
                         parse_double(item.substr(colon + 1), "knots"));
    }
    s = make_piecewise_linear(std::move(knots));
  } else {
    throw std::invalid_argument("system: unknown family '" + family + "'");
  }

  for (const auto& [k, v] : kv)
    if (!k.empty())
      throw std::invalid_argument("system: unknown key '" + k + "' for family " +
                                  family);
  return s;
}

std::vector<std::string> system_catalog() {
  return {
      "tent                 interval   f(x) = 1 - |2x - 1|",
      "doubling             circle     f(x) = 2x mod 1",
      "logistic r=<r>       interval   f(x) = r x (1 - x), r in (0,4]",
      "rotation alpha=<a>   circle     f(x) = x + a mod 1",
      "denjoy alpha=<a> lambda=<l> total_gap=<g> K=<K>"
      "   circle     gap-inserted circle homeomorphism",
      "north-south sink=<s+1/2> source=<s> contraction=<c>"
      "   circle     two hyperbolic fixed points",
      "identity space=<interval|circle>   f(x) = x",
      "piecewise-linear knots=x0:y0,...   interval   linear interpolation",
  };
}

}  // namespace ergolab
