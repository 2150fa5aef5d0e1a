#include "ergolab/measure.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

SamplerSpec SamplerSpec::lebesgue() { return SamplerSpec{}; }

SamplerSpec SamplerSpec::denjoy_pushforward() {
  SamplerSpec s;
  s.kind = SamplerKind::DenjoyPushforward;
  return s;
}

SamplerSpec SamplerSpec::birkhoff(double x0, long burn_in) {
  SamplerSpec s;
  s.kind = SamplerKind::Birkhoff;
  s.birkhoff_x0 = x0;
  s.birkhoff_burn_in = burn_in;
  return s;
}

SamplerSpec SamplerSpec::atomic(std::vector<double> atoms) {
  if (atoms.empty()) throw std::invalid_argument("atomic sampler: no atoms");
  SamplerSpec s;
  s.kind = SamplerKind::Atomic;
  s.atoms = std::move(atoms);
  return s;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_sampler(const SamplerSpec& s) {
  switch (s.kind) {
    case SamplerKind::Lebesgue: return "lebesgue";
    case SamplerKind::DenjoyPushforward: return "denjoy-pushforward";
    case SamplerKind::Birkhoff: {
      std::string out = "birkhoff x0=" + fmt_double(s.birkhoff_x0);
      if (s.birkhoff_burn_in != 0)
        out += " burn_in=" + std::to_string(s.birkhoff_burn_in);
      return out;
    }
    case SamplerKind::Atomic: {
      std::string out = "atomic ";
      for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(s.atoms[i]);
      }
      return out;
    }
    case SamplerKind::Imported: return "imported";
  }
  return "?";
}

SamplerSpec parse_sampler(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  if (head == "lebesgue") return SamplerSpec::lebesgue();
  if (head == "denjoy-pushforward") return SamplerSpec::denjoy_pushforward();
  if (head == "birkhoff") {
    double x0 = 0.2;
    long burn = 0;
    std::string tok;
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("birkhoff sampler: expected key=value");
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "x0") x0 = std::stod(val);
      else if (key == "burn_in") burn = std::stol(val);
      else throw std::invalid_argument("birkhoff sampler: unknown key '" + key + "'");
    }
    return SamplerSpec::birkhoff(x0, burn);
  }
  if (head == "atomic") {
    std::string rest;
    in >> rest;
    if (rest.empty()) throw std::invalid_argument("atomic sampler: missing atom list");
    std::vector<double> atoms;
    std::istringstream items(rest);
    std::string item;
    while (std::getline(items, item, ',')) atoms.push_back(std::stod(item));
    return SamplerSpec::atomic(std::move(atoms));
  }
  throw std::invalid_argument("unknown sampler '" + head + "'");
}

EmpiricalMeasure sample_measure(const SamplerSpec& sampler, const SystemSpec& system,
                                Eigen::Index size, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("sample_measure: size must be >= 1");
  EmpiricalMeasure mu;
  mu.space = system.space;
  mu.sampler = sampler;
  mu.seed = seed;

  switch (sampler.kind) {
    case SamplerKind::Lebesgue: {
      mu.points.resize(size);
      for (Eigen::Index i = 0; i < size; ++i)
        mu.points[i] = rng::uniform(seed, rng::kLebesgueStream,
                                    static_cast<std::uint64_t>(i));
      mu.weights = Eigen::ArrayXd::Constant(size, 1.0 / static_cast<double>(size));
      break;
    }
    case SamplerKind::DenjoyPushforward: {
      if (system.family != Family::Denjoy)
        throw std::invalid_argument(
            "denjoy-pushforward sampler requires a denjoy system");
      mu.points.resize(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        const double t = rng::uniform(seed, rng::kPushforwardStream,
                                      static_cast<std::uint64_t>(i));
        mu.points[i] = denjoy_phi(*system.denjoy, t);
      }
      mu.weights = Eigen::ArrayXd::Constant(size, 1.0 / static_cast<double>(size));
      break;
    }
    case SamplerKind::Birkhoff: {
      mu.points.resize(size);
      double x = canonicalize(system.space, sampler.birkhoff_x0);
      for (long i = 0; i < sampler.birkhoff_burn_in; ++i)
        x = statistical_step(system, x);
      for (Eigen::Index i = 0; i < size; ++i) {
        mu.points[i] = x;
        x = statistical_step(system, x);
      }
      mu.weights = Eigen::ArrayXd::Constant(size, 1.0 / static_cast<double>(size));
      break;
    }
    case SamplerKind::Atomic: {
      const auto n = static_cast<Eigen::Index>(sampler.atoms.size());
      mu.points.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) mu.points[i] = sampler.atoms[static_cast<std::size_t>(i)];
      mu.weights = Eigen::ArrayXd::Constant(n, 1.0 / static_cast<double>(n));
      break;
    }
    case SamplerKind::Imported:
      throw std::invalid_argument("imported measures come from read_cloud_csv");
  }

  for (Eigen::Index i = 0; i < mu.points.size(); ++i)
    if (!space_contains(mu.space, mu.points[i]))
      throw std::invalid_argument("sample_measure: sampled point outside space");
  return mu;
}

bool IntervalSet::contains(Space space, double x) const {
  if (space == Space::Circle && lo > hi) {  // arc through 0
    return closed ? (x >= lo || x <= hi) : (x > lo || x < hi);
  }
  return closed ? (x >= lo && x <= hi) : (x > lo && x < hi);
}

namespace {

double kahan_masked_sum(const Eigen::ArrayXd& weights,
                        const std::function<bool(Eigen::Index)>& keep) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!keep(i)) continue;
    const double t = weights[i] - comp;
    const double next = sum + t;
    comp = (next - sum) - t;
    sum = next;
  }
  return sum;
}

MassEstimate make_estimate(double p, const EmpiricalMeasure& mu) {
  MassEstimate e;
  e.value = std::min(std::max(p, 0.0), 1.0);
  e.sample_size = mu.size();
  const double var = std::max(e.value * (1.0 - e.value), 0.0);
  e.standard_error = std::sqrt(var * mu.weight_l2());
  return e;
}

}  // namespace

MassEstimate set_mass(const EmpiricalMeasure& mu, const IntervalSet& set) {
  const double p = kahan_masked_sum(mu.weights, [&](Eigen::Index i) {
    return set.contains(mu.space, mu.points[i]);
  });
  return make_estimate(p, mu);
}

MassEstimate set_mass(const EmpiricalMeasure& mu,
                      const std::function<bool(double)>& member) {
  const double p = kahan_masked_sum(
      mu.weights, [&](Eigen::Index i) { return member(mu.points[i]); });
  return make_estimate(p, mu);
}

namespace detail {

Eigen::MatrixXd bowen_mass_matrix(const SystemSpec& system, const EmpiricalMeasure& mu,
                                  const std::vector<double>& centers, int n_max,
                                  double delta) {
  if (n_max < 1) throw std::invalid_argument("bowen masses: n_max must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("bowen masses: delta must be > 0");
  const auto n_centers = static_cast<Eigen::Index>(centers.size());
  const Eigen::Index n_points = mu.size();

  Eigen::MatrixXd masses(n_max, n_centers);

  std::vector<double> cloud(mu.points.data(), mu.points.data() + n_points);
  std::vector<double> ctr(centers);
  for (double c : ctr)
    if (!space_contains(system.space, c))
      throw std::invalid_argument("bowen masses: center outside space");

  // alive[c] holds indices of cloud points still inside the Bowen ball of
  // centers[c]; refcount[j] counts the lists containing j so that globally
  // dead points stop being iterated.
  std::vector<std::vector<Eigen::Index>> alive(static_cast<std::size_t>(n_centers));
  std::vector<int> refcount(static_cast<std::size_t>(n_points), 0);

  const Metric& metric = system.metric;

  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      for (Eigen::Index j = 0; j < n_points; ++j)
        if (refcount[static_cast<std::size_t>(j)] > 0)
          cloud[static_cast<std::size_t>(j)] =
              evaluate(system, cloud[static_cast<std::size_t>(j)]);
      for (auto& c : ctr) c = evaluate(system, c);
    }
    for (Eigen::Index c = 0; c < n_centers; ++c) {
      auto& list = alive[static_cast<std::size_t>(c)];
      const double fc = ctr[static_cast<std::size_t>(c)];
      if (n == 1) {
        list.reserve(64);
        for (Eigen::Index j = 0; j < n_points; ++j) {
          if (distance(metric, cloud[static_cast<std::size_t>(j)], fc) <= delta) {
            list.push_back(j);
            ++refcount[static_cast<std::size_t>(j)];
          }
        }
      } else {
        std::size_t out = 0;
        for (std::size_t idx = 0; idx < list.size(); ++idx) {
          const Eigen::Index j = list[idx];
          if (distance(metric, cloud[static_cast<std::size_t>(j)], fc) <= delta) {
            list[out++] = j;
          } else {
            --refcount[static_cast<std::size_t>(j)];
          }
        }
        list.resize(out);
      }
      double sum = 0.0, comp = 0.0;
      for (const Eigen::Index j : list) {
        const double t = mu.weights[j] - comp;
        const double next = sum + t;
        comp = (next - sum) - t;
        sum = next;
      }
      masses(n - 1, c) = sum;
    }
  }
  return masses;
}

}  // namespace detail

MassEstimate bowen_ball_mass(const EmpiricalMeasure& mu, const SystemSpec& system,
                             double center, int n, double delta) {
  const Eigen::MatrixXd m = detail::bowen_mass_matrix(system, mu, {center}, n, delta);
  return make_estimate(m(n - 1, 0), mu);
}

double pushforward_discrepancy(const EmpiricalMeasure& mu, const SystemSpec& system,
                               const std::vector<IntervalSet>& test_intervals) {
  for (const auto& a : test_intervals)
    if (a.lo < 0.0 || a.lo > 1.0 || a.hi < 0.0 || a.hi > 1.0)
      throw std::invalid_argument("pushforward_discrepancy: interval outside space");

  Eigen::ArrayXd image(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    image[i] = evaluate(system, mu.points[i]);

  double worst = 0.0;
  for (const auto& a : test_intervals) {
    const double direct = kahan_masked_sum(mu.weights, [&](Eigen::Index i) {
      return a.contains(mu.space, mu.points[i]);
    });
    const double pulled = kahan_masked_sum(mu.weights, [&](Eigen::Index i) {
      return a.contains(mu.space, image[i]);
    });
    worst = std::max(worst, std::abs(direct - pulled));
  }
  return worst;
}

void write_cloud_csv(std::ostream& out, const EmpiricalMeasure& mu) {
  out << "point,weight\n";
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    out << fmt_double(mu.points[i]) << ',' << fmt_double(mu.weights[i]) << '\n';
}

EmpiricalMeasure read_cloud_csv(std::istream& in, Space space) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("cloud csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "point,weight")
    throw std::invalid_argument("cloud csv: missing 'point,weight' header");
  std::vector<double> pts, wts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("cloud csv: bad row at line " +
                                  std::to_string(line_no));
    pts.push_back(std::stod(line.substr(0, comma)));
    wts.push_back(std::stod(line.substr(comma + 1)));
  }
  if (pts.empty()) throw std::invalid_argument("cloud csv: no rows");
  EmpiricalMeasure mu;
  mu.space = space;
  mu.sampler.kind = SamplerKind::Imported;
  mu.points = Eigen::Map<Eigen::ArrayXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
  mu.weights = Eigen::Map<Eigen::ArrayXd>(wts.data(), static_cast<Eigen::Index>(wts.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (!space_contains(space, mu.points[i]) || mu.weights[i] < 0.0)
      throw std::invalid_argument("cloud csv: invalid point or weight");
  const double total = mu.weights.sum();
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("cloud csv: weights must sum to 1");
  return mu;
}

}  // namespace ergolab
