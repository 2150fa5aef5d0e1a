// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ergolab/entropy.hpp"
#include "ergolab/experiment.hpp"
#include "ergolab/expansivity.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/structure.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const double kGolden = 0.6180339887498949;
int g_failures = 0;

void criterion(int index, const std::string& label,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", index,
              label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

}  // namespace

int main() {
  // ---- 1: tent local entropy ------------------------------------------------
  criterion(1, "tent local entropy slope in [0.62, 0.77], under 60 s", [](std::string& d) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemSpec tent = make_tent();
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), tent, 100000, 42);
    ExpansivityOptions opt;
    opt.centers = 200;
    opt.n_max = 14;
    opt.fit_window = {4, 12};
    opt.seed = 42;
    const ExpansivityReport r = expansivity_report(tent, mu, 0.05, opt);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream msg;
    msg << "median=" << r.decay_rate_median << " wall=" << seconds << "s";
    d = msg.str();
    return r.decay_rate_median >= 0.62 && r.decay_rate_median <= 0.77 && seconds < 60.0;
  });

  // ---- 2: tent expansivity verdict -------------------------------------------
  ExpansivityReport tent_report;
  criterion(2, "tent verdict expansive with full x_delta fraction", [&](std::string& d) {
    const SystemSpec tent = make_tent();
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), tent, 100000, 42);
    ExpansivityOptions opt;
    opt.centers = 200;
    opt.n_max = 14;
    opt.threshold = 1e-3;
    opt.fit_window = {4, 12};
    opt.seed = 42;
    tent_report = expansivity_report(tent, mu, 0.05, opt);
    std::ostringstream msg;
    msg << "verdict=" << verdict_name(tent_report.verdict)
        << " fraction=" << tent_report.x_delta_fraction
        << " median=" << tent_report.decay_rate_median;
    d = msg.str();
    return tent_report.verdict == Verdict::Expansive &&
           tent_report.x_delta_fraction == 1.0 &&
           tent_report.decay_rate_median >= 0.6 && tent_report.decay_rate_median <= 0.8;
  });

  // ---- 3: irrational rotation is not expansive -------------------------------
  criterion(3, "rotation masses flat in [0.08,0.12], slope and h_top below 0.02",
            [](std::string& d) {
    const SystemSpec rot = make_rotation(kGolden);
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), rot, 100000, 42);
    ExpansivityOptions opt;
    opt.centers = 200;
    opt.n_max = 20;
    opt.fit_window = {4, 12};
    opt.seed = 42;
    const ExpansivityReport r = expansivity_report(rot, mu, 0.05, opt);
    bool masses_ok = true;
    for (Eigen::Index c = 0; c < r.masses.cols() && masses_ok; ++c)
      for (Eigen::Index n = 0; n < r.masses.rows() && masses_ok; ++n)
        masses_ok = r.masses(n, c) >= 0.08 && r.masses(n, c) <= 0.12;
    double worst_rate = 0.0;
    for (const double rate : r.decay_rates)
      if (std::isfinite(rate)) worst_rate = std::max(worst_rate, std::abs(rate));
    const EntropyEstimate est =
        topological_entropy_estimate(rot, {0.1, 0.05}, 1, 12, 100000);
    std::ostringstream msg;
    msg << "verdict=" << verdict_name(r.verdict) << " worst|slope|=" << worst_rate
        << " h_top=" << est.h_top_estimate;
    d = msg.str();
    return masses_ok && r.verdict == Verdict::NotExpansive && worst_rate <= 0.02 &&
           est.h_top_estimate <= 0.02;
  });

  // ---- 4: Denjoy expansive with zero entropy ----------------------------------
  criterion(4, "denjoy invariant measure expansive at a quarter gap, h_top <= 0.05",
            [](std::string& d) {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "ergolab_acceptance_denjoy";
    std::filesystem::remove_all(dir);
    std::ostringstream cfg;
    cfg << "experiment = denjoy-suite\nseed = 42\nexpect = expansive\n"
        << "expect_h_top_max = 0.05\nout = " << dir.string() << "\n";
    const ReportBundle bundle = run_experiment(parse_config(cfg.str()));
    d = bundle.ok() ? "suite expectations met" : bundle.expect_mismatches.front();
    std::filesystem::remove_all(dir);
    return bundle.ok();
  });

  // ---- 5: stable classes are null for the tent map ----------------------------
  criterion(5, "tent stable-class masses all below 0.01", [](std::string& d) {
    const SystemSpec tent = make_tent();
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), tent, 20000, 42);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double p = rng::uniform(42, rng::kAnchorStream, static_cast<std::uint64_t>(i));
      worst = std::max(worst, stable_class_mass(tent, mu, p, 200, 1e-3).mass.value);
    }
    std::ostringstream msg;
    msg << "worst mass=" << worst;
    d = msg.str();
    return worst < 0.01;
  });

  // ---- 6: countably many stable classes, zero entropy -------------------------
  criterion(6, "north-south: 2 classes, h_top <= 0.02, no recurrence, stable poles",
            [](std::string& d) {
    const SystemSpec ns = make_north_south();
    std::vector<double> anchors;
    for (int j = 0; j < 1000; ++j) anchors.push_back(j / 1000.0);
    const std::vector<LimitClass> classes = limit_class_census(ns, anchors, 1000, 1e-6);
    const EntropyEstimate est =
        topological_entropy_estimate(ns, {0.1, 0.05}, 40, 80, 20000);
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), ns, 10000, 42);
    const double rec = recurrence_fraction(ns, mu, 1000, 1e-3);
    const double lyap =
        lyapunov_violation_density(ns, {ns.ns_source, ns.ns_sink}, 0.1, 0.4, 100);
    std::ostringstream msg;
    msg << "classes=" << classes.size() << " h_top=" << est.h_top_estimate
        << " recurrence=" << rec << " lyapunov=" << lyap;
    d = msg.str();
    return classes.size() == 2 && est.h_top_estimate <= 0.02 && rec <= 0.01 &&
           lyap == 0.0;
  });

  // ---- 7: scrambled pairs and greedy scrambled sets ---------------------------
  criterion(7, "tent scrambled pairs >= 90%, greedy set >= 10, rotation control = 1",
            [](std::string& d) {
    const SystemSpec tent = make_tent();
    int successes = 0;
    for (int i = 0; i < 100; ++i) {
      const double x = rng::uniform(42, rng::kPairStream, static_cast<std::uint64_t>(2 * i));
      const double y = rng::uniform(42, rng::kPairStream, static_cast<std::uint64_t>(2 * i + 1));
      const ScrambledStats st = scrambled_pair_stats(tent, x, y, 5000, 0);
      if (st.liminf_est < 0.01 && st.limsup_est > 0.25) ++successes;
    }
    std::vector<double> candidates;
    for (int i = 0; i < 200; ++i)
      candidates.push_back(rng::uniform(42, rng::kCandidateStream, static_cast<std::uint64_t>(i)));
    const std::size_t tent_set =
        greedy_scrambled_set(tent, candidates, 0.25, 5000).size();
    const std::size_t rot_set =
        greedy_scrambled_set(make_rotation(kGolden), candidates, 0.25, 5000).size();
    std::ostringstream msg;
    msg << "successes=" << successes << "/100 tent_set=" << tent_set
        << " rotation_set=" << rot_set;
    d = msg.str();
    return successes >= 90 && tent_set >= 10 && rot_set == 1;
  });

  // ---- 8: wandering intervals --------------------------------------------------
  criterion(8, "denjoy gap wanders through 1225 disjoint pairs; tent intervals collide",
            [](std::string& d) {
    const SystemSpec dj = make_denjoy();
    const auto& g0 = dj.denjoy->gap_by_k(0);
    const WanderingVerdict wd =
        wandering_interval_verdict(dj, g0.left, g0.left + g0.length, 50);
    const bool denjoy_ok =
        wd.verdict == WanderingKind::Wandering && !wd.first_collision.has_value();

    // independent disjointness count: iterate the gap endpoints directly and
    // test all C(50,2) = 1225 arc pairs
    std::vector<std::pair<double, double>> arcs;
    double lo = g0.left, hi = g0.left + g0.length;
    for (int n = 0; n < 50; ++n) {
      arcs.emplace_back(lo, hi);
      lo = evaluate(dj, lo);
      hi = evaluate(dj, hi);
    }
    int disjoint_pairs = 0;
    for (std::size_t m = 1; m < arcs.size(); ++m)
      for (std::size_t n = 0; n < m; ++n) {
        const bool overlap =
            arcs[n].first <= arcs[m].second && arcs[m].first <= arcs[n].second;
        if (!overlap) ++disjoint_pairs;
      }
    const bool all_disjoint = disjoint_pairs == 1225;

    const SystemSpec tent = make_tent();
    bool tent_ok = true;
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{
             {0.4, 0.6}, {0.1, 0.2}, {0.72, 0.77}}) {
      const WanderingVerdict wt = wandering_interval_verdict(tent, a, b, 12);
      tent_ok = tent_ok && wt.verdict == WanderingKind::NotWandering &&
                wt.first_collision.has_value() && wt.first_collision->second <= 10;
    }

    const EmpiricalMeasure mu =
        sample_measure(SamplerSpec::denjoy_pushforward(), dj, 100000, 42);
    const MassEstimate interior =
        set_mass(mu, IntervalSet{g0.left, g0.left + g0.length, /*closed=*/false});

    std::ostringstream msg;
    msg << "denjoy=" << wandering_name(wd.verdict) << " disjoint_pairs="
        << disjoint_pairs << "/1225 gap_interior_mass=" << interior.value;
    d = msg.str();
    return denjoy_ok && all_disjoint && tent_ok && interior.value == 0.0;
  });

  // ---- 9: Monte-Carlo masses match the exact grid oracle ----------------------
  criterion(9, "bowen masses within 3 binomial sigma of the grid oracle (>= 95/100)",
            [](std::string& d) {
    int within = 0;
    for (const bool use_tent : {true, false}) {
      const SystemSpec s = use_tent ? make_tent() : make_doubling();
      const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), s, 100000, 42);
      for (int c = 0; c < 50; ++c) {
        const double x = rng::uniform(42, 1234, static_cast<std::uint64_t>(2 * c));
        const int n =
            1 + static_cast<int>(rng::uniform(42, 1234, static_cast<std::uint64_t>(2 * c + 1)) * 10);
        const MassEstimate est = bowen_ball_mass(mu, s, x, n, 0.05);
        const double oracle = oracles::grid_bowen_mass(s, x, n, 0.05, 100000);
        const double se = std::sqrt(std::max(oracle * (1.0 - oracle), 1e-12) / 100000.0);
        if (std::abs(est.value - oracle) <= 3.0 * se) ++within;
      }
    }
    std::ostringstream msg;
    msg << "within=" << within << "/100";
    d = msg.str();
    return within >= 95;
  });

  // ---- 10: half-delta cross-check ----------------------------------------------
  criterion(10, "expansive at delta on sampled centers, still expansive at delta/2 on a grid",
            [&](std::string& d) {
    if (tent_report.verdict != Verdict::Expansive) {
      d = "criterion 2 report not expansive";
      return false;
    }
    const SystemSpec tent = make_tent();
    const EmpiricalMeasure mu = sample_measure(SamplerSpec::lebesgue(), tent, 100000, 42);
    ExpansivityOptions opt;
    opt.centers = 200;
    opt.n_max = 14;
    opt.threshold = 1e-3;
    opt.fit_window = {4, 12};
    opt.seed = 42;
    opt.grid_centers = true;
    const ExpansivityReport half = expansivity_report(tent, mu, 0.025, opt);
    std::ostringstream msg;
    msg << "half-delta verdict=" << verdict_name(half.verdict)
        << " fraction=" << half.x_delta_fraction;
    d = msg.str();
    return half.verdict == Verdict::Expansive;
  });

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
