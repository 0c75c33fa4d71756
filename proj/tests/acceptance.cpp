// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "mar/mar.hpp"
#include "support.hpp"

namespace {

using namespace mar;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string load_scenario(const std::string& name) {
  std::ifstream in(std::string(MAR_SCENARIO_DIR) + "/" + name + ".json");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome classic_bound() {
  const auto t0 = Clock::now();
  const BoundsReport r = poa_bounds(1.0, 1.0);
  const double elapsed = seconds_since(t0);
  const double err = std::abs(r.bound_thm1 - 4.0 / 3.0);
  return {err <= 1e-12 && elapsed < 1e-3,
          "bound_t1=" + fmt("%.15g", r.bound_thm1) + " err=" + fmt("%.2g", err) + " time=" + fmt("%.3g", elapsed) + "s"};
}

Outcome worked_bounds() {
  const BoundsReport r = poa_bounds(2.0, 1.0);
  const bool ok = std::abs(r.bound_thm1 - 8.0 / 3.0) <= 1e-12 && r.bound_thm2 &&
                  std::abs(*r.bound_thm2 - 2.0) <= 1e-12 && std::abs(r.bound_combined - 2.0) <= 1e-12;
  return {ok, "t1=" + fmt("%.15g", r.bound_thm1) + " t2=" + (r.bound_thm2 ? fmt("%.15g", *r.bound_thm2) : "absent") +
                  " combined=" + fmt("%.15g", r.bound_combined)};
}

Outcome bicriteria_example() {
  const double f = poa_bounds(3.0, 4.0).bicriteria_factor;
  return {std::abs(f - 2.60498) <= 0.005, "1+3xi(4)=" + fmt("%.6f", f)};
}

Outcome monotonicity_demo() {
  const Scenario sc = parse_scenario(*builtin_demo("paper-monotonicity"));
  const FlowVector z = FlowVector::from_interleaved(sc.probe.z);
  const FlowVector q = FlowVector::from_interleaved(sc.probe.q);
  const double probe = monotonicity_probe(*sc.network, z, q);
  const double quad = jacobian_quadratic_form(*sc.network, z, sc.probe.v);
  return {probe == -3.0 && quad == -1.0, "probe=" + fmt("%.17g", probe) + " vJv=" + fmt("%.17g", quad)};
}

Outcome lemma_suites() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long ratio_fail = 0, opt_fail = 0, beta_cap_fail = 0, beta_match_fail = 0;
  double worst_rel = 0.0;
  constexpr int kSamples = 10000;
  for (auto model : {CapacityModel::kPlatoonBehindAny, CapacityModel::kPlatoonBehindAutonomous}) {
    for (int i = 0; i < kSamples; ++i) {
      const double sigma = std::vector<double>{1, 2, 3, 4}[i % 4];
      const Road r = testing::random_road(rng, 1.0 + 3.0 * u(rng), sigma, model, u(rng) < 0.5);
      const double x = 3 * u(rng), y = 3 * u(rng);
      const double anchor = AggregateCost(r, x, y).anchor();
      double f = 0, g = 0;
      switch (i % 3) {
        case 0:
          g = anchor * u(rng);
          f = g * u(rng);
          break;
        case 1:
          f = anchor * u(rng);
          g = anchor + 3 * u(rng);
          break;
        default:
          f = anchor + 3 * u(rng);
          g = f + 3 * u(rng);
      }
      if (g <= 0.0) g = 1e-3;
      if (!verify_lemma_agg_poa_ratio(r, x, y, std::min(f, g), g)) ++ratio_fail;
      if (!verify_lemma_agg_opt(r, 3 * u(rng), 3 * u(rng))) ++opt_fail;

      const double v = 2 * u(rng), w = 2 * u(rng) + 1e-6;
      const double numeric = beta_road_numeric(r, v, w, sigma);
      const double closed = beta_road_closed_form(r, v, w, sigma);
      if (numeric > road_asymmetry(r) * xi(sigma) + 1e-9) ++beta_cap_fail;
      const double rel = std::abs(numeric - closed) / closed;
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) ++beta_match_fail;
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = ratio_fail == 0 && opt_fail == 0 && beta_cap_fail == 0 && beta_match_fail == 0 && elapsed < 60.0;
  return {ok, "samples/model=" + std::to_string(kSamples) + " ratio_fail=" + std::to_string(ratio_fail) +
                  " opt_fail=" + std::to_string(opt_fail) + " beta_cap_fail=" + std::to_string(beta_cap_fail) +
                  " beta_mismatch=" + std::to_string(beta_match_fail) + " worst_rel=" + fmt("%.2g", worst_rel) +
                  " time=" + fmt("%.1f", elapsed) + "s"};
}

Outcome aggregate_consistency() {
  std::mt19937_64 rng(77);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Network net = build_network(testing::random_instance(rng));
    EquilibriumConfig cfg;
    cfg.seed = i;
    const SolveResult eq = solve_equilibrium(net, cfg);
    const double rel = std::abs(aggregate_social_cost(net, eq.link_flows) - eq.social_cost) / eq.social_cost;
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++failures;
  }
  return {failures == 0, "instances=100 worst_rel=" + fmt("%.2g", worst)};
}

/// Equilibrium with fallbacks: gradient projection from random and uniform
/// starts, then self-regulated averaging.
SolveResult robust_equilibrium(const Network& net, std::uint64_t seed) {
  EquilibriumConfig cfg;
  cfg.seed = seed;
  SolveResult best = solve_equilibrium(net, cfg);
  if (best.converged) return best;
  cfg.start = StartRule::kUniform;
  SolveResult alt = solve_equilibrium(net, cfg);
  if (alt.converged) return alt;
  cfg.step_rule = StepRule::kSelfRegulatedMsa;
  SolveResult msa = solve_equilibrium(net, cfg);
  if (msa.converged) return msa;
  return alt.relative_gap < best.relative_gap ? alt : best;
}

Outcome containment_fuzz() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1000);
  int violations = 0, unconverged = 0, grid_backed = 0;
  double worst_margin = -1e9;
  OptimumConfig oc;
  oc.restarts = 16;
  for (int i = 0; i < 1000; ++i) {
    const Network net = build_network(testing::random_instance(rng));
    const SolveResult eq = robust_equilibrium(net, i);
    if (!eq.converged) {
      ++unconverged;
      continue;
    }
    oc.seed = i;
    const PoaEstimate est = empirical_poa(net, eq, oc);
    const BoundsReport b = poa_bounds(net);
    if (est.oracle == OptimumOracle::kGrid) ++grid_backed;
    worst_margin = std::max(worst_margin, est.ratio - b.bound_combined);
    if (est.ratio > b.bound_combined + 2e-3) {
      ++violations;
      std::fprintf(stderr, "  violation: instance %d ratio %.6f bound %.6f\n", i, est.ratio, b.bound_combined);
    }
  }
  const double elapsed = seconds_since(t0);
  return {violations == 0 && unconverged == 0 && elapsed < 600.0,
          "instances=1000 violations=" + std::to_string(violations) + " unconverged=" + std::to_string(unconverged) +
              " grid_backed=" + std::to_string(grid_backed) + " max(ratio-bound)=" + fmt("%.4f", worst_margin) +
              " time=" + fmt("%.1f", elapsed) + "s"};
}

Outcome tightness_probe() {
  const Report rep = run(parse_scenario(load_scenario("tightness_probe")));
  const Table& best = rep.table("best");
  bool monotone = true;
  double at_two = 0.0;
  std::string series;
  for (std::size_t i = 0; i < best.rows.size(); ++i) {
    const double k = std::get<double>(best.rows[i][best.column("k")]);
    const double v = std::get<double>(best.rows[i][best.column("poa_best")]);
    if (i > 0 && v < std::get<double>(best.rows[i - 1][best.column("poa_best")])) monotone = false;
    if (k == 2.0) at_two = v;
    series += (series.empty() ? "" : " ") + fmt("k=%g:", k) + fmt("%.4f", v);
  }
  return {monotone && at_two >= 1.5 && !rep.soft_failure, series + " (k=2 bound 2)"};
}

Outcome cross_validation() {
  // Optimum: local search against the grid oracle on admissible instances.
  std::mt19937_64 rng(4242);
  int admissible = 0, failures = 0;
  for (int i = 0; i < 300; ++i) {
    const Network net = build_network(testing::random_instance(rng));
    const PathSet paths = enumerate_all_paths(net);
    const auto res = admissible_grid_resolution(net, paths, 1e-2);
    if (!res) continue;
    ++admissible;
    const GridSearchResult grid = grid_search_optimum(net, *res);
    OptimumConfig oc;
    oc.seed = i;
    const SolveResult local = solve_optimum(net, oc);
    if (std::abs(local.social_cost - grid.best.social_cost) > grid.lipschitz_tolerance()) ++failures;
  }

  // Equilibrium: the designated two-road instance against a grid of all
  // class splits at resolution 1e-3, keeping the minimal-gap points.
  const int n = 1000;
  std::vector<std::pair<double, double>> oracle;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> gaps((n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double x0 = double(i) / n, y0 = double(j) / n;
      const double c0 = 1 + (2 * x0 + y0);                    // d = 1, h = 2, h' = 1
      const double c1 = 1 + 2 * ((1 - x0) + (1 - y0));        // h = h' = 2
      const double low = std::min(c0, c1);
      const double gap = (x0 + y0) * (c0 - low) + (2 - x0 - y0) * (c1 - low);
      gaps[i * (n + 1) + j] = gap;
      min_gap = std::min(min_gap, gap);
    }
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (gaps[i * (n + 1) + j] <= min_gap + 1e-9) oracle.emplace_back(double(i) / n, double(j) / n);
  const Network designated = testing::designated_two_road();
  const SolveResult eq = solve_equilibrium(designated);
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& [x0, y0] : oracle)
    nearest = std::min(nearest, std::max(std::abs(eq.link_flows[0].human - x0),
                                         std::abs(eq.link_flows[0].autonomous - y0)));
  return {failures == 0 && admissible > 0 && eq.converged && nearest <= 5e-3,
          "admissible=" + std::to_string(admissible) + " optimum_mismatch=" + std::to_string(failures) +
              " eq_distance=" + fmt("%.2g", nearest) + " oracle_points=" + std::to_string(oracle.size())};
}

Outcome determinism() {
  bool same = true;
  std::string names;
  for (const char* name : {"two_road_poa", "autonomy_sweep", "bicriteria_demand"}) {
    const Scenario sc = parse_scenario(load_scenario(name));
    for (Format f : {Format::kCsv, Format::kJson}) same &= render(run(sc), f) == render(run(sc), f);
    names += std::string(names.empty() ? "" : ",") + name;
  }
  return {same, "scenarios=" + names + " formats=csv,json"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"classic-bound recovery", classic_bound},
      {"worked bound values", worked_bounds},
      {"bicriteria worked example", bicriteria_example},
      {"non-monotonicity demo", monotonicity_demo},
      {"lemma property suites", lemma_suites},
      {"aggregate consistency", aggregate_consistency},
      {"bound containment fuzz", containment_fuzz},
      {"order-optimality probe", tightness_probe},
      {"solver cross-validation", cross_validation},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
