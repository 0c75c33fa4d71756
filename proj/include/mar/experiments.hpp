#pragma once

// Experiment runners behind the command-line tool.  Each run produces a
// Report made of named tables, rendered as CSV (tables separated by a blank
// line, 12 significant digits) or JSON.

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mar/bounds.hpp"
#include "mar/costs.hpp"
#include "mar/equilibrium.hpp"
#include "mar/network.hpp"
#include "mar/optimum.hpp"
#include "mar/scenario.hpp"

namespace mar {

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == col) return i;
    throw Error(ErrorCode::kInvalidParameter, "no column '" + std::string(col) + "' in table " + name);
  }
};

struct Report {
  Experiment experiment = Experiment::kEquilibrium;
  std::vector<Table> tables;
  bool soft_failure = false;
  std::vector<std::string> diagnostics;

  const Table& table(std::string_view name) const {
    for (const Table& t : tables)
      if (t.name == name) return t;
    throw Error(ErrorCode::kInvalidParameter, "no table '" + std::string(name) + "'");
  }
};

enum class Format { kCsv, kJson };

/// Columns of every PoA and sweep row.
inline const std::vector<std::string>& poa_columns() {
  static const std::vector<std::string> cols = {"param",  "value",   "C_eq",     "gap_rel",        "C_opt",
                                                "opt_oracle", "poa_emp", "bound_t1", "bound_t2",
                                                "bound_combined", "k", "sigma", "xi", "flags"};
  return cols;
}

/// Slack allowed between an empirical ratio and the combined bound.
inline constexpr double kPoaSlack = 2e-3;

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_number(v);
      return v;
    }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

inline Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

inline Table metric_table(std::string name) { return Table{std::move(name), {"metric", "value"}, {}}; }

inline void add_metric(Table& t, std::string key, Cell value) { t.rows.push_back({std::move(key), std::move(value)}); }

inline std::string_view model_name(CapacityModel m) {
  return m == CapacityModel::kPlatoonBehindAny ? "1" : "2";
}

inline Table road_flow_table(const Network& net, const FlowVector& z) {
  Table t{"roads", {"road", "name", "from", "to", "human", "autonomous", "total", "cost"}, {}};
  for (std::size_t i = 0; i < net.num_roads(); ++i) {
    const Road& r = net.road(i);
    t.rows.push_back({static_cast<long long>(i), r.name, net.nodes()[r.tail], net.nodes()[r.head], z[i].human,
                      z[i].autonomous, z[i].total(), link_cost(r, z[i].human, z[i].autonomous)});
  }
  return t;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const std::string& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

/// Network with one sweep parameter applied.
inline Network apply_sweep(const Network& net, SweepParameter p, double value) {
  NetworkSpec spec = net.spec();
  switch (p) {
    case SweepParameter::kAutonomyShare:
      for (OdSpec& od : spec.od_pairs) {
        const double total = od.human_demand + od.auto_demand;
        od.auto_demand = value * total;
        od.human_demand = total - od.auto_demand;
      }
      break;
    case SweepParameter::kKScale:
      // Every BPR road gets headway ratio `value`, keeping its orientation
      // and its larger headway.
      for (RoadSpec& rs : spec.roads) {
        Road& r = rs.road;
        if (!r.is_bpr()) continue;
        if (r.headway >= r.platoon_headway)
          r.platoon_headway = r.headway / value;
        else
          r.headway = r.platoon_headway / value;
      }
      break;
    case SweepParameter::kSigma:
      for (RoadSpec& rs : spec.roads) rs.road.sigma = value;
      break;
    case SweepParameter::kDemandScale:
      for (OdSpec& od : spec.od_pairs) {
        od.human_demand *= value;
        od.auto_demand *= value;
      }
      break;
  }
  return build_network(spec);
}

inline std::vector<Cell> poa_row(const std::string& param, const Cell& value, const PoaEstimate& est,
                                 const BoundsReport& b, std::vector<std::string>& flags) {
  if (!est.eq_converged) flags.push_back("eq_unconverged");
  if (est.ratio > b.bound_combined + kPoaSlack) flags.push_back("bound_exceeded");
  return {param,
          value,
          est.eq_cost,
          est.eq_gap,
          est.opt_cost,
          std::string(to_string(est.oracle)),
          est.ratio,
          b.bound_thm1,
          optional_cell(b.bound_thm2),
          b.bound_combined,
          b.k,
          b.sigma,
          b.xi,
          join_flags(flags)};
}

inline const Network& require_network(const Scenario& sc) {
  if (!sc.network) schema_error("/network", "missing required field for experiment " +
                                                std::string(to_string(*sc.experiment)));
  return *sc.network;
}

/// Best optimum found by local search, improved by the grid oracle when the
/// network is small enough.
inline std::pair<SolveResult, OptimumOracle> best_optimum(const Network& net, const OptimumConfig& cfg) {
  SolveResult best = solve_optimum(net, cfg);
  OptimumOracle oracle = OptimumOracle::kLocalSearch;
  const PathSet paths = enumerate_all_paths(net, cfg.max_hops);
  if (auto r = admissible_grid_resolution(net, paths, cfg.grid_resolution)) {
    GridSearchResult grid = grid_search_optimum(net, *r, cfg.max_hops);
    oracle = OptimumOracle::kGrid;
    if (grid.best.social_cost < best.social_cost) best = std::move(grid.best);
  }
  return {std::move(best), oracle};
}

// --- experiments --------------------------------------------------------

inline Report run_equilibrium(const Scenario& sc) {
  const Network& net = require_network(sc);
  const SolveResult res = solve_equilibrium(net, sc.equilibrium);
  Report rep;
  Table summary = metric_table("summary");
  add_metric(summary, "social_cost", res.social_cost);
  add_metric(summary, "relative_gap", res.relative_gap);
  add_metric(summary, "iterations", static_cast<long long>(res.iterations));
  add_metric(summary, "converged", res.converged);
  add_metric(summary, "seed", static_cast<long long>(sc.equilibrium.seed));
  rep.tables.push_back(std::move(summary));
  rep.tables.push_back(road_flow_table(net, res.link_flows));
  if (!res.converged) {
    rep.soft_failure = true;
    rep.diagnostics.push_back("equilibrium did not reach the gap tolerance");
  }
  return rep;
}

inline Report run_optimum(const Scenario& sc) {
  const Network& net = require_network(sc);
  const SolveResult local = solve_optimum(net, sc.optimum);
  Report rep;
  Table summary = metric_table("summary");
  add_metric(summary, "social_cost", local.social_cost);
  add_metric(summary, "stationarity", local.relative_gap);
  add_metric(summary, "restarts", static_cast<long long>(sc.optimum.restarts));
  add_metric(summary, "iterations", static_cast<long long>(local.iterations));
  const PathSet paths = enumerate_all_paths(net, sc.optimum.max_hops);
  const SolveResult* shown = &local;
  std::optional<GridSearchResult> grid;
  if (auto r = admissible_grid_resolution(net, paths, sc.optimum.grid_resolution)) {
    grid = grid_search_optimum(net, *r, sc.optimum.max_hops);
    add_metric(summary, "grid_resolution", *r);
    add_metric(summary, "grid_cost", grid->best.social_cost);
    add_metric(summary, "grid_tolerance", grid->lipschitz_tolerance());
    add_metric(summary, "oracle", std::string("grid"));
    if (grid->best.social_cost < local.social_cost) shown = &grid->best;
  } else {
    add_metric(summary, "oracle", std::string("local"));
  }
  rep.tables.push_back(std::move(summary));
  rep.tables.push_back(road_flow_table(net, shown->link_flows));
  return rep;
}

inline Report run_bounds(const Scenario& sc) {
  const Network& net = require_network(sc);
  const BoundsReport b = poa_bounds(net);
  Report rep;
  Table summary = metric_table("bounds");
  add_metric(summary, "k", b.k);
  add_metric(summary, "sigma", b.sigma);
  add_metric(summary, "xi", b.xi);
  add_metric(summary, "bound_t1", b.bound_thm1);
  add_metric(summary, "bound_t2", optional_cell(b.bound_thm2));
  add_metric(summary, "bound_combined", b.bound_combined);
  add_metric(summary, "bicriteria_factor", b.bicriteria_factor);
  add_metric(summary, "beta_estimate",
             beta_network_estimate(net, sc.beta_samples, sc.equilibrium.seed, sc.equilibrium.max_hops));
  add_metric(summary, "beta_cap", b.k * b.xi);
  add_metric(summary, "beta_samples", static_cast<long long>(sc.beta_samples));
  rep.tables.push_back(std::move(summary));

  Table roads{"roads", {"road", "name", "capacity_model", "headway", "platoon_headway", "ratio", "sigma"}, {}};
  for (std::size_t i = 0; i < net.num_roads(); ++i) {
    const Road& r = net.road(i);
    roads.rows.push_back({static_cast<long long>(i), r.name, std::string(model_name(r.model)), r.headway,
                          r.platoon_headway, road_asymmetry(r), r.sigma});
  }
  rep.tables.push_back(std::move(roads));
  return rep;
}

inline Report run_poa(const Scenario& sc) {
  const Network& net = require_network(sc);
  const PoaEstimate est = empirical_poa(net, sc.equilibrium, sc.optimum);
  const BoundsReport b = poa_bounds(net);
  Report rep;
  std::vector<std::string> flags;
  Table t{"poa", poa_columns(), {}};
  t.rows.push_back(poa_row("none", std::monostate{}, est, b, flags));
  rep.tables.push_back(std::move(t));
  if (!flags.empty()) {
    rep.soft_failure = true;
    rep.diagnostics.push_back("poa row flagged: " + join_flags(flags));
  }
  return rep;
}

inline Report run_sweep(const Scenario& sc) {
  const Network& base = require_network(sc);
  if (!sc.sweep) schema_error("/sweep", "missing required field for experiment sweep");
  Report rep;
  Table t{"sweep", poa_columns(), {}};
  const std::string param(to_string(sc.sweep->parameter));
  for (double value : sc.sweep->values()) {
    const Network net = apply_sweep(base, sc.sweep->parameter, value);
    const PoaEstimate est = empirical_poa(net, sc.equilibrium, sc.optimum);
    const BoundsReport b = poa_bounds(net);
    std::vector<std::string> flags;
    t.rows.push_back(poa_row(param, value, est, b, flags));
    if (!flags.empty()) {
      rep.soft_failure = true;
      rep.diagnostics.push_back(param + "=" + format_number(value) + ": " + join_flags(flags));
    }
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

inline Report run_bicriteria(const Scenario& sc) {
  const Network& base = require_network(sc);
  Report rep;
  Table t{"bicriteria",
          {"param", "value", "factor", "C_eq", "gap_rel", "C_scaled_opt", "opt_oracle", "holds", "flags"},
          {}};
  std::vector<std::pair<std::string, Cell>> steps;
  if (sc.sweep) {
    for (double v : sc.sweep->values()) steps.emplace_back(std::string(to_string(sc.sweep->parameter)), v);
  } else {
    steps.emplace_back("none", std::monostate{});
  }
  for (const auto& [param, value] : steps) {
    const Network net =
        sc.sweep ? apply_sweep(base, sc.sweep->parameter, std::get<double>(value)) : base;
    const double factor = sc.bicriteria_factor.value_or(poa_bounds(net).bicriteria_factor);
    const SolveResult eq = solve_equilibrium(net, sc.equilibrium);
    const auto [opt, oracle] = best_optimum(scale_demand(net, factor), sc.optimum);
    const bool holds = eq.social_cost <= opt.social_cost * (1.0 + 1e-9);
    std::vector<std::string> flags;
    if (!eq.converged) flags.push_back("eq_unconverged");
    if (!holds) flags.push_back("bicriteria_violated");
    t.rows.push_back({param, value, factor, eq.social_cost, eq.relative_gap, opt.social_cost,
                      std::string(to_string(oracle)), holds, join_flags(flags)});
    if (!flags.empty()) {
      rep.soft_failure = true;
      rep.diagnostics.push_back(param + ": " + join_flags(flags));
    }
  }
  rep.tables.push_back(std::move(t));
  return rep;
}

inline Report run_monotonicity_demo(const Scenario& sc) {
  const Network& net = require_network(sc);
  const FlowVector z = FlowVector::from_interleaved(sc.probe.z);
  const FlowVector q = FlowVector::from_interleaved(sc.probe.q);
  if (z.size() != net.num_roads() || q.size() != net.num_roads() || sc.probe.v.size() != 2 * net.num_roads())
    throw Error(ErrorCode::kDimensionMismatch, "/probe: vectors must have two entries per road");
  const double probe = monotonicity_probe(net, z, q);
  const double quad = jacobian_quadratic_form(net, z, sc.probe.v);

  Report rep;
  Table summary = metric_table("summary");
  add_metric(summary, "monotonicity_probe", probe);
  add_metric(summary, "quadratic_form", quad);
  add_metric(summary, "monotone_violated", probe < 0.0);
  add_metric(summary, "jacobian_psd_violated", quad < 0.0);
  rep.tables.push_back(std::move(summary));

  const std::size_t n = 2 * net.num_roads();
  std::vector<std::string> cols = {"row"};
  for (std::size_t j = 0; j < n; ++j) cols.push_back("z" + std::to_string(j + 1));
  Table jac{"jacobian", cols, {}};
  const Eigen::MatrixXd J = cost_jacobian(net, z);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Cell> row = {static_cast<long long>(i + 1)};
    for (std::size_t j = 0; j < n; ++j) row.push_back(J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    jac.rows.push_back(std::move(row));
  }
  rep.tables.push_back(std::move(jac));

  cols[0] = "vector";
  Table vectors{"vectors", cols, {}};
  auto add_vector = [&](std::string name, const std::vector<double>& values) {
    std::vector<Cell> row = {std::move(name)};
    for (double v : values) row.push_back(v);
    vectors.rows.push_back(std::move(row));
  };
  add_vector("z", sc.probe.z);
  add_vector("q", sc.probe.q);
  add_vector("v", sc.probe.v);
  add_vector("c(z)", cost_vector(net, z).entries);
  add_vector("c(q)", cost_vector(net, q).entries);
  rep.tables.push_back(std::move(vectors));
  return rep;
}

// --- tightness probe ----------------------------------------------------

/// Two roads with mirrored headways: road A has (h, h') = (k, 1) and road B
/// has (1, k); one unit of each class.
inline Network swap_family(double k, double sigma, double rho) {
  Road a;
  a.headway = k;
  a.platoon_headway = 1.0;
  a.freeflow = 1.0;
  a.rho = rho;
  a.sigma = sigma;
  a.name = "A";
  Road b = a;
  b.headway = 1.0;
  b.platoon_headway = k;
  b.name = "B";
  NetworkSpec spec;
  spec.nodes = {"s", "t"};
  spec.roads = {{"s", "t", a}, {"s", "t", b}};
  spec.od_pairs.push_back({"s", "t", 1.0, 1.0});
  return build_network(spec);
}

/// A constant-latency road next to a congestible one whose cost is close to
/// its load; the congestible road has headway ratio k.
inline Network pigou_family(double k, double sigma, double rho) {
  Road flat;
  flat.freeflow = 1.0;
  flat.name = "A";
  Road steep;
  steep.headway = 1.0;
  steep.platoon_headway = 1.0 / k;
  steep.freeflow = 1.0 / rho;
  steep.rho = rho;
  steep.sigma = sigma;
  steep.name = "B";
  NetworkSpec spec;
  spec.nodes = {"s", "t"};
  spec.roads = {{"s", "t", flat}, {"s", "t", steep}};
  spec.od_pairs.push_back({"s", "t", 0.5, 0.5});
  return build_network(spec);
}

/// Costliest converged equilibrium reached from the uniform split and from
/// every all-or-nothing vertex.  Falls back to the smallest-gap run when none
/// converges.
inline SolveResult worst_equilibrium(const Network& net, const EquilibriumConfig& cfg) {
  const PathSet paths = enumerate_all_paths(net, cfg.max_hops);
  std::vector<PathFlowAssignment> starts = {uniform_assignment(net, paths)};
  std::vector<std::size_t> sizes;
  for (const auto& p : paths.by_od)
    for (int c = 0; c < 2; ++c) sizes.push_back(p.size());
  std::vector<std::size_t> choice(sizes.size(), 0);
  while (true) {
    starts.push_back(all_or_nothing(net, paths, [&](std::size_t k, VehicleClass cls) {
      return choice[2 * k + index_of(cls)];
    }));
    std::size_t b = 0;
    while (b < choice.size() && ++choice[b] == sizes[b]) choice[b++] = 0;
    if (b == choice.size()) break;
  }
  std::optional<SolveResult> worst, fallback;
  for (PathFlowAssignment& start : starts) {
    SolveResult res = solve_equilibrium(net, cfg, std::move(start));
    if (res.converged) {
      if (!worst || res.social_cost > worst->social_cost) worst = res;
    } else if (!fallback || res.relative_gap < fallback->relative_gap) {
      fallback = res;
    }
  }
  return worst ? *worst : *fallback;
}

inline Report run_tightness_probe(const Scenario& sc) {
  const TightnessSpec& ts = sc.tightness;
  Report rep;
  Table all{"instances",
            {"k", "sigma", "family", "rho", "C_eq", "gap_rel", "C_opt", "opt_oracle", "poa_emp", "bound_combined",
             "flags"},
            {}};
  Table best{"best", {"k", "sigma", "poa_best", "family", "rho", "bound_combined"}, {}};
  std::vector<double> best_values;
  for (double k : ts.k_values) {
    const BoundsReport b = poa_bounds(k, ts.sigma);
    double top = 0.0;
    std::string top_family;
    double top_rho = 0.0;
    for (const char* family : {"swap", "pigou"})
      for (double rho : ts.rho_values) {
        const Network net = std::string_view(family) == "swap" ? swap_family(k, ts.sigma, rho)
                                                               : pigou_family(k, ts.sigma, rho);
        const PoaEstimate est = empirical_poa(net, worst_equilibrium(net, sc.equilibrium), sc.optimum);
        std::vector<std::string> flags;
        if (!est.eq_converged) flags.push_back("eq_unconverged");
        if (est.ratio > b.bound_combined + kPoaSlack) flags.push_back("bound_exceeded");
        all.rows.push_back({k, ts.sigma, std::string(family), rho, est.eq_cost, est.eq_gap, est.opt_cost,
                            std::string(to_string(est.oracle)), est.ratio, b.bound_combined, join_flags(flags)});
        if (!flags.empty()) {
          rep.soft_failure = true;
          rep.diagnostics.push_back("k=" + format_number(k) + " " + family + " rho=" + format_number(rho) + ": " +
                                    join_flags(flags));
          continue;
        }
        if (est.ratio > top) {
          top = est.ratio;
          top_family = family;
          top_rho = rho;
        }
      }
    best.rows.push_back({k, ts.sigma, top, top_family, top_rho, b.bound_combined});
    best_values.push_back(top);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < best_values.size(); ++i)
    if (ts.k_values[i] >= ts.k_values[i - 1] && best_values[i] < best_values[i - 1]) monotone = false;
  Table summary = metric_table("summary");
  add_metric(summary, "monotone_nondecreasing", monotone);
  rep.tables.push_back(std::move(summary));
  rep.tables.push_back(std::move(best));
  rep.tables.push_back(std::move(all));
  return rep;
}

}  // namespace detail

/// Runs the scenario's experiment.  Solver shortfalls (unconverged
/// equilibria, rows past the bound) set `soft_failure` but still produce the
/// full report.
inline Report run(const Scenario& sc) {
  if (!sc.experiment) detail::schema_error("/experiment", "missing required field");
  Report rep;
  switch (*sc.experiment) {
    case Experiment::kEquilibrium: rep = detail::run_equilibrium(sc); break;
    case Experiment::kOptimum: rep = detail::run_optimum(sc); break;
    case Experiment::kBounds: rep = detail::run_bounds(sc); break;
    case Experiment::kPoa: rep = detail::run_poa(sc); break;
    case Experiment::kBicriteria: rep = detail::run_bicriteria(sc); break;
    case Experiment::kSweep: rep = detail::run_sweep(sc); break;
    case Experiment::kMonotonicityDemo: rep = detail::run_monotonicity_demo(sc); break;
    case Experiment::kTightnessProbe: rep = detail::run_tightness_probe(sc); break;
  }
  rep.experiment = *sc.experiment;
  return rep;
}

inline std::string render(const Report& rep, Format format) {
  if (format == Format::kJson) {
    nlohmann::ordered_json doc;
    doc["experiment"] = std::string(to_string(rep.experiment));
    doc["status"] = rep.soft_failure ? "soft_failure" : "ok";
    doc["diagnostics"] = rep.diagnostics;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const Table& t : rep.tables) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = detail::json_cell(row[c]);
        rows.push_back(std::move(obj));
      }
      tables[t.name] = std::move(rows);
    }
    doc["tables"] = std::move(tables);
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < rep.tables.size(); ++i) {
    const Table& t = rep.tables[i];
    if (i > 0) out += "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
    out += "\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + detail::csv_cell(row[c]);
      out += "\n";
    }
  }
  return out;
}

// --- built-in demonstrations ---------------------------------------------

struct BuiltinDemo {
  std::string_view name;
  std::string_view scenario;
};

inline constexpr std::array<BuiltinDemo, 3> kBuiltinDemos = {{
    {"paper-monotonicity", R"({
  "schema_version": "1",
  "experiment": "monotonicity_demo",
  "network": {
    "roads": [
      {"name": "road1", "from": "s", "to": "t",
       "cost": {"kind": "affine", "human_coef": 3, "auto_coef": 1, "constant": 1}},
      {"name": "road2", "from": "s", "to": "t",
       "cost": {"kind": "affine", "human_coef": 3, "auto_coef": 2, "constant": 2}}
    ],
    "od_pairs": [{"origin": "s", "destination": "t", "demand_human": 2, "demand_auto": 3}]
  },
  "probe": {"z": [2, 0, 0, 3], "q": [0, 3, 2, 0], "v": [-1, 2, 0, 0]}
})"},
    {"paper-bicriteria-2.61", R"({
  "schema_version": "1",
  "experiment": "bicriteria",
  "network": {
    "roads": [
      {"name": "wide", "from": "s", "to": "t", "length": 1, "headway": 3, "platoon_headway": 1,
       "freeflow": 1, "rho": 1, "sigma": 4, "capacity_model": 1},
      {"name": "platoon", "from": "s", "to": "t", "length": 1, "headway": 1, "platoon_headway": 3,
       "freeflow": 1.5, "rho": 0.5, "sigma": 4, "capacity_model": 2},
      {"name": "bypass", "from": "s", "to": "t", "length": 1, "headway": 1, "platoon_headway": 1,
       "freeflow": 3, "rho": 0.1, "sigma": 4, "capacity_model": 1}
    ],
    "od_pairs": [{"origin": "s", "destination": "t", "demand_human": 1, "demand_auto": 1.5}]
  }
})"},
    {"paper-classic-4-3", R"({
  "schema_version": "1",
  "experiment": "poa",
  "network": {
    "roads": [
      {"name": "constant", "from": "s", "to": "t", "length": 1, "headway": 1, "platoon_headway": 1,
       "freeflow": 1, "rho": 0, "sigma": 1},
      {"name": "congestible", "from": "s", "to": "t", "length": 1, "headway": 1, "platoon_headway": 1,
       "freeflow": 0.001, "rho": 999, "sigma": 1}
    ],
    "od_pairs": [{"origin": "s", "destination": "t", "demand_human": 0.5, "demand_auto": 0.5}]
  },
  "equilibrium": {"start": "uniform"}
})"},
}};

inline std::optional<std::string_view> builtin_demo(std::string_view name) {
  for (const BuiltinDemo& d : kBuiltinDemos)
    if (d.name == name) return d.scenario;
  return std::nullopt;
}

}  // namespace mar
