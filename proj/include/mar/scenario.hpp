#pragma once

// Scenario documents: a JSON object describing a network, solver overrides
// and the experiment to run.  The accepted fields are listed in
// scenarios/README.md.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mar/bounds.hpp"
#include "mar/equilibrium.hpp"
#include "mar/error.hpp"
#include "mar/network.hpp"
#include "mar/optimum.hpp"

namespace mar {

enum class Experiment {
  kEquilibrium,
  kOptimum,
  kBounds,
  kPoa,
  kBicriteria,
  kSweep,
  kMonotonicityDemo,
  kTightnessProbe,
};

inline constexpr std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kEquilibrium: return "equilibrium";
    case Experiment::kOptimum: return "optimum";
    case Experiment::kBounds: return "bounds";
    case Experiment::kPoa: return "poa";
    case Experiment::kBicriteria: return "bicriteria";
    case Experiment::kSweep: return "sweep";
    case Experiment::kMonotonicityDemo: return "monotonicity_demo";
    case Experiment::kTightnessProbe: return "tightness_probe";
  }
  return "unknown";
}

inline std::optional<Experiment> experiment_from_string(std::string_view name) {
  for (Experiment e : {Experiment::kEquilibrium, Experiment::kOptimum, Experiment::kBounds, Experiment::kPoa,
                       Experiment::kBicriteria, Experiment::kSweep, Experiment::kMonotonicityDemo,
                       Experiment::kTightnessProbe})
    if (to_string(e) == name) return e;
  return std::nullopt;
}

enum class SweepParameter { kAutonomyShare, kKScale, kSigma, kDemandScale };

inline constexpr std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kAutonomyShare: return "autonomy_share";
    case SweepParameter::kKScale: return "k_scale";
    case SweepParameter::kSigma: return "sigma";
    case SweepParameter::kDemandScale: return "demand_scale";
  }
  return "unknown";
}

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kAutonomyShare;
  double from = 0.0;
  double to = 1.0;
  std::size_t steps = 11;

  /// Evenly spaced values from `from` to `to`, both included.
  std::vector<double> values() const {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i)
      out[i] = steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return out;
  }
};

/// Points for the monotonicity demonstration, in interleaved coordinates.
struct ProbeSpec {
  std::vector<double> z = {2, 0, 0, 3};
  std::vector<double> q = {0, 3, 2, 0};
  std::vector<double> v = {-1, 2, 0, 0};
};

struct TightnessSpec {
  std::vector<double> k_values = {1.0, 1.5, 2.0, 3.0};
  double sigma = 1.0;
  std::vector<double> rho_values = {1.0, 10.0, 100.0};
};

struct Scenario {
  std::string schema_version = "1";
  std::optional<Experiment> experiment;
  std::optional<NetworkSpec> network_spec;
  std::optional<Network> network;
  EquilibriumConfig equilibrium;
  OptimumConfig optimum;
  std::optional<SweepSpec> sweep;
  std::optional<double> bicriteria_factor;  // default: 1 + k xi(sigma)
  std::size_t beta_samples = 256;
  ProbeSpec probe;
  TightnessSpec tightness;
};

inline constexpr std::string_view kSchemaVersion = "1";

namespace detail {

using Json = nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, path + ": " + what);
}

inline std::string_view type_name(const Json& j) {
  if (j.is_number()) return "number";
  return j.type_name();
}

/// Reads the members of one JSON object and rejects any it was not asked
/// about.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) schema_error(path_.empty() ? "/" : path_, "expected an object");
  }

  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

  bool has(std::string_view key) {
    seen_.insert(std::string(key));
    return obj_.contains(key);
  }

  const Json& at(std::string_view key) {
    if (!has(key)) schema_error(child(key), "missing required field");
    return obj_.at(std::string(key));
  }

  double number(std::string_view key) {
    const Json& j = at(key);
    if (!j.is_number()) schema_error(child(key), std::string("expected number, got ") + std::string(type_name(j)));
    return j.get<double>();
  }

  double number(std::string_view key, double fallback) { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_integer(std::string_view key) {
    const Json& j = at(key);
    if (!j.is_number_unsigned())
      schema_error(child(key), std::string("expected non-negative integer, got ") + std::string(type_name(j)));
    return j.get<std::uint64_t>();
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  std::string string(std::string_view key) {
    const Json& j = at(key);
    if (!j.is_string()) schema_error(child(key), std::string("expected string, got ") + std::string(type_name(j)));
    return j.get<std::string>();
  }

  const Json& array(std::string_view key) {
    const Json& j = at(key);
    if (!j.is_array()) schema_error(child(key), std::string("expected array, got ") + std::string(type_name(j)));
    return j;
  }

  std::vector<double> numbers(std::string_view key) {
    const Json& arr = array(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number())
        schema_error(child(key) + "/" + std::to_string(i),
                     std::string("expected number, got ") + std::string(type_name(arr[i])));
      out.push_back(arr[i].get<double>());
    }
    return out;
  }

  /// Call after reading: any member never asked about is an error.
  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) schema_error(child(key), "unknown field");
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Road parse_road(ObjectReader& r) {
  Road road;
  if (r.has("name")) road.name = r.string("name");
  if (r.has("cost")) {
    const Json& cost = r.at("cost");
    if (cost.is_string()) {
      if (cost.get<std::string>() != "bpr") schema_error(r.child("cost"), "expected \"bpr\" or an affine object");
    } else {
      ObjectReader c(cost, r.child("cost"));
      const std::string kind = c.string("kind");
      if (kind != "affine") schema_error(c.child("kind"), "expected \"affine\"");
      road.cost = AffineMixed{c.number("human_coef"), c.number("auto_coef"), c.number("constant")};
      c.finish();
      return road;
    }
  }
  road.length = r.number("length");
  road.headway = r.number("headway");
  road.platoon_headway = r.number("platoon_headway");
  road.freeflow = r.number("freeflow");
  road.rho = r.number("rho", 0.15);
  road.sigma = r.number("sigma", 4.0);
  const std::uint64_t model = r.unsigned_integer("capacity_model", 1);
  if (model != 1 && model != 2) schema_error(r.child("capacity_model"), "expected 1 or 2");
  road.model = model == 1 ? CapacityModel::kPlatoonBehindAny : CapacityModel::kPlatoonBehindAutonomous;
  return road;
}

inline NetworkSpec parse_network(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  NetworkSpec spec;
  const Json& roads = r.array("roads");
  for (std::size_t i = 0; i < roads.size(); ++i) {
    ObjectReader rr(roads[i], r.child("roads") + "/" + std::to_string(i));
    RoadSpec rs;
    rs.from = rr.string("from");
    rs.to = rr.string("to");
    rs.road = parse_road(rr);
    rr.finish();
    spec.roads.push_back(std::move(rs));
  }
  const Json& ods = r.array("od_pairs");
  for (std::size_t i = 0; i < ods.size(); ++i) {
    ObjectReader orr(ods[i], r.child("od_pairs") + "/" + std::to_string(i));
    OdSpec od;
    od.origin = orr.string("origin");
    od.destination = orr.string("destination");
    od.human_demand = orr.number("demand_human");
    od.auto_demand = orr.number("demand_auto");
    orr.finish();
    spec.od_pairs.push_back(std::move(od));
  }
  if (r.has("nodes")) {
    const Json& nodes = r.array("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].is_string()) schema_error(r.child("nodes") + "/" + std::to_string(i), "expected string");
      spec.nodes.push_back(nodes[i].get<std::string>());
    }
  } else {
    // Nodes in order of first mention by a road.
    for (const RoadSpec& rs : spec.roads)
      for (const std::string& n : {rs.from, rs.to})
        if (std::find(spec.nodes.begin(), spec.nodes.end(), n) == spec.nodes.end()) spec.nodes.push_back(n);
  }
  r.finish();
  return spec;
}

inline StepRule parse_step_rule(const std::string& s, const std::string& path) {
  if (s == "msa") return StepRule::kMsa;
  if (s == "self_regulated_msa") return StepRule::kSelfRegulatedMsa;
  if (s == "gradient_projection") return StepRule::kGradientProjection;
  schema_error(path, "expected one of msa, self_regulated_msa, gradient_projection");
}

inline StartRule parse_start_rule(const std::string& s, const std::string& path) {
  if (s == "random") return StartRule::kRandom;
  if (s == "uniform") return StartRule::kUniform;
  if (s == "free_flow") return StartRule::kFreeFlow;
  schema_error(path, "expected one of random, uniform, free_flow");
}

inline SweepSpec parse_sweep(ObjectReader& r) {
  SweepSpec s;
  const std::string name = r.string("parameter");
  bool known = false;
  for (SweepParameter p : {SweepParameter::kAutonomyShare, SweepParameter::kKScale, SweepParameter::kSigma,
                           SweepParameter::kDemandScale})
    if (to_string(p) == name) {
      s.parameter = p;
      known = true;
    }
  if (!known) throw Error(ErrorCode::kInvalidSweepParameter, r.child("parameter") + ": unknown sweep parameter '" + name + "'");
  s.from = r.number("from");
  s.to = r.number("to");
  s.steps = r.unsigned_integer("steps");
  r.finish();

  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::kInvalidSweepParameter, "/sweep: " + name + ": " + what);
  };
  if (s.steps < 1) bad("steps must be >= 1");
  const double lo = std::min(s.from, s.to), hi = std::max(s.from, s.to);
  switch (s.parameter) {
    case SweepParameter::kAutonomyShare:
      if (lo < 0.0 || hi > 1.0) bad("range must lie in [0, 1]");
      break;
    case SweepParameter::kKScale:
    case SweepParameter::kSigma:
      if (lo < 1.0) bad("range must be >= 1");
      break;
    case SweepParameter::kDemandScale:
      if (!(lo > 0.0)) bad("range must be > 0");
      break;
  }
  return s;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Parses and validates a scenario document.  Malformed JSON, unknown fields
/// and wrong types raise SchemaError naming the JSON path (or line and
/// column); network invariant failures raise SemanticError.
inline Scenario parse_scenario(std::string_view text) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::kSchemaError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": invalid JSON");
  }

  detail::ObjectReader r(doc, "");
  Scenario sc;
  sc.schema_version = r.string("schema_version");
  if (sc.schema_version != kSchemaVersion)
    detail::schema_error("/schema_version", "unsupported version '" + sc.schema_version + "'");

  if (r.has("experiment")) {
    const std::string name = r.string("experiment");
    sc.experiment = experiment_from_string(name);
    if (!sc.experiment) detail::schema_error("/experiment", "unknown experiment '" + name + "'");
  }
  if (r.has("network")) sc.network_spec = detail::parse_network(r.at("network"), "/network");

  const std::size_t max_hops = r.unsigned_integer("max_hops", 0);
  sc.equilibrium.max_hops = max_hops;
  sc.optimum.max_hops = max_hops;

  if (r.has("equilibrium")) {
    detail::ObjectReader e(r.at("equilibrium"), "/equilibrium");
    EquilibriumConfig& cfg = sc.equilibrium;
    cfg.max_iterations = e.unsigned_integer("max_iterations", cfg.max_iterations);
    cfg.gap_tolerance = e.number("gap_tolerance", cfg.gap_tolerance);
    if (e.has("step_rule")) cfg.step_rule = detail::parse_step_rule(e.string("step_rule"), e.child("step_rule"));
    if (e.has("start")) cfg.start = detail::parse_start_rule(e.string("start"), e.child("start"));
    cfg.seed = e.unsigned_integer("seed", cfg.seed);
    e.finish();
    if (!(cfg.gap_tolerance > 0.0)) detail::schema_error("/equilibrium/gap_tolerance", "must be > 0");
    if (cfg.max_iterations < 1) detail::schema_error("/equilibrium/max_iterations", "must be >= 1");
  }
  if (r.has("optimum")) {
    detail::ObjectReader o(r.at("optimum"), "/optimum");
    OptimumConfig& cfg = sc.optimum;
    cfg.restarts = o.unsigned_integer("restarts", cfg.restarts);
    cfg.max_iterations = o.unsigned_integer("max_iterations", cfg.max_iterations);
    cfg.step_tolerance = o.number("step_tolerance", cfg.step_tolerance);
    cfg.grid_resolution = o.number("grid_resolution", cfg.grid_resolution);
    cfg.seed = o.unsigned_integer("seed", cfg.seed);
    o.finish();
    if (cfg.restarts < 1) detail::schema_error("/optimum/restarts", "must be >= 1");
    if (!(cfg.grid_resolution > 0.0 && cfg.grid_resolution <= 1.0))
      detail::schema_error("/optimum/grid_resolution", "must be in (0, 1]");
  }
  if (r.has("sweep")) {
    detail::ObjectReader s(r.at("sweep"), "/sweep");
    sc.sweep = detail::parse_sweep(s);
  }
  if (r.has("bicriteria")) {
    detail::ObjectReader b(r.at("bicriteria"), "/bicriteria");
    if (b.has("factor")) {
      sc.bicriteria_factor = b.number("factor");
      if (!(*sc.bicriteria_factor >= 1.0)) detail::schema_error("/bicriteria/factor", "must be >= 1");
    }
    b.finish();
  }
  if (r.has("bounds")) {
    detail::ObjectReader b(r.at("bounds"), "/bounds");
    sc.beta_samples = b.unsigned_integer("beta_samples", sc.beta_samples);
    b.finish();
  }
  if (r.has("probe")) {
    detail::ObjectReader p(r.at("probe"), "/probe");
    sc.probe.z = p.numbers("z");
    sc.probe.q = p.numbers("q");
    sc.probe.v = p.numbers("v");
    p.finish();
  }
  if (r.has("tightness")) {
    detail::ObjectReader t(r.at("tightness"), "/tightness");
    if (t.has("k_values")) sc.tightness.k_values = t.numbers("k_values");
    sc.tightness.sigma = t.number("sigma", sc.tightness.sigma);
    if (t.has("rho_values")) sc.tightness.rho_values = t.numbers("rho_values");
    t.finish();
    for (double k : sc.tightness.k_values)
      if (!(k >= 1.0)) detail::schema_error("/tightness/k_values", "every k must be >= 1");
    if (!(sc.tightness.sigma >= 1.0)) detail::schema_error("/tightness/sigma", "must be >= 1");
    for (double rho : sc.tightness.rho_values)
      if (!(rho > 0.0)) detail::schema_error("/tightness/rho_values", "every rho must be > 0");
  }
  r.finish();

  if (sc.network_spec) {
    try {
      sc.network = build_network(*sc.network_spec);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSemanticError, "/network: " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  return sc;
}

}  // namespace mar
