#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mar/error.hpp"

namespace mar {

/// How autonomous vehicles occupy road space.  The first model lets an
/// autonomous vehicle platoon behind any vehicle (capacity linear in the
/// autonomy level); the second only behind another autonomous vehicle
/// (capacity quadratic in the autonomy level).
enum class CapacityModel { kPlatoonBehindAny, kPlatoonBehindAutonomous };

/// BPR-style latency a * (1 + rho * (flow / capacity)^sigma).
struct Bpr {};

/// Latency human_coef * x + auto_coef * y + constant.  Used for the two-road
/// non-monotone demonstration and for solver stress tests; the bounds module
/// rejects it.
struct AffineMixed {
  double human_coef = 0.0;
  double auto_coef = 0.0;
  double constant = 0.0;
};

using CostKind = std::variant<Bpr, AffineMixed>;

struct Road {
  std::string name;
  std::size_t tail = 0;
  std::size_t head = 0;
  double length = 1.0;           // d
  double headway = 1.0;          // h, non-platooned vehicle
  double platoon_headway = 1.0;  // h-bar, platooned vehicle
  double freeflow = 0.0;         // a
  double rho = 0.0;
  double sigma = 1.0;
  CapacityModel model = CapacityModel::kPlatoonBehindAny;
  CostKind cost = Bpr{};

  bool is_bpr() const { return std::holds_alternative<Bpr>(cost); }
};

struct OdPair {
  std::size_t origin = 0;
  std::size_t destination = 0;
  double human_demand = 0.0;
  double auto_demand = 0.0;

  double total_demand() const { return human_demand + auto_demand; }
};

enum class VehicleClass { kHuman = 0, kAutonomous = 1 };

inline constexpr std::array<VehicleClass, 2> kVehicleClasses = {VehicleClass::kHuman,
                                                                 VehicleClass::kAutonomous};

inline constexpr std::size_t index_of(VehicleClass cls) { return static_cast<std::size_t>(cls); }

inline double demand_of(const OdPair& od, VehicleClass cls) {
  return cls == VehicleClass::kHuman ? od.human_demand : od.auto_demand;
}

struct RoadSpec {
  std::string from;
  std::string to;
  Road road;  // tail/head are filled in from `from`/`to`
};

struct OdSpec {
  std::string origin;
  std::string destination;
  double human_demand = 0.0;
  double auto_demand = 0.0;
};

/// Editable description of a network; `build_network` validates it.
struct NetworkSpec {
  std::vector<std::string> nodes;
  std::vector<RoadSpec> roads;
  std::vector<OdSpec> od_pairs;
};

class Network;
Network build_network(const NetworkSpec& spec);

/// Validated, immutable road network.
class Network {
 public:
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Road>& roads() const { return roads_; }
  const std::vector<OdPair>& od_pairs() const { return od_pairs_; }
  const NetworkSpec& spec() const { return spec_; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_roads() const { return roads_.size(); }
  const Road& road(std::size_t i) const { return roads_.at(i); }

  std::size_t node_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error(ErrorCode::kDanglingEndpoint, "unknown node '" + name + "'");
    return it->second;
  }

 private:
  friend Network build_network(const NetworkSpec& spec);
  Network() = default;

  NetworkSpec spec_;
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Road> roads_;
  std::vector<OdPair> od_pairs_;
};

namespace detail {

inline bool reachable(const std::vector<Road>& roads, std::size_t num_nodes, std::size_t from,
                      std::size_t to) {
  std::vector<char> seen(num_nodes, 0);
  std::queue<std::size_t> frontier;
  frontier.push(from);
  seen[from] = 1;
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop();
    if (u == to) return true;
    for (const Road& r : roads) {
      if (r.tail == u && !seen[r.head]) {
        seen[r.head] = 1;
        frontier.push(r.head);
      }
    }
  }
  return false;
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

inline void validate_road(const Road& r, const std::string& label) {
  auto finite = [](double v) { return std::isfinite(v); };
  const auto bad = ErrorCode::kInvalidParameter;
  require(finite(r.length) && r.length > 0.0, bad, label + ": length must be > 0");
  require(finite(r.headway) && r.headway > 0.0, bad, label + ": headway must be > 0");
  require(finite(r.platoon_headway) && r.platoon_headway > 0.0, bad,
          label + ": platoon_headway must be > 0");
  require(finite(r.freeflow) && r.freeflow >= 0.0, bad, label + ": freeflow must be >= 0");
  require(finite(r.rho) && r.rho >= 0.0, bad, label + ": rho must be >= 0");
  require(finite(r.sigma) && r.sigma >= 1.0, bad, label + ": sigma must be >= 1");
  if (const auto* aff = std::get_if<AffineMixed>(&r.cost)) {
    require(finite(aff->human_coef) && aff->human_coef >= 0.0 && finite(aff->auto_coef) &&
                aff->auto_coef >= 0.0 && finite(aff->constant) && aff->constant >= 0.0,
            bad, label + ": affine coefficients must be >= 0");
  }
}

}  // namespace detail

inline Network build_network(const NetworkSpec& spec) {
  Network net;
  net.spec_ = spec;
  for (const auto& name : spec.nodes) {
    if (!net.index_.emplace(name, net.nodes_.size()).second)
      throw Error(ErrorCode::kDuplicateId, "node '" + name + "' declared twice");
    net.nodes_.push_back(name);
  }
  std::unordered_map<std::string, std::size_t> road_names;
  for (std::size_t i = 0; i < spec.roads.size(); ++i) {
    const RoadSpec& rs = spec.roads[i];
    Road road = rs.road;
    const std::string label = "road " + std::to_string(i) + (road.name.empty() ? "" : " '" + road.name + "'");
    if (!road.name.empty() && !road_names.emplace(road.name, i).second)
      throw Error(ErrorCode::kDuplicateId, "road '" + road.name + "' declared twice");
    auto tail = net.index_.find(rs.from);
    auto head = net.index_.find(rs.to);
    if (tail == net.index_.end() || head == net.index_.end())
      throw Error(ErrorCode::kDanglingEndpoint, label + " references an undeclared node");
    road.tail = tail->second;
    road.head = head->second;
    detail::validate_road(road, label);
    net.roads_.push_back(std::move(road));
  }
  if (spec.od_pairs.empty()) throw Error(ErrorCode::kInvalidParameter, "no OD pairs declared");
  bool any_demand = false;
  for (std::size_t i = 0; i < spec.od_pairs.size(); ++i) {
    const OdSpec& os = spec.od_pairs[i];
    const std::string label = "od pair " + std::to_string(i);
    auto o = net.index_.find(os.origin);
    auto d = net.index_.find(os.destination);
    if (o == net.index_.end() || d == net.index_.end())
      throw Error(ErrorCode::kDanglingEndpoint, label + " references an undeclared node");
    if (!(std::isfinite(os.human_demand) && os.human_demand >= 0.0 &&
          std::isfinite(os.auto_demand) && os.auto_demand >= 0.0))
      throw Error(ErrorCode::kInvalidParameter, label + ": demands must be >= 0");
    if (o->second == d->second)
      throw Error(ErrorCode::kInvalidParameter, label + ": origin equals destination");
    if (!detail::reachable(net.roads_, net.nodes_.size(), o->second, d->second))
      throw Error(ErrorCode::kUnreachableOd,
                  label + ": no path from '" + os.origin + "' to '" + os.destination + "'");
    any_demand = any_demand || os.human_demand + os.auto_demand > 0.0;
    net.od_pairs_.push_back({o->second, d->second, os.human_demand, os.auto_demand});
  }
  if (!any_demand) throw Error(ErrorCode::kInvalidParameter, "every OD pair has zero demand");
  return net;
}

/// Sequence of road indices from origin to destination.
using Path = std::vector<std::size_t>;

/// All simple directed paths from od.origin to od.destination using at most
/// `max_hops` roads, in lexicographic order of road indices.
inline std::vector<Path> enumerate_paths(const Network& net, const OdPair& od, std::size_t max_hops) {
  if (max_hops < 1) throw Error(ErrorCode::kInvalidParameter, "max_hops must be >= 1");
  std::vector<Path> out;
  std::vector<char> on_path(net.num_nodes(), 0);
  Path current;
  // Roads are scanned in index order, so DFS emits paths lexicographically.
  auto dfs = [&](auto&& self, std::size_t node) -> void {
    if (node == od.destination) {
      out.push_back(current);
      return;
    }
    if (current.size() == max_hops) return;
    on_path[node] = 1;
    for (std::size_t r = 0; r < net.num_roads(); ++r) {
      const Road& road = net.road(r);
      if (road.tail != node || on_path[road.head]) continue;
      current.push_back(r);
      self(self, road.head);
      current.pop_back();
    }
    on_path[node] = 0;
  };
  dfs(dfs, od.origin);
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::kNoPathFound, "no path within " + std::to_string(max_hops) + " hops");
  return out;
}

/// Enumerated paths for every OD pair of a network.
struct PathSet {
  std::vector<std::vector<Path>> by_od;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& p : by_od) n += p.size();
    return n;
  }
};

/// `max_hops == 0` means "number of nodes", which admits every simple path.
inline PathSet enumerate_all_paths(const Network& net, std::size_t max_hops = 0) {
  if (max_hops == 0) max_hops = net.num_nodes();
  PathSet set;
  for (const OdPair& od : net.od_pairs()) set.by_od.push_back(enumerate_paths(net, od, max_hops));
  return set;
}

struct LinkFlow {
  double human = 0.0;
  double autonomous = 0.0;

  double total() const { return human + autonomous; }
  double operator[](VehicleClass cls) const { return cls == VehicleClass::kHuman ? human : autonomous; }
  double& operator[](VehicleClass cls) { return cls == VehicleClass::kHuman ? human : autonomous; }
};

/// Per-road (x_i, y_i) pairs; `interleaved()` gives z = [x1 y1 x2 y2 ...].
struct FlowVector {
  std::vector<LinkFlow> links;

  FlowVector() = default;
  explicit FlowVector(std::size_t n) : links(n) {}
  explicit FlowVector(std::vector<LinkFlow> l) : links(std::move(l)) {}

  std::size_t size() const { return links.size(); }
  const LinkFlow& operator[](std::size_t i) const { return links[i]; }
  LinkFlow& operator[](std::size_t i) { return links[i]; }

  std::vector<double> interleaved() const {
    std::vector<double> z;
    z.reserve(2 * links.size());
    for (const auto& l : links) {
      z.push_back(l.human);
      z.push_back(l.autonomous);
    }
    return z;
  }

  static FlowVector from_interleaved(std::span<const double> z) {
    if (z.size() % 2 != 0) throw Error(ErrorCode::kDimensionMismatch, "interleaved vector has odd length");
    FlowVector f(z.size() / 2);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = {z[2 * i], z[2 * i + 1]};
    return f;
  }
};

/// Path flows of one OD pair; the two classes share the path list.
struct OdPathFlows {
  std::vector<Path> paths;
  std::array<std::vector<double>, 2> flow;

  std::vector<double>& of(VehicleClass cls) { return flow[index_of(cls)]; }
  const std::vector<double>& of(VehicleClass cls) const { return flow[index_of(cls)]; }
};

struct PathFlowAssignment {
  std::vector<OdPathFlows> od;
};

namespace detail {

inline double demand_tolerance(double demand) { return 1e-9 * std::max(1.0, demand); }

inline bool is_valid_path(const Network& net, const OdPair& od, const Path& path) {
  if (path.empty()) return false;
  std::vector<char> seen(net.num_nodes(), 0);
  std::size_t at = od.origin;
  seen[at] = 1;
  for (std::size_t r : path) {
    if (r >= net.num_roads() || net.road(r).tail != at) return false;
    at = net.road(r).head;
    if (seen[at]) return false;
    seen[at] = 1;
  }
  return at == od.destination;
}

}  // namespace detail

/// Throws kInvalidAssignment if `pf` violates demand or path validity.
inline void validate_assignment(const Network& net, const PathFlowAssignment& pf) {
  if (pf.od.size() != net.od_pairs().size())
    throw Error(ErrorCode::kInvalidAssignment, "assignment has wrong number of OD pairs");
  for (std::size_t k = 0; k < pf.od.size(); ++k) {
    const OdPair& od = net.od_pairs()[k];
    const OdPathFlows& block = pf.od[k];
    for (const Path& p : block.paths)
      if (!detail::is_valid_path(net, od, p))
        throw Error(ErrorCode::kInvalidAssignment, "od " + std::to_string(k) + ": invalid path");
    for (VehicleClass cls : kVehicleClasses) {
      const auto& f = block.of(cls);
      if (f.size() != block.paths.size())
        throw Error(ErrorCode::kInvalidAssignment, "od " + std::to_string(k) + ": flow/path size mismatch");
      double sum = 0.0;
      for (double v : f) {
        if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidAssignment, "negative path flow");
        sum += v;
      }
      double demand = demand_of(od, cls);
      if (std::abs(sum - demand) > detail::demand_tolerance(demand))
        throw Error(ErrorCode::kInvalidAssignment,
                    "od " + std::to_string(k) + ": path flows do not sum to demand");
    }
  }
}

inline FlowVector to_link_flows(const Network& net, const PathFlowAssignment& pf) {
  FlowVector z(net.num_roads());
  for (const OdPathFlows& block : pf.od) {
    for (std::size_t p = 0; p < block.paths.size(); ++p) {
      for (VehicleClass cls : kVehicleClasses) {
        double f = block.of(cls)[p];
        if (f == 0.0) continue;
        for (std::size_t r : block.paths[p]) z[r][cls] += f;
      }
    }
  }
  return z;
}

/// Empty assignment skeleton over `paths` with all flows zero.
inline PathFlowAssignment zero_assignment(const PathSet& paths) {
  PathFlowAssignment pf;
  for (const auto& ps : paths.by_od) {
    OdPathFlows block;
    block.paths = ps;
    for (auto& f : block.flow) f.assign(ps.size(), 0.0);
    pf.od.push_back(std::move(block));
  }
  return pf;
}

/// Each OD-class demand split evenly over its paths.
inline PathFlowAssignment uniform_assignment(const Network& net, const PathSet& paths) {
  PathFlowAssignment pf = zero_assignment(paths);
  for (std::size_t k = 0; k < pf.od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      auto& f = pf.od[k].of(cls);
      std::fill(f.begin(), f.end(), demand_of(net.od_pairs()[k], cls) / static_cast<double>(f.size()));
    }
  return pf;
}

/// Each OD-class demand on the single path chosen by `choice(od, class)`.
template <typename Choice>
PathFlowAssignment all_or_nothing(const Network& net, const PathSet& paths, Choice&& choice) {
  PathFlowAssignment pf = zero_assignment(paths);
  for (std::size_t k = 0; k < pf.od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses)
      pf.od[k].of(cls).at(choice(k, cls)) = demand_of(net.od_pairs()[k], cls);
  return pf;
}

/// Uniformly random point (flat Dirichlet) in each OD-class demand simplex.
template <typename Rng>
PathFlowAssignment random_assignment(const Network& net, const PathSet& paths, Rng& rng) {
  PathFlowAssignment pf = zero_assignment(paths);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t k = 0; k < pf.od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      auto& f = pf.od[k].of(cls);
      double sum = 0.0;
      for (double& v : f) sum += (v = expo(rng));
      double demand = demand_of(net.od_pairs()[k], cls);
      for (double& v : f) v = demand * v / sum;
    }
  return pf;
}

struct FeasibilityReport {
  bool feasible = false;
  double max_conservation_residual = 0.0;
  std::vector<std::string> diagnostics;
};

/// Membership test for the feasible routing set.  Checks non-negativity,
/// per-node per-class conservation, then peels each OD pair's demand off the
/// link flows along its enumerated paths; any demand left unrouted or any
/// link flow left over means `z` is not produced by a valid assignment.
/// Exact for one OD pair per class; with several OD pairs sharing roads the
/// greedy peel can reject a feasible vector.
inline FeasibilityReport check_feasible(const Network& net, const FlowVector& z, std::size_t max_hops = 0) {
  if (z.size() != net.num_roads())
    throw Error(ErrorCode::kDimensionMismatch,
                "flow vector has " + std::to_string(z.size()) + " roads, network has " +
                    std::to_string(net.num_roads()));
  FeasibilityReport rep;
  double scale = 1.0;
  for (const OdPair& od : net.od_pairs()) scale = std::max(scale, od.total_demand());
  const double tol = 1e-9 * scale;

  for (std::size_t i = 0; i < z.size(); ++i)
    for (VehicleClass cls : kVehicleClasses)
      if (!(z[i][cls] >= 0.0) || !std::isfinite(z[i][cls]))
        rep.diagnostics.push_back("road " + std::to_string(i) + ": negative or non-finite entry");
  if (!rep.diagnostics.empty()) return rep;

  for (VehicleClass cls : kVehicleClasses) {
    std::vector<double> balance(net.num_nodes(), 0.0);  // outflow - inflow - supply
    for (std::size_t i = 0; i < z.size(); ++i) {
      balance[net.road(i).tail] += z[i][cls];
      balance[net.road(i).head] -= z[i][cls];
    }
    for (const OdPair& od : net.od_pairs()) {
      balance[od.origin] -= demand_of(od, cls);
      balance[od.destination] += demand_of(od, cls);
    }
    for (std::size_t v = 0; v < balance.size(); ++v) {
      rep.max_conservation_residual = std::max(rep.max_conservation_residual, std::abs(balance[v]));
      if (std::abs(balance[v]) > tol)
        rep.diagnostics.push_back((cls == VehicleClass::kHuman ? "human" : "autonomous") +
                                  std::string(" flow not conserved at node '") + net.nodes()[v] + "'");
    }
  }
  if (!rep.diagnostics.empty()) return rep;

  const PathSet paths = enumerate_all_paths(net, max_hops);
  for (VehicleClass cls : kVehicleClasses) {
    std::vector<double> residual(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) residual[i] = z[i][cls];
    for (std::size_t k = 0; k < net.od_pairs().size(); ++k) {
      double remaining = demand_of(net.od_pairs()[k], cls);
      for (const Path& p : paths.by_od[k]) {
        if (remaining <= 0.0) break;
        double cap = remaining;
        for (std::size_t r : p) cap = std::min(cap, residual[r]);
        if (cap <= 0.0) continue;
        for (std::size_t r : p) residual[r] -= cap;
        remaining -= cap;
      }
      if (remaining > tol)
        rep.diagnostics.push_back("od " + std::to_string(k) + ": demand not routable by link flows");
    }
    for (std::size_t i = 0; i < residual.size(); ++i)
      if (residual[i] > tol)
        rep.diagnostics.push_back("road " + std::to_string(i) + ": flow not explained by any OD path");
  }
  rep.feasible = rep.diagnostics.empty();
  return rep;
}

/// Copy of the network's description with every demand multiplied by `factor`.
inline Network scale_demand(const Network& net, double factor) {
  NetworkSpec spec = net.spec();
  for (OdSpec& od : spec.od_pairs) {
    od.human_demand *= factor;
    od.auto_demand *= factor;
  }
  return build_network(spec);
}

}  // namespace mar
