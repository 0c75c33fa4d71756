#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mar/costs.hpp"
#include "mar/network.hpp"

namespace mar {

/// Update rule used between equilibrium iterates.
///   kMsa                  successive averages toward the all-or-nothing
///                         shortest-path assignment, step 1/(n+1)
///   kSelfRegulatedMsa     same direction, step 1/beta_n where beta_n grows
///                         faster whenever the gap got worse
///   kGradientProjection   per OD and class, shift flow from each costlier
///                         path to the cheapest one by cost difference over
///                         the cost slope (Newton step), damped on gap growth
enum class StepRule { kMsa, kSelfRegulatedMsa, kGradientProjection };

/// Starting point of the equilibrium iteration.
enum class StartRule { kRandom, kUniform, kFreeFlow };

struct EquilibriumConfig {
  std::size_t max_iterations = 100000;
  double gap_tolerance = 1e-6;
  StepRule step_rule = StepRule::kGradientProjection;
  StartRule start = StartRule::kRandom;
  std::uint64_t seed = 0;
  std::size_t max_hops = 0;  // 0: number of nodes
};

/// Solver output shared by the equilibrium and optimum solvers.  For the
/// optimum, `relative_gap` is the stationarity measure described there.
struct SolveResult {
  PathFlowAssignment flows;
  FlowVector link_flows;
  double social_cost = 0.0;
  double relative_gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct WardropGap {
  double absolute = 0.0;
  double relative = 0.0;
};

namespace detail {

inline std::vector<double> road_costs(const Network& net, const FlowVector& z) {
  std::vector<double> c(net.num_roads());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = link_cost(net.road(i), z[i].human, z[i].autonomous);
  return c;
}

inline double path_cost(const std::vector<double>& road_cost, const Path& path) {
  double c = 0.0;
  for (std::size_t r : path) c += road_cost[r];
  return c;
}

/// Index of the cheapest path; ties go to the lowest index.
inline std::size_t cheapest(const std::vector<double>& costs) {
  std::size_t best = 0;
  for (std::size_t p = 1; p < costs.size(); ++p)
    if (costs[p] < costs[best]) best = p;
  return best;
}

/// Gap and social cost without the zero-cost guard, for use inside solvers.
inline WardropGap gap_of(const Network& net, const PathFlowAssignment& pf, const FlowVector& z,
                         double* social = nullptr) {
  const std::vector<double> rc = road_costs(net, z);
  double total = 0.0;
  for (std::size_t i = 0; i < rc.size(); ++i) total += rc[i] * z[i].total();
  WardropGap gap;
  for (const OdPathFlows& block : pf.od) {
    std::vector<double> pc(block.paths.size());
    for (std::size_t p = 0; p < pc.size(); ++p) pc[p] = path_cost(rc, block.paths[p]);
    const double shortest = pc[cheapest(pc)];
    for (VehicleClass cls : kVehicleClasses)
      for (std::size_t p = 0; p < pc.size(); ++p) gap.absolute += block.of(cls)[p] * (pc[p] - shortest);
  }
  if (social) *social = total;
  if (total > 0.0)
    gap.relative = gap.absolute / total;
  else
    gap.relative = gap.absolute > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return gap;
}

inline PathFlowAssignment shortest_path_assignment(const Network& net, const PathFlowAssignment& like,
                                                   const std::vector<double>& rc) {
  PathFlowAssignment target = like;
  for (std::size_t k = 0; k < target.od.size(); ++k) {
    OdPathFlows& block = target.od[k];
    std::vector<double> pc(block.paths.size());
    for (std::size_t p = 0; p < pc.size(); ++p) pc[p] = path_cost(rc, block.paths[p]);
    const std::size_t best = cheapest(pc);
    for (VehicleClass cls : kVehicleClasses) {
      auto& f = block.of(cls);
      std::fill(f.begin(), f.end(), 0.0);
      f[best] = demand_of(net.od_pairs()[k], cls);
    }
  }
  return target;
}

inline void blend(PathFlowAssignment& pf, const PathFlowAssignment& target, double step) {
  for (std::size_t k = 0; k < pf.od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      auto& f = pf.od[k].of(cls);
      const auto& t = target.od[k].of(cls);
      for (std::size_t p = 0; p < f.size(); ++p) f[p] = (1.0 - step) * f[p] + step * t[p];
    }
}

inline double class_slope(const Road& road, const LinkFlow& flow, VehicleClass cls) {
  const auto [gx, gy] = link_cost_gradient(road, flow.human, flow.autonomous);
  return cls == VehicleClass::kHuman ? gx : gy;
}

/// One Gauss-Seidel sweep of path-based gradient projection.
inline void projection_sweep(const Network& net, PathFlowAssignment& pf, FlowVector& z, double damping) {
  auto move = [&](const Path& path, VehicleClass cls, double amount) {
    for (std::size_t r : path) z[r][cls] = std::max(0.0, z[r][cls] + amount);
  };
  auto cost_of = [&](const Path& path) {
    double c = 0.0;
    for (std::size_t r : path) c += link_cost(net.road(r), z[r].human, z[r].autonomous);
    return c;
  };
  for (std::size_t k = 0; k < pf.od.size(); ++k) {
    OdPathFlows& block = pf.od[k];
    if (block.paths.size() < 2) continue;
    for (VehicleClass cls : kVehicleClasses) {
      auto& f = block.of(cls);
      if (demand_of(net.od_pairs()[k], cls) <= 0.0) continue;
      std::vector<double> pc(block.paths.size());
      for (std::size_t p = 0; p < pc.size(); ++p) pc[p] = cost_of(block.paths[p]);
      const std::size_t best = cheapest(pc);
      const Path& target = block.paths[best];
      for (std::size_t p = 0; p < f.size(); ++p) {
        if (p == best || f[p] <= 0.0) continue;
        const Path& source = block.paths[p];
        const double diff = cost_of(source) - cost_of(target);
        if (diff <= 0.0) continue;
        double slope = 0.0;
        for (std::size_t r : source)
          if (std::find(target.begin(), target.end(), r) == target.end())
            slope += class_slope(net.road(r), z[r], cls);
        for (std::size_t r : target)
          if (std::find(source.begin(), source.end(), r) == source.end())
            slope += class_slope(net.road(r), z[r], cls);
        const double shift = slope > 0.0 ? std::min(f[p], damping * diff / slope) : damping * f[p];
        if (shift <= 0.0) continue;
        f[p] = shift >= f[p] ? 0.0 : f[p] - shift;
        f[best] += shift;
        move(source, cls, -shift);
        move(target, cls, shift);
      }
    }
  }
}

inline PathFlowAssignment initial_assignment(const Network& net, const PathSet& paths,
                                             const EquilibriumConfig& cfg) {
  switch (cfg.start) {
    case StartRule::kUniform:
      return uniform_assignment(net, paths);
    case StartRule::kFreeFlow: {
      const PathFlowAssignment skeleton = zero_assignment(paths);
      return shortest_path_assignment(net, skeleton, road_costs(net, FlowVector(net.num_roads())));
    }
    case StartRule::kRandom:
    default: {
      std::mt19937_64 rng(cfg.seed);
      return random_assignment(net, paths, rng);
    }
  }
}

}  // namespace detail

/// Demand-weighted excess of used-path costs over the cheapest path, summed
/// over OD pairs and classes, and its ratio to the social cost.  Zero exactly
/// at a Wardrop equilibrium.
inline WardropGap wardrop_gap(const Network& net, const PathFlowAssignment& pf) {
  const FlowVector z = to_link_flows(net, pf);
  double social = 0.0;
  WardropGap gap = detail::gap_of(net, pf, z, &social);
  if (social <= 0.0) {
    double demand = 0.0;
    for (const OdPair& od : net.od_pairs()) demand += od.total_demand();
    if (demand > 0.0) throw Error(ErrorCode::kZeroCost, "social cost is zero with positive demand");
  }
  return gap;
}

/// <c(z_eq), z_eq - z>; non-positive for every feasible z when z_eq is an
/// equilibrium.
inline double vi_residual(const Network& net, const FlowVector& z_eq, const FlowVector& z) {
  detail::require_size(net, z_eq.size());
  detail::require_size(net, z.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double c = link_cost(net.road(i), z_eq[i].human, z_eq[i].autonomous);
    acc += c * (z_eq[i].human - z[i].human) + c * (z_eq[i].autonomous - z[i].autonomous);
  }
  return acc;
}

using IterateObserver = std::function<void(std::size_t iteration, const PathFlowAssignment&)>;

/// Wardrop equilibrium from an explicit starting assignment.  Returns the
/// iterate with the smallest relative gap seen; `converged` reports whether
/// it meets the tolerance.
inline SolveResult solve_equilibrium(const Network& net, const EquilibriumConfig& cfg,
                                     PathFlowAssignment start, const IterateObserver& observe = {}) {
  if (!(cfg.gap_tolerance > 0.0)) throw Error(ErrorCode::kInvalidParameter, "gap_tolerance must be > 0");
  if (cfg.max_iterations < 1) throw Error(ErrorCode::kInvalidParameter, "max_iterations must be >= 1");
  validate_assignment(net, start);

  PathFlowAssignment pf = std::move(start);
  FlowVector z = to_link_flows(net, pf);
  std::size_t iteration = 1;
  if (observe) observe(iteration, pf);
  WardropGap gap = detail::gap_of(net, pf, z);

  SolveResult best{pf, z, 0.0, gap.relative, iteration, false};
  double previous = gap.relative;
  double damping = 1.0;     // gradient projection
  double inverse_step = 1.0;  // self-regulated averaging

  while (best.relative_gap > cfg.gap_tolerance && iteration < cfg.max_iterations) {
    switch (cfg.step_rule) {
      case StepRule::kGradientProjection:
        detail::projection_sweep(net, pf, z, damping);
        break;
      case StepRule::kMsa: {
        const auto target = detail::shortest_path_assignment(net, pf, detail::road_costs(net, z));
        detail::blend(pf, target, 1.0 / static_cast<double>(iteration + 1));
        break;
      }
      case StepRule::kSelfRegulatedMsa: {
        const auto target = detail::shortest_path_assignment(net, pf, detail::road_costs(net, z));
        inverse_step += gap.relative > previous ? 1.5 : 0.05;
        detail::blend(pf, target, 1.0 / inverse_step);
        break;
      }
    }
    ++iteration;
    z = to_link_flows(net, pf);
    previous = gap.relative;
    gap = detail::gap_of(net, pf, z);
    if (observe) observe(iteration, pf);
    if (cfg.step_rule == StepRule::kGradientProjection)
      damping = gap.relative > previous ? std::max(0.5 * damping, 1e-3) : std::min(1.0, 1.25 * damping);
    if (gap.relative < best.relative_gap) {
      best.flows = pf;
      best.link_flows = z;
      best.relative_gap = gap.relative;
    }
    best.iterations = iteration;
  }
  best.link_flows = to_link_flows(net, best.flows);
  best.social_cost = social_cost(net, best.link_flows);
  best.converged = best.relative_gap <= cfg.gap_tolerance;
  return best;
}

inline SolveResult solve_equilibrium(const Network& net, const EquilibriumConfig& cfg = {}) {
  const PathSet paths = enumerate_all_paths(net, cfg.max_hops);
  return solve_equilibrium(net, cfg, detail::initial_assignment(net, paths, cfg));
}

}  // namespace mar
