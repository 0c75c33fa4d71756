#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mar/costs.hpp"
#include "mar/equilibrium.hpp"
#include "mar/network.hpp"
#include "mar/simplex.hpp"

namespace mar {

struct OptimumConfig {
  std::size_t restarts = 32;
  std::size_t max_iterations = 10000;  // per restart
  double step_tolerance = 1e-9;
  double grid_resolution = 1e-2;  // brute-force oracle only
  std::uint64_t seed = 0;
  std::size_t max_hops = 0;
};

/// Largest number of positive-demand (OD, class, path) triples the grid
/// oracle accepts.
inline constexpr std::size_t kGridPathLimit = 6;

namespace detail {

/// d C / d x_i and d C / d y_i for every road: c_i + (x_i + y_i) * slope.
inline std::vector<LinkFlow> marginal_costs(const Network& net, const FlowVector& z) {
  std::vector<LinkFlow> mc(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Road& road = net.road(i);
    const double c = link_cost(road, z[i].human, z[i].autonomous);
    const auto [gx, gy] = link_cost_gradient(road, z[i].human, z[i].autonomous);
    mc[i] = {c + z[i].total() * gx, c + z[i].total() * gy};
  }
  return mc;
}

/// Gradient of C with respect to every path flow, laid out like the
/// assignment's flow vectors.
inline PathFlowAssignment path_gradient(const Network& net, const PathFlowAssignment& pf,
                                        const FlowVector& z) {
  const std::vector<LinkFlow> mc = marginal_costs(net, z);
  PathFlowAssignment g = pf;
  for (OdPathFlows& block : g.od)
    for (VehicleClass cls : kVehicleClasses)
      for (std::size_t p = 0; p < block.paths.size(); ++p) {
        double acc = 0.0;
        for (std::size_t r : block.paths[p]) acc += mc[r][cls];
        block.of(cls)[p] = acc;
      }
  return g;
}

/// Demand-weighted excess of used-path marginal cost over the cheapest
/// marginal cost, divided by C: zero exactly at a first-order stationary
/// point of C over the product of demand simplices.
inline double stationarity(const Network& net, const PathFlowAssignment& pf, const FlowVector& z,
                           double cost) {
  const PathFlowAssignment g = path_gradient(net, pf, z);
  double excess = 0.0;
  for (std::size_t k = 0; k < pf.od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      const auto& gk = g.od[k].of(cls);
      const auto& fk = pf.od[k].of(cls);
      if (gk.empty()) continue;
      const double lowest = *std::min_element(gk.begin(), gk.end());
      for (std::size_t p = 0; p < gk.size(); ++p) excess += fk[p] * (gk[p] - lowest);
    }
  return cost > 0.0 ? excess / cost : (excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
}

inline double assignment_cost(const Network& net, const PathFlowAssignment& pf) {
  return social_cost(net, to_link_flows(net, pf));
}

/// Projected gradient descent with Armijo backtracking along the projection
/// arc, over the product of OD-class demand simplices.
inline SolveResult descend(const Network& net, PathFlowAssignment pf, const OptimumConfig& cfg) {
  FlowVector z = to_link_flows(net, pf);
  double cost = social_cost(net, z);
  double step = -1.0;
  std::size_t it = 0;
  bool settled = false;
  for (; it < cfg.max_iterations; ++it) {
    const PathFlowAssignment g = path_gradient(net, pf, z);
    if (step < 0.0) {
      double gmax = 0.0, fmax = 0.0;
      for (std::size_t k = 0; k < pf.od.size(); ++k)
        for (VehicleClass cls : kVehicleClasses) {
          for (double v : g.od[k].of(cls)) gmax = std::max(gmax, std::abs(v));
          fmax = std::max(fmax, demand_of(net.od_pairs()[k], cls));
        }
      step = gmax > 0.0 ? fmax / gmax : 1.0;
    } else {
      step *= 2.0;
    }

    PathFlowAssignment candidate = pf;
    double candidate_cost = cost;
    double moved = 0.0, norm = 0.0;
    bool accepted = false;
    while (step > 1e-300) {
      double descent = 0.0;
      moved = norm = 0.0;
      for (std::size_t k = 0; k < pf.od.size(); ++k)
        for (VehicleClass cls : kVehicleClasses) {
          const auto& f = pf.od[k].of(cls);
          auto& c = candidate.od[k].of(cls);
          const auto& gk = g.od[k].of(cls);
          for (std::size_t p = 0; p < f.size(); ++p) c[p] = f[p] - step * gk[p];
          project_onto_simplex<double>(c, demand_of(net.od_pairs()[k], cls));
          for (std::size_t p = 0; p < f.size(); ++p) {
            descent += gk[p] * (c[p] - f[p]);
            moved += (c[p] - f[p]) * (c[p] - f[p]);
            norm += f[p] * f[p];
          }
        }
      candidate_cost = assignment_cost(net, candidate);
      if (candidate_cost <= cost + 1e-4 * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      settled = true;
      break;
    }
    pf = std::move(candidate);
    z = to_link_flows(net, pf);
    cost = candidate_cost;
    if (std::sqrt(moved) <= cfg.step_tolerance * (1.0 + std::sqrt(norm))) {
      settled = true;
      ++it;
      break;
    }
  }
  SolveResult out;
  out.link_flows = z;
  out.social_cost = cost;
  out.relative_gap = stationarity(net, pf, z, cost);
  out.flows = std::move(pf);
  out.iterations = it;
  out.converged = settled;
  return out;
}

/// Compositions of `units` into `parts` non-negative integers, lexicographic.
inline std::vector<std::vector<int>> compositions(int units, std::size_t parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  auto rec = [&](auto&& self, std::size_t idx, int left) -> void {
    if (idx + 1 == parts) {
      cur[idx] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  if (parts > 0) rec(rec, 0, units);
  return out;
}

}  // namespace detail

/// Best local minimizer of the social cost found over `cfg.restarts` starts:
/// the even split first, then flat-Dirichlet random points.  `relative_gap`
/// holds the marginal-cost stationarity measure of the returned point.
inline SolveResult solve_optimum(const Network& net, const OptimumConfig& cfg = {}) {
  if (cfg.restarts < 1) throw Error(ErrorCode::kInvalidParameter, "restarts must be >= 1");
  const PathSet paths = enumerate_all_paths(net, cfg.max_hops);
  std::mt19937_64 rng(cfg.seed);
  SolveResult best;
  best.social_cost = std::numeric_limits<double>::infinity();
  std::size_t total_iterations = 0;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    PathFlowAssignment start = r == 0 ? uniform_assignment(net, paths) : random_assignment(net, paths, rng);
    SolveResult local = detail::descend(net, std::move(start), cfg);
    total_iterations += local.iterations;
    if (local.social_cost < best.social_cost) best = std::move(local);
  }
  best.iterations = total_iterations;
  return best;
}

/// Optimum of the same network with every demand multiplied by `factor`.
inline SolveResult solve_scaled_optimum(const Network& net, double factor, const OptimumConfig& cfg = {}) {
  if (!(factor >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "scale factor must be >= 1");
  return solve_optimum(scale_demand(net, factor), cfg);
}

struct GridSearchResult {
  SolveResult best;
  std::size_t points = 0;
  double max_gradient_norm = 0.0;  // over grid points, path coordinates
  double cell_radius = 0.0;        // bound on distance to the nearest grid point
  double lipschitz_tolerance() const { return max_gradient_norm * cell_radius; }
};

/// Number of (OD, class, path) triples with positive demand.
inline std::size_t grid_path_count(const Network& net, const PathSet& paths) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < paths.by_od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses)
      if (demand_of(net.od_pairs()[k], cls) > 0.0) n += paths.by_od[k].size();
  return n;
}

/// Number of grid points the oracle would visit at `resolution`.
inline double grid_size(const Network& net, const PathSet& paths, double resolution) {
  const double units = std::round(1.0 / resolution);
  double total = 1.0;
  for (std::size_t k = 0; k < paths.by_od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      if (demand_of(net.od_pairs()[k], cls) <= 0.0) continue;
      const double parts = static_cast<double>(paths.by_od[k].size());
      // C(units + parts - 1, parts - 1)
      double c = 1.0;
      for (double j = 1; j < parts; ++j) c = c * (units + j) / j;
      total *= c;
    }
  return total;
}

/// Exhaustive search of every OD-class simplex on a grid with spacing
/// `resolution * demand`.  Ties keep the lexicographically first point.
inline GridSearchResult grid_search_optimum(const Network& net, double resolution, std::size_t max_hops = 0) {
  if (!(resolution > 0.0 && resolution <= 1.0))
    throw Error(ErrorCode::kInvalidParameter, "grid resolution must be in (0, 1]");
  const PathSet paths = enumerate_all_paths(net, max_hops);
  if (grid_path_count(net, paths) > kGridPathLimit)
    throw Error(ErrorCode::kTooLarge, "grid oracle limited to " + std::to_string(kGridPathLimit) + " paths");
  const int units = static_cast<int>(std::round(1.0 / resolution));
  const double spacing = 1.0 / units;

  struct Block {
    std::size_t od;
    VehicleClass cls;
    double demand;
    std::vector<std::vector<int>> points;
  };
  std::vector<Block> blocks;
  GridSearchResult out;
  double radius_sq = 0.0;
  for (std::size_t k = 0; k < paths.by_od.size(); ++k)
    for (VehicleClass cls : kVehicleClasses) {
      const double demand = demand_of(net.od_pairs()[k], cls);
      if (demand <= 0.0) continue;
      const std::size_t parts = paths.by_od[k].size();
      blocks.push_back({k, cls, demand, detail::compositions(units, parts)});
      const double cell = spacing * demand;
      radius_sq += static_cast<double>(parts) * cell * cell;
    }
  out.cell_radius = std::sqrt(radius_sq);

  PathFlowAssignment pf = zero_assignment(paths);
  std::vector<std::size_t> odometer(blocks.size(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  PathFlowAssignment best_pf = pf;
  while (true) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto& f = pf.od[blocks[b].od].of(blocks[b].cls);
      const auto& pt = blocks[b].points[odometer[b]];
      for (std::size_t p = 0; p < f.size(); ++p) f[p] = blocks[b].demand * pt[p] * spacing;
    }
    const FlowVector z = to_link_flows(net, pf);
    const double c = social_cost(net, z);
    ++out.points;
    const PathFlowAssignment g = detail::path_gradient(net, pf, z);
    double norm_sq = 0.0;
    for (const Block& b : blocks)
      for (double v : g.od[b.od].of(b.cls)) norm_sq += v * v;
    out.max_gradient_norm = std::max(out.max_gradient_norm, std::sqrt(norm_sq));
    if (c < best_cost) {
      best_cost = c;
      best_pf = pf;
    }
    bool advanced = false;
    for (std::size_t b = blocks.size(); b-- > 0;) {
      if (++odometer[b] < blocks[b].points.size()) {
        advanced = true;
        break;
      }
      odometer[b] = 0;
    }
    if (!advanced) break;
  }
  out.best.link_flows = to_link_flows(net, best_pf);
  out.best.social_cost = best_cost;
  out.best.relative_gap = detail::stationarity(net, best_pf, out.best.link_flows, best_cost);
  out.best.flows = std::move(best_pf);
  out.best.iterations = out.points;
  out.best.converged = true;
  return out;
}

inline SolveResult brute_force_optimum(const Network& net, double resolution) {
  return grid_search_optimum(net, resolution).best;
}

}  // namespace mar
