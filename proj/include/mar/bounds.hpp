#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "mar/costs.hpp"
#include "mar/equilibrium.hpp"
#include "mar/network.hpp"
#include "mar/optimum.hpp"

namespace mar {

/// sigma * (sigma + 1)^(-(sigma + 1) / sigma); below 1 for every sigma >= 1.
template <typename Real>
Real xi(Real sigma) {
  if (!(sigma >= Real(1)) || !std::isfinite(sigma))
    throw Error(ErrorCode::kInvalidSigma, "sigma must be >= 1");
  return sigma * std::pow(sigma + Real(1), -(sigma + Real(1)) / sigma);
}

/// Ratio of the larger headway to the smaller one on a single road.
inline double road_asymmetry(const Road& road) {
  return std::max(road.headway / road.platoon_headway, road.platoon_headway / road.headway);
}

namespace detail {

inline void require_bpr(const Network& net) {
  for (const Road& r : net.roads())
    if (!r.is_bpr())
      throw Error(ErrorCode::kUnsupportedCostKind, "bounds need BPR roads; road '" + r.name + "' is affine");
}

inline void require_bpr(const Road& road) {
  if (!road.is_bpr()) throw Error(ErrorCode::kUnsupportedCostKind, "bounds need a BPR road");
}

}  // namespace detail

/// Maximum degree of asymmetry k over all roads.
inline double degree_of_asymmetry(const Network& net) {
  detail::require_bpr(net);
  double k = 1.0;
  for (const Road& r : net.roads()) k = std::max(k, road_asymmetry(r));
  return k;
}

/// Maximum polynomial degree over all roads.
inline double max_degree(const Network& net) {
  double s = 1.0;
  for (const Road& r : net.roads()) s = std::max(s, r.sigma);
  return s;
}

struct BoundsReport {
  double k = 1.0;
  double sigma = 1.0;
  double xi = 0.25;
  double bound_thm1 = 4.0 / 3.0;             // k^sigma / (1 - xi)
  std::optional<double> bound_thm2;          // 1 / (1 - k xi), only when k xi < 1
  double bound_combined = 4.0 / 3.0;
  double bicriteria_factor = 1.25;           // 1 + k xi
};

inline BoundsReport poa_bounds(double k, double sigma) {
  if (!(k >= 1.0)) throw Error(ErrorCode::kInvalidParameter, "k must be >= 1");
  BoundsReport rep;
  rep.k = k;
  rep.sigma = sigma;
  rep.xi = xi(sigma);
  rep.bound_thm1 = std::pow(k, sigma) / (1.0 - rep.xi);
  rep.bound_combined = rep.bound_thm1;
  if (k * rep.xi < 1.0) {
    rep.bound_thm2 = 1.0 / (1.0 - k * rep.xi);
    rep.bound_combined = std::min(rep.bound_thm1, *rep.bound_thm2);
  }
  rep.bicriteria_factor = 1.0 + k * rep.xi;
  return rep;
}

inline BoundsReport poa_bounds(const Network& net) {
  return poa_bounds(degree_of_asymmetry(net), max_degree(net));
}

/// Single-class latency built from an equilibrium point of one road: the
/// flow type that takes more road space is loaded first (up to its
/// equilibrium amount, the anchor), then the other type.  Evaluating at the
/// equilibrium total reproduces the road's latency there.
class AggregateCost {
 public:
  AggregateCost(const Road& road, double x_eq, double y_eq) : road_(road), x_eq_(x_eq), y_eq_(y_eq) {
    detail::require_bpr(road);
    detail::require_nonnegative(x_eq, y_eq);
    autonomous_first_ = road.platoon_headway > road.headway;
    anchor_ = autonomous_first_ ? y_eq : x_eq;
  }

  double anchor() const { return anchor_; }
  bool autonomous_first() const { return autonomous_first_; }

  double operator()(double f) const { return f <= anchor_ ? below(f) : above(f); }

  /// Branch used up to the anchor, f in [0, anchor].
  double below(double f) const { return latency(costly_headway() * f); }

  /// Branch used past the anchor.
  double above(double f) const {
    if (f <= 0.0) return latency(0.0);
    const double h = road_.headway;
    const double hp = road_.platoon_headway;
    if (road_.model == CapacityModel::kPlatoonBehindAny) {
      const double cheap = std::min(h, hp);
      return latency(cheap * f + (costly_headway() - cheap) * anchor_);
    }
    if (!autonomous_first_) {
      const double extra = f - x_eq_;
      return latency((h * f * f - (h - hp) * extra * extra) / f);
    }
    // Autonomous platoons first; each added human-driven vehicle joins the
    // mix with autonomy level y_eq / f.
    return latency((h * f * f + (hp - h) * y_eq_ * y_eq_) / f);
  }

 private:
  double costly_headway() const { return std::max(road_.headway, road_.platoon_headway); }

  double latency(double occupied) const {
    if (road_.rho == 0.0 || occupied <= 0.0) return road_.freeflow;
    return road_.freeflow * (1.0 + road_.rho * std::pow(occupied / road_.length, road_.sigma));
  }

  Road road_;
  double x_eq_;
  double y_eq_;
  double anchor_ = 0.0;
  bool autonomous_first_ = false;
};

inline AggregateCost aggregate_cost(const Road& road, double x_eq, double y_eq) {
  return AggregateCost(road, x_eq, y_eq);
}

/// Social cost of the aggregated single-class game at f = x + y per road.
inline double aggregate_social_cost(const Network& net, const FlowVector& z_eq) {
  detail::require_bpr(net);
  detail::require_size(net, z_eq.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z_eq.size(); ++i) {
    const double f = z_eq[i].total();
    total += f * aggregate_cost(net.road(i), z_eq[i].human, z_eq[i].autonomous)(f);
  }
  return total;
}

namespace detail {

/// ((x+y)/(v+w)) * (1 - (m(v,w)(x+y) / (m(x,y)(v+w)))^sigma), from capacities.
inline double beta_objective(const Road& road, double v, double w, double x, double y, double sigma) {
  const double total = x + y;
  if (total <= 0.0) return 0.0;
  const double ref = v + w;
  const double load = total / capacity(road, x, y);
  const double ref_load = ref / capacity(road, v, w);
  return total / ref * (1.0 - std::pow(load / ref_load, sigma));
}

template <typename F>
double golden_max(F&& fn, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + hi); ++it) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    }
  }
  return std::max({fn(a), fn(b), fc, fd});
}

}  // namespace detail

/// Numeric maximum of the per-road beta expression over (x, y) >= 0 for a
/// reference flow (v, w).  Golden-section search along both axes, where the
/// maximum lies, plus a coarse interior grid that would expose any interior
/// point beating the axes.
inline double beta_road_numeric(const Road& road, double v, double w, double sigma_use) {
  detail::require_bpr(road);
  detail::require_nonnegative(v, w);
  if (v + w <= 0.0) throw Error(ErrorCode::kZeroReference, "reference flow v + w must be > 0");
  xi(sigma_use);
  const double bound = 3.0 * (v + w) * road_asymmetry(road);
  auto along_x = [&](double s) { return detail::beta_objective(road, v, w, s, 0.0, sigma_use); };
  auto along_y = [&](double s) { return detail::beta_objective(road, v, w, 0.0, s, sigma_use); };
  double best = std::max({0.0, detail::golden_max(along_x, 0.0, bound), detail::golden_max(along_y, 0.0, bound)});
  constexpr int kGrid = 16;
  for (int i = 1; i <= kGrid; ++i)
    for (int j = 1; j <= kGrid; ++j) {
      const double x = bound * i / kGrid, y = bound * j / kGrid;
      best = std::max(best, detail::beta_objective(road, v, w, x, y, sigma_use));
    }
  return best;
}

/// Closed-form per-road beta maximum.  With Q the road space taken by the
/// reference flow (linear in (v, w) for the first capacity model, quadratic
/// over (v + w) for the second) and h_min the smaller headway, the maximum
/// sits on the axis of the cheaper vehicle type and equals
///   xi(sigma) * Q / (h_min * (v + w)).
inline double beta_road_closed_form(const Road& road, double v, double w, double sigma_use) {
  detail::require_bpr(road);
  detail::require_nonnegative(v, w);
  const double ref = v + w;
  if (ref <= 0.0) throw Error(ErrorCode::kZeroReference, "reference flow v + w must be > 0");
  const double h = road.headway, hp = road.platoon_headway;
  const double cheap = std::min(h, hp);
  const double occupied = road.model == CapacityModel::kPlatoonBehindAny
                              ? h * v + hp * w
                              : (h * v * v + 2.0 * h * v * w + hp * w * w) / ref;
  return xi(sigma_use) * occupied / (cheap * ref);
}

/// Largest per-road closed-form beta over `samples` random feasible
/// reference routings, using the network's maximum degree.  A lower estimate
/// of beta over the class; the analytic cap is k * xi(sigma).
inline double beta_network_estimate(const Network& net, std::size_t samples, std::uint64_t seed,
                                    std::size_t max_hops = 0) {
  detail::require_bpr(net);
  const double sigma = max_degree(net);
  const PathSet paths = enumerate_all_paths(net, max_hops);
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const FlowVector q = to_link_flows(net, random_assignment(net, paths, rng));
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i].total() <= 0.0) continue;  // 0/0 = 0
      best = std::max(best, beta_road_closed_form(net.road(i), q[i].human, q[i].autonomous, sigma));
    }
  }
  return best;
}

/// c(f) / c(g) >= (f / g)^sigma for the aggregate latency of `road`.
inline bool verify_lemma_agg_poa_ratio(const Road& road, double x_eq, double y_eq, double f, double g) {
  if (f > g) throw Error(ErrorCode::kInvalidOrder, "need f <= g");
  if (!(g > 0.0)) throw Error(ErrorCode::kZeroReference, "need g > 0");
  if (!(f >= 0.0)) throw Error(ErrorCode::kNegativeFlow, "need f >= 0");
  const AggregateCost agg(road, x_eq, y_eq);
  const double cg = agg(g);
  if (cg <= 0.0) return true;  // zero latency everywhere
  return agg(f) / cg >= std::pow(f / g, road.sigma) - 1e-12;
}

/// k^sigma c(x, y) >= max(c(x + y, 0), c(0, x + y)) with the road's own k
/// and sigma.
inline bool verify_lemma_agg_opt(const Road& road, double x, double y) {
  detail::require_bpr(road);
  const double lhs = std::pow(road_asymmetry(road), road.sigma) * link_cost(road, x, y);
  const double rhs = std::max(link_cost(road, x + y, 0.0), link_cost(road, 0.0, x + y));
  return lhs >= rhs - 1e-12 * (1.0 + rhs);
}

enum class OptimumOracle { kLocalSearch, kGrid };

inline std::string_view to_string(OptimumOracle o) {
  return o == OptimumOracle::kGrid ? "grid" : "local";
}

struct PoaEstimate {
  double ratio = 1.0;
  double eq_cost = 0.0;
  double opt_cost = 0.0;
  double eq_gap = 0.0;
  bool eq_converged = false;
  OptimumOracle oracle = OptimumOracle::kLocalSearch;
  double grid_resolution = 0.0;  // when the grid ran
  SolveResult equilibrium;
  SolveResult optimum;
};

/// The grid oracle is skipped above this many points; resolution is first
/// coarsened through {1, 2, 5, 10} x the configured value.
inline constexpr double kGridPointBudget = 2.5e5;

/// Picks the finest admissible grid resolution, or nullopt when the network
/// is outside the oracle's guard.
inline std::optional<double> admissible_grid_resolution(const Network& net, const PathSet& paths,
                                                        double resolution) {
  if (grid_path_count(net, paths) > kGridPathLimit) return std::nullopt;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    const double r = std::min(1.0, resolution * mult);
    if (grid_size(net, paths, r) <= kGridPointBudget) return r;
  }
  return std::nullopt;
}

/// C(z_eq) / C(z_opt) for an equilibrium (solved, or given) and the best
/// optimum found.  When the grid oracle is admissible its best point also
/// competes for the optimum, and the estimate is labeled kGrid.
inline PoaEstimate empirical_poa(const Network& net, const SolveResult& equilibrium, const OptimumConfig& opt_cfg) {
  detail::require_bpr(net);
  PoaEstimate out;
  out.equilibrium = equilibrium;
  out.eq_cost = equilibrium.social_cost;
  out.eq_gap = equilibrium.relative_gap;
  out.eq_converged = equilibrium.converged;
  out.optimum = solve_optimum(net, opt_cfg);
  const PathSet paths = enumerate_all_paths(net, opt_cfg.max_hops);
  if (auto r = admissible_grid_resolution(net, paths, opt_cfg.grid_resolution)) {
    GridSearchResult grid = grid_search_optimum(net, *r, opt_cfg.max_hops);
    out.oracle = OptimumOracle::kGrid;
    out.grid_resolution = *r;
    if (grid.best.social_cost < out.optimum.social_cost) out.optimum = std::move(grid.best);
  }
  out.opt_cost = out.optimum.social_cost;
  out.ratio = out.opt_cost > 0.0 ? out.eq_cost / out.opt_cost : 1.0;
  return out;
}

inline PoaEstimate empirical_poa(const Network& net, const EquilibriumConfig& eq_cfg, const OptimumConfig& opt_cfg) {
  detail::require_bpr(net);
  return empirical_poa(net, solve_equilibrium(net, eq_cfg), opt_cfg);
}

}  // namespace mar
