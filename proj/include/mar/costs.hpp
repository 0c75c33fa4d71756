#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mar/error.hpp"
#include "mar/network.hpp"

namespace mar {

namespace detail {

inline void require_nonnegative(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0))
    throw Error(ErrorCode::kNegativeFlow, "flows must be >= 0 (got " + std::to_string(x) + ", " +
                                              std::to_string(y) + ")");
}

inline void require_size(const Network& net, std::size_t n) {
  if (n != net.num_roads())
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(net.num_roads()) +
                                                   " roads, got " + std::to_string(n));
}

}  // namespace detail

/// Fraction of autonomous flow, y / (x + y); zero on an empty road.
inline double autonomy_level(double x, double y) {
  detail::require_nonnegative(x, y);
  const double total = x + y;
  return total > 0.0 ? y / total : 0.0;
}

/// Vehicles that fit on the road at nominal speed for the given mix.
inline double capacity(const Road& road, double x, double y) {
  const double alpha = autonomy_level(x, y);
  const double share = road.model == CapacityModel::kPlatoonBehindAny ? alpha : alpha * alpha;
  return road.length / (share * road.platoon_headway + (1.0 - share) * road.headway);
}

/// Road length taken up by the flow, (x + y) * d / m(x, y).  Polynomial form:
///   behind-any:        h x + h' y
///   behind-autonomous: h (x + y) - (h - h') y^2 / (x + y)
inline double occupied_length(const Road& road, double x, double y) {
  detail::require_nonnegative(x, y);
  const double total = x + y;
  if (total <= 0.0) return 0.0;
  if (road.model == CapacityModel::kPlatoonBehindAny)
    return road.headway * x + road.platoon_headway * y;
  return road.headway * total - (road.headway - road.platoon_headway) * y * y / total;
}

/// Partial derivatives of `occupied_length` in x and y.  At the empty road
/// the autonomy level is taken as zero, i.e. the limit along the x axis.
inline std::pair<double, double> occupied_length_gradient(const Road& road, double x, double y) {
  detail::require_nonnegative(x, y);
  if (road.model == CapacityModel::kPlatoonBehindAny) return {road.headway, road.platoon_headway};
  const double total = x + y;
  const double t = total > 0.0 ? y / total : 0.0;
  const double diff = road.headway - road.platoon_headway;
  return {road.headway + diff * t * t, road.headway - 2.0 * diff * t + diff * t * t};
}

/// Latency of one road carrying x human-driven and y autonomous vehicles.
inline double link_cost(const Road& road, double x, double y) {
  detail::require_nonnegative(x, y);
  if (const auto* aff = std::get_if<AffineMixed>(&road.cost))
    return aff->human_coef * x + aff->auto_coef * y + aff->constant;
  const double total = x + y;
  if (total <= 0.0 || road.rho == 0.0) return road.freeflow;
  const double load = total / capacity(road, x, y);
  return road.freeflow * (1.0 + road.rho * std::pow(load, road.sigma));
}

/// (dc/dx, dc/dy) for one road.
inline std::pair<double, double> link_cost_gradient(const Road& road, double x, double y) {
  detail::require_nonnegative(x, y);
  if (const auto* aff = std::get_if<AffineMixed>(&road.cost)) return {aff->human_coef, aff->auto_coef};
  if (road.rho == 0.0 || road.freeflow == 0.0) return {0.0, 0.0};
  const double load = occupied_length(road, x, y) / road.length;
  // sigma == 1 keeps load^0 == 1 at the origin; sigma > 1 gives a zero slope there.
  const double scale =
      road.freeflow * road.rho * road.sigma * std::pow(load, road.sigma - 1.0) / road.length;
  const auto [gx, gy] = occupied_length_gradient(road, x, y);
  return {scale * gx, scale * gy};
}

/// Length-2N vector with each road's latency repeated for both classes.
struct CostVector {
  std::vector<double> entries;

  std::size_t size() const { return entries.size(); }
  double operator[](std::size_t j) const { return entries[j]; }
  double road(std::size_t i) const { return entries[2 * i]; }
};

inline CostVector cost_vector(const Network& net, const FlowVector& z) {
  detail::require_size(net, z.size());
  CostVector c;
  c.entries.reserve(2 * z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = link_cost(net.road(i), z[i].human, z[i].autonomous);
    c.entries.push_back(v);
    c.entries.push_back(v);
  }
  return c;
}

/// Total delay <c(z), z>.
inline double social_cost(const Network& net, const FlowVector& z) {
  detail::require_size(net, z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    total += link_cost(net.road(i), z[i].human, z[i].autonomous) * z[i].total();
  return total;
}

/// J(j, l) = d c_j / d z_l in interleaved coordinates.  Costs are separable,
/// so only the 2x2 diagonal blocks are populated.
inline Eigen::MatrixXd cost_jacobian(const Network& net, const FlowVector& z) {
  detail::require_size(net, z.size());
  const auto n = static_cast<Eigen::Index>(2 * z.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto [gx, gy] = link_cost_gradient(net.road(i), z[i].human, z[i].autonomous);
    const auto b = static_cast<Eigen::Index>(2 * i);
    jac(b, b) = gx;
    jac(b, b + 1) = gy;
    jac(b + 1, b) = gx;
    jac(b + 1, b + 1) = gy;
  }
  return jac;
}

/// <c(z) - c(q), z - q>.  A negative value certifies that the cost map is not
/// monotone.
inline double monotonicity_probe(const Network& net, const FlowVector& z, const FlowVector& q) {
  detail::require_size(net, z.size());
  detail::require_size(net, q.size());
  const CostVector cz = cost_vector(net, z);
  const CostVector cq = cost_vector(net, q);
  const std::vector<double> zi = z.interleaved();
  const std::vector<double> qi = q.interleaved();
  double acc = 0.0;
  for (std::size_t j = 0; j < zi.size(); ++j) acc += (cz[j] - cq[j]) * (zi[j] - qi[j]);
  return acc;
}

/// v^T J(z) v; negative means the Jacobian is not positive semidefinite.
inline double jacobian_quadratic_form(const Network& net, const FlowVector& z, std::span<const double> v) {
  const Eigen::MatrixXd jac = cost_jacobian(net, z);
  if (static_cast<Eigen::Index>(v.size()) != jac.rows())
    throw Error(ErrorCode::kDimensionMismatch, "direction has wrong length");
  const Eigen::Map<const Eigen::VectorXd> dir(v.data(), jac.rows());
  return dir.dot(jac * dir);
}

/// Nominal spacing of a vehicle: its length plus the distance covered during
/// the reaction time.
inline double headway_from_speed(double vehicle_length, double speed, double reaction_time) {
  if (!(vehicle_length >= 0.0) || !(speed >= 0.0) || !(reaction_time >= 0.0))
    throw Error(ErrorCode::kNegativeInput, "headway inputs must be >= 0");
  return vehicle_length + speed * reaction_time;
}

}  // namespace mar
