#pragma once

// Shared fixtures and random instance generators for the unit and
// acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "mar/network.hpp"

namespace mar::testing {

inline Road bpr_road(double length, double headway, double platoon_headway, double freeflow, double rho,
                     double sigma, CapacityModel model = CapacityModel::kPlatoonBehindAny) {
  Road r;
  r.length = length;
  r.headway = headway;
  r.platoon_headway = platoon_headway;
  r.freeflow = freeflow;
  r.rho = rho;
  r.sigma = sigma;
  r.model = model;
  return r;
}

inline Road affine_road(double human_coef, double auto_coef, double constant) {
  Road r;
  r.cost = AffineMixed{human_coef, auto_coef, constant};
  return r;
}

/// Parallel roads s -> t with a single OD pair.
inline NetworkSpec parallel_spec(const std::vector<Road>& roads, double human, double autonomous) {
  NetworkSpec spec;
  spec.nodes = {"s", "t"};
  for (const Road& r : roads) spec.roads.push_back({"s", "t", r});
  spec.od_pairs.push_back({"s", "t", human, autonomous});
  return spec;
}

inline Network parallel(const std::vector<Road>& roads, double human, double autonomous) {
  return build_network(parallel_spec(roads, human, autonomous));
}

/// Roads s->a, a->t, s->t (indices 0, 1, 2) with OD (s, t).
inline Network triangle(double human, double autonomous, const Road& proto = bpr_road(1, 1, 1, 1, 1, 1)) {
  NetworkSpec spec;
  spec.nodes = {"s", "a", "t"};
  spec.roads = {{"s", "a", proto}, {"a", "t", proto}, {"s", "t", proto}};
  spec.od_pairs.push_back({"s", "t", human, autonomous});
  return build_network(spec);
}

/// Non-monotone two-road demonstration: c1 = 3x + y + t1, c2 = 3x + 2y + t2,
/// 2 units of human and 3 of autonomous demand.
inline Network affine_demo(double t1 = 1.0, double t2 = 2.0) {
  return parallel({affine_road(3, 1, t1), affine_road(3, 2, t2)}, 2.0, 3.0);
}

/// Two roads of the first capacity model, d = 1, a = rho = sigma = 1;
/// road 0 has (h, h') = (2, 1), road 1 has (2, 2); one unit of each class.
inline Network designated_two_road() {
  return parallel({bpr_road(1, 2, 1, 1, 1, 1), bpr_road(1, 2, 2, 1, 1, 1)}, 1.0, 1.0);
}

struct InstanceOptions {
  double k_max = 4.0;
  std::vector<double> sigmas = {1.0, 2.0, 4.0};
  bool allow_two_od = true;
  bool only_model1 = false;
  /// Keep second-model roads with h' > h at ratio <= 2, where their latency
  /// is nondecreasing in both flows.
  bool monotone_only = false;
};

/// Random BPR road with a given headway ratio and orientation.
template <typename Rng>
Road random_road(Rng& rng, double ratio, double sigma, CapacityModel model, bool platoon_longer) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double base = 1.0 + 2.0 * u(rng);
  Road r = bpr_road(0.5 + 1.5 * u(rng), base, base / ratio, 0.5 + 1.5 * u(rng), 0.1 + 1.9 * u(rng), sigma, model);
  if (platoon_longer) std::swap(r.headway, r.platoon_headway);
  return r;
}

/// Random network with 2-4 roads and 1-2 OD pairs.  One road carries the
/// drawn network asymmetry k exactly; the others draw a ratio in [1, k].
template <typename Rng>
NetworkSpec random_instance(Rng& rng, const InstanceOptions& opt = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double k = 1.0 + (opt.k_max - 1.0) * u(rng);
  const double sigma = opt.sigmas[std::uniform_int_distribution<std::size_t>(0, opt.sigmas.size() - 1)(rng)];
  auto make_road = [&](bool exact_k) {
    const CapacityModel model = (opt.only_model1 || u(rng) < 0.5) ? CapacityModel::kPlatoonBehindAny
                                                                   : CapacityModel::kPlatoonBehindAutonomous;
    double ratio = exact_k ? k : 1.0 + (k - 1.0) * u(rng);
    bool longer = u(rng) < 0.5;
    if (opt.monotone_only && longer && model == CapacityModel::kPlatoonBehindAutonomous)
      ratio = std::min(ratio, 2.0);
    return random_road(rng, ratio, sigma, model, longer);
  };
  auto demand = [&]() { return u(rng) < 0.1 ? 0.0 : 0.2 + 1.8 * u(rng); };

  NetworkSpec spec;
  const int topology = std::uniform_int_distribution<int>(0, opt.allow_two_od ? 4 : 2)(rng);
  switch (topology) {
    case 0:  // 2 parallel roads
    case 1: {  // 3 or 4 parallel roads
      const int n = topology == 0 ? 2 : std::uniform_int_distribution<int>(3, 4)(rng);
      spec.nodes = {"s", "t"};
      for (int i = 0; i < n; ++i) spec.roads.push_back({"s", "t", make_road(i == 0)});
      spec.od_pairs.push_back({"s", "t", 0.0, 0.0});
      break;
    }
    case 2: {  // triangle, optionally with a second direct road
      spec.nodes = {"s", "a", "t"};
      spec.roads = {{"s", "a", make_road(true)}, {"a", "t", make_road(false)}, {"s", "t", make_road(false)}};
      if (u(rng) < 0.5) spec.roads.push_back({"s", "t", make_road(false)});
      spec.od_pairs.push_back({"s", "t", 0.0, 0.0});
      break;
    }
    case 3: {  // triangle with a second OD pair sharing road a->t
      spec.nodes = {"s", "a", "t"};
      spec.roads = {{"s", "a", make_road(true)}, {"a", "t", make_road(false)}, {"s", "t", make_road(false)},
                    {"a", "t", make_road(false)}};
      spec.od_pairs.push_back({"s", "t", 0.0, 0.0});
      spec.od_pairs.push_back({"a", "t", 0.0, 0.0});
      break;
    }
    default: {  // two parallel roads shared by two OD pairs with a feeder
      spec.nodes = {"s", "a", "t"};
      spec.roads = {{"s", "a", make_road(false)}, {"a", "t", make_road(true)}, {"a", "t", make_road(false)}};
      spec.od_pairs.push_back({"s", "t", 0.0, 0.0});
      spec.od_pairs.push_back({"a", "t", 0.0, 0.0});
      break;
    }
  }
  for (OdSpec& od : spec.od_pairs) {
    od.human_demand = demand();
    od.auto_demand = demand();
    if (od.human_demand + od.auto_demand == 0.0) od.human_demand = 1.0;
  }
  return spec;
}

}  // namespace mar::testing
