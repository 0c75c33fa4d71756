#include <gtest/gtest.h>

#include <random>

#include "mar/costs.hpp"
#include "support.hpp"

namespace mar {
namespace {

using testing::bpr_road;

constexpr auto kM1 = CapacityModel::kPlatoonBehindAny;
constexpr auto kM2 = CapacityModel::kPlatoonBehindAutonomous;

FlowVector flows(std::initializer_list<double> interleaved) {
  const std::vector<double> v(interleaved);
  return FlowVector::from_interleaved(v);
}

TEST(AutonomyLevel, Examples) {
  EXPECT_EQ(autonomy_level(1, 1), 0.5);
  EXPECT_EQ(autonomy_level(3, 0), 0.0);
  EXPECT_EQ(autonomy_level(0, 0), 0.0);
  EXPECT_THROW(autonomy_level(-1, 0), Error);
}

TEST(Capacity, Examples) {
  EXPECT_NEAR(capacity(bpr_road(1000, 10, 5, 1, 0, 1, kM1), 30, 10), 1000.0 / 8.75, 1e-9);
  EXPECT_NEAR(capacity(bpr_road(1000, 10, 5, 1, 0, 1, kM2), 30, 10), 1000.0 / 9.6875, 1e-9);
  for (auto model : {kM1, kM2}) EXPECT_EQ(capacity(bpr_road(1000, 10, 5, 1, 0, 1, model), 5, 0), 100.0);
}

TEST(LinkCost, Examples) {
  EXPECT_NEAR(link_cost(bpr_road(1000, 10, 10, 10, 0.15, 4), 25, 15), 10.0384, 1e-12);
  EXPECT_EQ(link_cost(bpr_road(1, 2, 1, 3, 1, 2), 0, 0), 3.0);
  EXPECT_EQ(link_cost(testing::affine_road(3, 1, 0.7), 2, 0), 6.7);
  try {
    link_cost(bpr_road(1, 1, 1, 1, 1, 1), 0, -1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeFlow);
  }
}

TEST(CostVector, Examples) {
  const Network one = testing::parallel({bpr_road(1, 1, 1, 2.5, 1, 1)}, 1, 1);
  EXPECT_EQ(cost_vector(one, FlowVector(1)).entries, (std::vector<double>{2.5, 2.5}));

  const Network demo = testing::affine_demo(1.0, 2.0);
  EXPECT_EQ(cost_vector(demo, flows({2, 0, 0, 3})).entries, (std::vector<double>{7, 7, 8, 8}));
  EXPECT_THROW(cost_vector(demo, FlowVector(3)), Error);
}

TEST(SocialCost, Examples) {
  const Network net = testing::parallel({bpr_road(1, 1, 1, 1, 1, 1)}, 1, 1);
  EXPECT_EQ(social_cost(net, FlowVector(1)), 0.0);
  EXPECT_EQ(social_cost(net, flows({1, 1})), 6.0);
  const Network flat = testing::parallel({bpr_road(1, 3, 1, 1, 0, 2)}, 1, 1);
  EXPECT_EQ(social_cost(flat, flows({0.3, 1.2})), 1.5);
}

TEST(CostJacobian, AffineDemoMatrix) {
  const Network demo = testing::affine_demo();
  Eigen::MatrixXd expected(4, 4);
  expected << 3, 1, 0, 0, 3, 1, 0, 0, 0, 0, 3, 2, 0, 0, 3, 2;
  EXPECT_EQ(cost_jacobian(demo, flows({2, 0, 0, 3})), expected);
  EXPECT_EQ(cost_jacobian(demo, flows({0, 3, 2, 0})), expected);
}

TEST(CostJacobian, ZeroWhenRhoIsZero) {
  const Network net = testing::parallel({bpr_road(1, 3, 1, 1, 0, 2), bpr_road(1, 1, 2, 1, 0, 4, kM2)}, 1, 1);
  EXPECT_TRUE(cost_jacobian(net, flows({0.3, 0.4, 0.5, 0.1})).isZero(0.0));
}

// Central-difference oracle for a single 2x2 block.
std::array<double, 4> fd_block(const Road& road, double x, double y, double h = 1e-6) {
  return {(link_cost(road, x + h, y) - link_cost(road, x - h, y)) / (2 * h),
          (link_cost(road, x, y + h) - link_cost(road, x, y - h)) / (2 * h), 0, 0};
}

TEST(CostJacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Road> roads;
    for (int i = 0; i < 3; ++i) {
      const auto model = u(rng) < 0.5 ? kM1 : kM2;
      const double sigma = std::vector<double>{1, 2, 4}[trial % 3];
      roads.push_back(testing::random_road(rng, 1.0 + 3.0 * u(rng), sigma, model, u(rng) < 0.5));
    }
    const Network net = testing::parallel(roads, 1, 1);
    std::vector<double> z(6);
    for (double& v : z) v = 0.05 + 2.0 * u(rng);
    const FlowVector fz = FlowVector::from_interleaved(z);
    const Eigen::MatrixXd J = cost_jacobian(net, fz);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto fd = fd_block(net.road(i), z[2 * i], z[2 * i + 1]);
      for (int col = 0; col < 2; ++col)
        for (int row = 0; row < 2; ++row) {
          const double analytic = J(2 * i + row, 2 * i + col);
          EXPECT_NEAR(analytic, fd[col], 1e-4 * std::max(1.0, std::abs(fd[col])));
        }
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) {
          EXPECT_TRUE(J.block(2 * i, 2 * j, 2, 2).isZero(0.0));
        }
    }
  }
}

TEST(CostJacobian, FiniteAtOrigin) {
  for (auto model : {kM1, kM2})
    for (double sigma : {1.0, 1.5, 4.0}) {
      const Network net = testing::parallel({bpr_road(1, 2, 1, 1, 1, sigma, model)}, 1, 1);
      const Eigen::MatrixXd J = cost_jacobian(net, FlowVector(1));
      EXPECT_TRUE(J.allFinite());
    }
}

TEST(MonotonicityProbe, AffineDemo) {
  const Network demo = testing::affine_demo();
  const FlowVector z = flows({2, 0, 0, 3});
  const FlowVector q = flows({0, 3, 2, 0});
  EXPECT_EQ(monotonicity_probe(demo, z, z), 0.0);
  EXPECT_EQ(monotonicity_probe(demo, z, q), -3.0);
  const std::vector<double> v = {-1, 2, 0, 0};
  EXPECT_EQ(jacobian_quadratic_form(demo, z, v), -1.0);
  // The free-flow terms cancel; other values only add rounding.
  EXPECT_NEAR(monotonicity_probe(testing::affine_demo(0.4, 1.9), z, q), -3.0, 1e-12);
}

TEST(HeadwayFromSpeed, Examples) {
  EXPECT_EQ(headway_from_speed(4.5, 0, 1.0), 4.5);
  EXPECT_EQ(headway_from_speed(4.5, 30, 1.5), 49.5);
  EXPECT_EQ(headway_from_speed(0, 10, 0.5), 5.0);
  try {
    headway_from_speed(1, -1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeInput);
  }
}

TEST(CostProperties, ElementwiseMonotone) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto model : {kM1, kM2}) {
    for (int trial = 0; trial < 10000; ++trial) {
      // Second-model roads with h' > 2h lose monotonicity; see the
      // counterexample test below.
      const double ratio = 1.0 + (model == kM2 ? 1.0 : 3.0) * u(rng);
      const Road r = testing::random_road(rng, ratio, std::vector<double>{1, 2, 4}[trial % 3], model, u(rng) < 0.5);
      const double x = 3 * u(rng), y = 3 * u(rng), dx = u(rng) * u(rng), dy = u(rng) * u(rng);
      EXPECT_GE(link_cost(r, x + dx, y + dy), link_cost(r, x, y) * (1 - 1e-14));
    }
  }
}

TEST(CostProperties, SecondModelLosesMonotonicityBeyondRatioTwo) {
  // h = 1, h' = 3: mixing a few human vehicles into pure autonomous flow
  // shortens the occupied length.
  const Road r = bpr_road(1, 1, 3, 1, 1, 1, kM2);
  EXPECT_LT(occupied_length(r, 0.1, 1.0), occupied_length(r, 0.0, 1.0));
  EXPECT_LT(link_cost(r, 0.1, 1.0), link_cost(r, 0.0, 1.0));
}

TEST(CostProperties, CapacityAgreementAndBounds) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    Road r1 = testing::random_road(rng, 1.0 + 3.0 * u(rng), 1.0, kM1, u(rng) < 0.5);
    Road r2 = r1;
    r2.model = kM2;
    const double x = 5 * u(rng), y = 5 * u(rng);
    EXPECT_EQ(capacity(r1, x, 0), capacity(r2, x, 0));
    EXPECT_EQ(capacity(r1, 0, y), capacity(r2, 0, y));
    const double lo = std::min(r1.length / r1.headway, r1.length / r1.platoon_headway);
    const double hi = std::max(r1.length / r1.headway, r1.length / r1.platoon_headway);
    for (const Road& r : {r1, r2}) {
      const double m = capacity(r, x, y);
      EXPECT_GE(m, lo * (1 - 1e-14));
      EXPECT_LE(m, hi * (1 + 1e-14));
    }
  }
}

TEST(CostProperties, DuplicatedEntriesAreIdentical) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = build_network(testing::random_instance(rng));
    std::vector<double> z(2 * net.num_roads());
    for (double& v : z) v = 2 * u(rng);
    const CostVector c = cost_vector(net, FlowVector::from_interleaved(z));
    for (std::size_t i = 0; i < net.num_roads(); ++i) EXPECT_EQ(c.entries[2 * i], c.entries[2 * i + 1]);
    double inner = 0;
    for (std::size_t j = 0; j < z.size(); ++j) inner += c.entries[j] * z[j];
    EXPECT_NEAR(social_cost(net, FlowVector::from_interleaved(z)), inner, 1e-12 * (1 + inner));
  }
}

}  // namespace
}  // namespace mar
