#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qpurify/analytics.hpp"
#include "qpurify/cloning.hpp"
#include "support/helpers.hpp"

namespace qpurify {
namespace {

constexpr std::optional<std::int64_t> kInfinity = std::nullopt;

TEST(PureCloning, Examples) {
  EXPECT_DOUBLE_EQ(pure_cloning_fidelity(0, kInfinity), 0.5);
  EXPECT_DOUBLE_EQ(pure_cloning_fidelity(1, kInfinity), 0.75);
  EXPECT_DOUBLE_EQ(pure_cloning_fidelity(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(pure_cloning_fidelity(1, 4), 14.0 / 16);
  EXPECT_THROW(pure_cloning_fidelity(2, 3), std::invalid_argument);
  EXPECT_THROW(pure_cloning_fidelity(-1, kInfinity), std::invalid_argument);
}

TEST(PureCloning, ShrinkingFactorIdentity) {
  for (int j = 1; j <= 20; ++j) {
    for (std::int64_t m = 2 * j; m <= 2 * j + 40; m += 3) {
      const double lhs = 2 * pure_cloning_fidelity(j, m) - 1;
      const double rhs = j * (m + 2.0) / (m * (j + 1.0));
      EXPECT_NEAR(lhs, rhs, 1e-15);
    }
  }
}

TEST(MixedCloning, FrozenValues) {
  EXPECT_NEAR(mixed_cloning_fidelity({2, kInfinity, 0.5}), 0.625, 1e-15);
  EXPECT_NEAR(mixed_cloning_fidelity({4, 8, 0.5}), 0.73763020833333333, 1e-14);
  EXPECT_NEAR(mixed_cloning_fidelity({6, 10, 0.3}), 0.67844112499999999, 1e-14);
}

TEST(MixedCloning, TwoCopiesToInfinityHalveLambda) {
  for (int k = 0; k <= 20; ++k) {
    const double lambda = k / 20.0;
    EXPECT_NEAR(mixed_cloning_lambda({2, kInfinity, lambda}), lambda / 2, 1e-15);
    EXPECT_NEAR(estimation_lambda(2, lambda), lambda / 2, 1e-15);
  }
}

TEST(MixedCloning, PureInputReducesToPureCloning) {
  for (int n : {2, 4, 10}) {
    for (std::int64_t m : {n, n + 1, 3 * n}) {
      EXPECT_NEAR(mixed_cloning_fidelity({n, m, 1.0}), pure_cloning_fidelity(n / 2, m), 1e-15);
    }
  }
}

TEST(MixedCloning, ScalingRelation) {
  for (int n : {2, 4, 8, 20}) {
    for (std::int64_t m : {n, n + 3, 5 * n, 1000}) {
      for (double lambda : {0.05, 0.4, 0.9}) {
        EXPECT_LT(scaling_relation_check({n, m, lambda}), 1e-14);
      }
    }
  }
}

TEST(MixedCloning, EstimationLambdaFrozen) {
  EXPECT_NEAR(estimation_lambda(4, 0.2), 0.15733333333333334, 1e-15);
  EXPECT_NEAR(estimation_lambda(10, 0.2), 0.27049873066666668, 1e-14);
  EXPECT_NEAR(estimation_lambda(20, 0.6), 0.8060765100399616, 1e-14);
  EXPECT_NEAR(estimation_lambda(40, 0.8), 0.93346075441639939, 1e-14);
}

// Regression: the infinite-copy output exceeds the input purity once N is
// large enough, and grows towards 1.
TEST(MixedCloning, EstimationLambdaExceedsInputForLargeN) {
  EXPECT_GT(estimation_lambda(10, 0.2), 0.2);
  double previous = 0.0;
  for (int n = 2; n <= 200; n += 2) {
    const double value = estimation_lambda(n, 0.2);
    EXPECT_GT(value, previous);
    previous = value;
  }
  EXPECT_GT(previous, 0.85);
}

TEST(CloneSettings, Validation) {
  EXPECT_THROW((CloneSettings{3, kInfinity, 0.5}).validate(), std::invalid_argument);
  EXPECT_THROW((CloneSettings{4, 3, 0.5}).validate(), std::invalid_argument);
  EXPECT_THROW((CloneSettings{4, 8, 1.5}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((CloneSettings{4, 4, 0.0}).validate());
  try {
    (CloneSettings{4, 3, 0.5}).validate();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("M must be >= N"), std::string::npos);
  }
}

TEST(CovariantMap, LinearInOutputWeights) {
  // The map's output averages the pure components, whose one-qubit marginal
  // is the block-state marginal with fidelity f_j.
  std::mt19937_64 rng(13);
  for (int j = 1; j <= 4; ++j) {
    const MixedQubit q(0.35, testing::random_unit(rng));
    const double f = block_fidelity(0.35, j);
    for (const auto& [x, y] : {std::pair{1.0, 0.0}, {0.7, 0.3}, {0.2, 0.5}, {0.0, 1.0}}) {
      EXPECT_NEAR(covariant_map_fidelity(q, j, {x, y}), (x * f + y * (1 - f)) / (x + y), 1e-12);
    }
  }
  EXPECT_THROW(covariant_map_fidelity(MixedQubit(0.5), 1, {0.8, 0.4}), std::invalid_argument);
  EXPECT_THROW(covariant_map_fidelity(MixedQubit(0.5), 0, {1.0, 0.0}), std::invalid_argument);
}

TEST(CovariantMap, ScanFindsIdealMap) {
  const ScanResult r = optimality_scan(MixedQubit(0.6, {0.0, 1.0, 0.0}), 2, 11);
  EXPECT_EQ(r.points, 65U);
  // Every y = 0 point attains the maximum up to rounding.
  EXPECT_GT(r.best_x, 0.0);
  EXPECT_DOUBLE_EQ(r.best_y, 0.0);
  EXPECT_NEAR(r.best_fidelity, block_fidelity(0.6, 2), 1e-12);
  EXPECT_THROW(optimality_scan(MixedQubit(0.6), 2, 10), std::invalid_argument);
}

}  // namespace
}  // namespace qpurify
