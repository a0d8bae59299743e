// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpaudit/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "dpaudit/error.hpp"
#include "oracles.hpp"

namespace dpaudit {
namespace {

DiscreteDistribution RandomDistribution(std::mt19937_64& gen, std::size_t k) {
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution zero(0.2);
  std::vector<double> w(k);
  for (double& x : w) x = zero(gen) ? 0.0 : draw(gen);
  if (std::accumulate(w.begin(), w.end(), 0.0) == 0.0) w[0] = 1.0;
  return DiscreteDistribution::Normalized(w);
}

TEST(DiscreteDistributionTest, RejectsInvalidMasses) {
  EXPECT_THROW(DiscreteDistribution({}), DomainError);
  EXPECT_THROW(DiscreteDistribution({0.5, 0.6}), DomainError);
  EXPECT_THROW(DiscreteDistribution({-0.1, 1.1}), DomainError);
  EXPECT_THROW(DiscreteDistribution({std::nan(""), 1.0}), DomainError);
  EXPECT_NO_THROW(DiscreteDistribution({0.5, 0.5 + 5e-10}));
}

TEST(DiscreteDistributionTest, NormalizedRescalesWeights) {
  const DiscreteDistribution p = DiscreteDistribution::Normalized({1.0, 3.0});
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
}

TEST(HsDivergenceTest, IdenticalDistributionsGiveZero) {
  const DiscreteDistribution p({0.3, 0.7});
  EXPECT_DOUBLE_EQ(HsDivergence(p, p, 1.0), 0.0);
}

TEST(HsDivergenceTest, DisjointSupportsGiveOne) {
  EXPECT_DOUBLE_EQ(HsDivergence(DiscreteDistribution({1.0, 0.0}),
                                DiscreteDistribution({0.0, 1.0}), 1.0),
                   1.0);
}

TEST(HsDivergenceTest, SumsPositiveParts) {
  EXPECT_NEAR(HsDivergence(DiscreteDistribution({0.6, 0.4}),
                           DiscreteDistribution({0.2, 0.8}), 1.0),
              0.4, 1e-15);
}

TEST(HsDivergenceTest, RejectsBadArguments) {
  const DiscreteDistribution p({0.5, 0.5});
  const DiscreteDistribution q({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_THROW(HsDivergence(p, q, 1.0), DimensionError);
  EXPECT_THROW(HsDivergence(p, p, -0.5), DomainError);
}

TEST(HsDivergenceTest, InfiniteAlphaKeepsMassWhereQIsZero) {
  const DiscreteDistribution p({0.2, 0.3, 0.5});
  const DiscreteDistribution q({0.0, 0.4, 0.6});
  EXPECT_DOUBLE_EQ(HsDivergence(p, q, std::numeric_limits<double>::infinity()),
                   0.2);
  EXPECT_DOUBLE_EQ(HsDivergenceAtEps(p, q, 800.0), 0.2);
}

TEST(HsDivergenceTest, ZeroAlphaGivesTotalMass) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    const DiscreteDistribution p = RandomDistribution(gen, 7);
    const DiscreteDistribution q = RandomDistribution(gen, 7);
    EXPECT_NEAR(HsDivergence(p, q, 0.0), 1.0, 1e-12);
  }
}

TEST(HsDivergenceTest, MatchesBruteForceAndIsBoundedAndMonotone) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 1 + gen() % 40;
    const DiscreteDistribution p = RandomDistribution(gen, k);
    const DiscreteDistribution q = RandomDistribution(gen, k);
    const std::vector<double> pv(p.probs().begin(), p.probs().end());
    const std::vector<double> qv(q.probs().begin(), q.probs().end());
    double previous = 1.0 + 1e-12;
    for (double alpha = 0.0; alpha < 6.0; alpha += 0.25) {
      const double h = HsDivergence(p, q, alpha);
      EXPECT_GE(h, 0.0);
      EXPECT_LE(h, 1.0);
      EXPECT_LE(h, previous + 1e-15);
      EXPECT_NEAR(h, dpaudit_oracles::BruteHockeyStick(pv, qv, alpha), 1e-13);
      previous = h;
    }
  }
}

TEST(HsDivergenceTest, CompensatedSumStaysAccurateForManyBins) {
  const std::size_t k = 1000000;
  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  std::vector<double> q(k, 0.0);
  for (std::size_t j = 0; j < k; j += 2) q[j] = 2.0 / static_cast<double>(k);
  const double h = HsDivergence(DiscreteDistribution::Normalized(p),
                                DiscreteDistribution::Normalized(q), 1.0);
  EXPECT_NEAR(h, 0.5, 1e-12);
}

TEST(TvDistanceTest, Examples) {
  const DiscreteDistribution p({0.6, 0.4});
  EXPECT_DOUBLE_EQ(TvDistance(p, p), 0.0);
  EXPECT_NEAR(TvDistance(p, DiscreteDistribution({0.2, 0.8})), 0.4, 1e-15);
  EXPECT_NEAR(TvDistance(DiscreteDistribution({1.0, 0.0}),
                         DiscreteDistribution({0.5, 0.5})),
              0.5, 1e-15);
  EXPECT_THROW(TvDistance(p, DiscreteDistribution({1.0})), DimensionError);
}

TEST(TvDistanceTest, SymmetricAndSatisfiesTriangleInequality) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + gen() % 12;
    const DiscreteDistribution p = RandomDistribution(gen, k);
    const DiscreteDistribution q = RandomDistribution(gen, k);
    const DiscreteDistribution r = RandomDistribution(gen, k);
    EXPECT_NEAR(TvDistance(p, q), TvDistance(q, p), 1e-14);
    EXPECT_DOUBLE_EQ(TvDistance(p, q), HsDivergence(p, q, 1.0));
    EXPECT_LE(TvDistance(p, r), TvDistance(p, q) + TvDistance(q, r) + 1e-14);
  }
}

TEST(SymmetricDeltaTest, Examples) {
  const DiscreteDistribution p({0.6, 0.4});
  const DiscreteDistribution q({0.2, 0.8});
  EXPECT_DOUBLE_EQ(SymmetricDelta(p, p, 0.0), 0.0);
  EXPECT_NEAR(SymmetricDelta(p, q, 0.0), 0.4, 1e-15);
  EXPECT_NEAR(SymmetricDelta(DiscreteDistribution({0.9, 0.1}),
                             DiscreteDistribution({0.1, 0.9}), std::log(2.0)),
              0.7, 1e-14);
}

TEST(SymmetricDeltaTest, NonIncreasingInEpsilon) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    const DiscreteDistribution p = RandomDistribution(gen, 9);
    const DiscreteDistribution q = RandomDistribution(gen, 9);
    double previous = 1.0;
    for (double eps = -1.0; eps < 8.0; eps += 0.1) {
      const double d = SymmetricDelta(p, q, eps);
      EXPECT_LE(d, previous + 1e-15);
      previous = d;
    }
  }
}

TEST(CoarsenTest, Examples) {
  const DiscreteDistribution p({0.2, 0.3, 0.5});
  const std::vector<std::size_t> merge = {0, 0, 1};
  const DiscreteDistribution merged = Coarsen(p, merge);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_NEAR(merged[0], 0.5, 1e-15);
  EXPECT_NEAR(merged[1], 0.5, 1e-15);

  const std::vector<std::size_t> identity = {0, 1, 2};
  EXPECT_EQ(Coarsen(p, identity), p);

  const DiscreteDistribution uniform({0.25, 0.25, 0.25, 0.25});
  const std::vector<std::size_t> all = {0, 0, 0, 0};
  const DiscreteDistribution one = Coarsen(uniform, all);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0], 1.0);
}

TEST(CoarsenTest, RejectsBadMaps) {
  const DiscreteDistribution p({0.2, 0.3, 0.5});
  const std::vector<std::size_t> short_map = {0, 1};
  const std::vector<std::size_t> gap = {0, 2, 2};
  const std::vector<std::size_t> too_many = {0, 1, 5};
  EXPECT_THROW(Coarsen(p, short_map), DimensionError);
  EXPECT_THROW(Coarsen(p, gap), DomainError);
  EXPECT_THROW(Coarsen(p, too_many), DomainError);
}

TEST(CoarsenTest, NeverIncreasesHockeyStickDivergence) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> alpha_draw(0.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + gen() % 20;
    const std::size_t groups = 1 + gen() % k;
    std::vector<std::size_t> map(k);
    for (std::size_t j = 0; j < k; ++j) map[j] = j < groups ? j : gen() % groups;
    std::shuffle(map.begin(), map.end(), gen);
    const DiscreteDistribution p = RandomDistribution(gen, k);
    const DiscreteDistribution q = RandomDistribution(gen, k);
    const double alpha = alpha_draw(gen);
    EXPECT_LE(HsDivergence(Coarsen(p, map), Coarsen(q, map), alpha),
              HsDivergence(p, q, alpha) + 1e-12);
  }
}

}  // namespace
}  // namespace dpaudit
