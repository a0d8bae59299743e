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

#include "dpaudit/pld.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/histogram.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/profile.hpp"

namespace dpaudit {
namespace {

namespace oracles = dpaudit_oracles;

// Total mass within `steps` grid steps of `loss`. Each factor of a
// composition may be rounded up by one step, so composed checks widen it.
double MassAtLoss(const PldGrid& pld, double loss, double steps = 1.0) {
  double total = 0.0;
  for (std::size_t i = 0; i < pld.masses.size(); ++i) {
    if (std::abs(pld.LossAt(i) - loss) <= steps * pld.step) {
      total += pld.masses[i];
    }
  }
  return total;
}

PldGrid PointMass(double loss, double step) {
  PldGrid pld;
  pld.step = step;
  pld.offset = static_cast<std::int64_t>(std::llround(loss / step));
  pld.masses = {1.0};
  return pld;
}

std::vector<double> RandomMasses(std::mt19937_64& gen, std::size_t k, bool zeros) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(k);
  for (double& x : w) x = (zeros && unit(gen) < 0.2) ? 0.0 : unit(gen);
  w[0] += 1e-3;
  return w;
}

TEST(PldFromDiscreteTest, Examples) {
  const PldGridOptions options;
  const DiscreteDistribution uniform({0.5, 0.5});
  const PldGrid same = PldFromDiscrete(uniform, uniform, options);
  EXPECT_DOUBLE_EQ(MassAtLoss(same, 0.0), 1.0);
  EXPECT_EQ(same.offset, 0);
  EXPECT_DOUBLE_EQ(same.mass_inf, 0.0);

  const PldGrid two = PldFromDiscrete(DiscreteDistribution({0.75, 0.25}),
                                      DiscreteDistribution({0.25, 0.75}), options);
  EXPECT_NEAR(MassAtLoss(two, std::log(3.0)), 0.75, 1e-15);
  EXPECT_NEAR(MassAtLoss(two, -std::log(3.0)), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(two.mass_inf, 0.0);
  // Losses are rounded up onto the grid.
  EXPECT_GE(two.LossAt(two.masses.size() - 1), std::log(3.0));
  EXPECT_LT(two.LossAt(two.masses.size() - 1), std::log(3.0) + options.step());
  EXPECT_GE(two.LossAt(0), -std::log(3.0));

  const PldGrid inf = PldFromDiscrete(DiscreteDistribution({0.5, 0.5}),
                                      DiscreteDistribution({1.0, 0.0}), options);
  EXPECT_NEAR(MassAtLoss(inf, -std::log(2.0)), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(inf.mass_inf, 0.5);
}

TEST(PldFromDiscreteTest, Errors) {
  const DiscreteDistribution p({1.0 - 1e-30, 1e-30});
  const DiscreteDistribution q({1e-30, 1.0 - 1e-30});
  EXPECT_THROW(PldFromDiscrete(p, q), GridError);
  PldGridOptions wide;
  wide.half_width = 80.0;
  wide.nodes = 1 << 21;
  EXPECT_NO_THROW(PldFromDiscrete(p, q, wide));
  EXPECT_THROW(PldFromDiscrete(DiscreteDistribution({1.0}),
                               DiscreteDistribution({0.5, 0.5})),
               DimensionError);
  PldGridOptions bad;
  bad.nodes = 1;
  EXPECT_THROW(PldFromDiscrete(p, p, bad), DomainError);
}

TEST(SelfConvolveTest, Examples) {
  const double step = PldGridOptions().step();
  const PldGrid two = PldFromDiscrete(DiscreteDistribution({0.75, 0.25}),
                                      DiscreteDistribution({0.25, 0.75}));
  const PldGrid once = SelfConvolve(two, 1);
  EXPECT_EQ(once.offset, two.offset);
  EXPECT_EQ(once.masses, two.masses);

  const PldGrid point = SelfConvolve(PointMass(0.5, step), 4);
  EXPECT_NEAR(MassAtLoss(point, 2.0, 4.0), 1.0, 1e-12);

  const PldGrid twice = SelfConvolve(two, 2);
  const double l3 = std::log(3.0);
  EXPECT_NEAR(MassAtLoss(twice, 2.0 * l3, 4.0), 0.5625, 1e-12);
  EXPECT_NEAR(MassAtLoss(twice, 0.0, 4.0), 0.375, 1e-12);
  EXPECT_NEAR(MassAtLoss(twice, -2.0 * l3, 4.0), 0.0625, 1e-12);

  EXPECT_THROW(SelfConvolve(two, 0), DomainError);
}

TEST(SelfConvolveTest, InfiniteAtomAndMassConservation) {
  PldGrid pld = PldFromDiscrete(DiscreteDistribution({0.45, 0.45, 0.1}),
                                DiscreteDistribution({0.3, 0.7, 0.0}));
  for (std::size_t c : {1u, 2u, 7u, 64u, 1024u}) {
    const PldGrid out = SelfConvolve(pld, c);
    EXPECT_NEAR(out.mass_inf, 1.0 - std::pow(0.9, static_cast<double>(c)), 1e-14);
    EXPECT_NEAR(out.FiniteMass() + out.mass_inf, 1.0, 1e-6) << c;
  }
}

TEST(SelfConvolveTest, GridCapIsEnforced) {
  const PldGrid two = PldFromDiscrete(DiscreteDistribution({0.75, 0.25}),
                                      DiscreteDistribution({0.25, 0.75}));
  EXPECT_THROW(SelfConvolve(two, 1000, 1 << 16), GridError);
}

TEST(ConvolveTest, FftMatchesDirectConvolution) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t len : {3u, 100u, 2000u}) {
    std::vector<double> a(len), b(len / 2 + 1);
    for (double& x : a) x = unit(gen) / static_cast<double>(len);
    for (double& x : b) x = unit(gen) / static_cast<double>(len);
    const std::vector<double> expected = oracles::DirectConvolution(a, b);
    const std::vector<double> fft = internal::FftConvolve(a, b);
    const std::vector<double> direct = internal::DirectConvolve(a, b);
    ASSERT_EQ(fft.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_NEAR(fft[i], expected[i], 1e-12);
      EXPECT_NEAR(direct[i], expected[i], 1e-15);
      EXPECT_GE(fft[i], 0.0);
    }
  }
}

TEST(DeltaFromPldTest, Examples) {
  const double step = PldGridOptions().step();
  EXPECT_DOUBLE_EQ(DeltaFromPld(PointMass(0.0, step), 0.0), 0.0);
  const PldGrid one = PointMass(1.0, step);
  EXPECT_NEAR(DeltaFromPld(one, 0.0), 1.0 - std::exp(one.LossAt(0) * -1.0), 1e-15);
  EXPECT_NEAR(DeltaFromPld(one, 0.0), 0.63212055882855767, 1e-4);
  PldGrid atom = PointMass(-30.0, step);
  atom.masses = {0.7};
  atom.mass_inf = 0.3;
  EXPECT_NEAR(DeltaFromPld(atom, 0.0), 0.3, 1e-15);
  EXPECT_NEAR(DeltaFromPld(atom, 1e6), 0.3, 1e-15);
}

TEST(DeltaFromPldTest, CurveMatchesPointwiseAndIsMonotone) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteDistribution p = DiscreteDistribution::Normalized(RandomMasses(gen, 12, true));
    const DiscreteDistribution q = DiscreteDistribution::Normalized(RandomMasses(gen, 12, true));
    const PldGrid pld = SelfConvolve(PldFromDiscrete(p, q), 3);
    std::vector<double> eps = LinearGrid(-5.0, 8.0, 131);
    eps.push_back(-700.0);
    const std::vector<double> curve = DeltaCurveFromPld(pld, eps);
    double prev = 1.0;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
      EXPECT_NEAR(curve[i], DeltaFromPld(pld, eps[i]), 1e-12);
      EXPECT_LE(curve[i], prev + 1e-12);
      prev = curve[i];
    }
    EXPECT_NEAR(curve.back(), DeltaFromPld(pld, -700.0), 1e-12);
  }
}

TEST(DeltaFromPldTest, RefiningTheGridDoesNotRaiseDelta) {
  std::mt19937_64 gen(8);
  PldGridOptions coarse;
  coarse.nodes = 1 << 12;
  PldGridOptions fine;
  fine.nodes = 1 << 13;
  for (int trial = 0; trial < 20; ++trial) {
    const DiscreteDistribution p = DiscreteDistribution::Normalized(RandomMasses(gen, 8, false));
    const DiscreteDistribution q = DiscreteDistribution::Normalized(RandomMasses(gen, 8, false));
    const PldGrid a = PldFromDiscrete(p, q, coarse);
    const PldGrid b = PldFromDiscrete(p, q, fine);
    for (double eps : LinearGrid(-2.0, 3.0, 51)) {
      EXPECT_LE(DeltaFromPld(b, eps), DeltaFromPld(a, eps) + 1e-15);
      EXPECT_LE(DeltaFromPld(a, eps) - DeltaFromPld(b, eps), coarse.step());
    }
  }
}

TEST(ComposeProfileTest, SingleCompositionMatchesSymmetricDelta) {
  std::mt19937_64 gen(10);
  const PldGridOptions options;
  for (int trial = 0; trial < 30; ++trial) {
    const DiscreteDistribution p = DiscreteDistribution::Normalized(RandomMasses(gen, 10, true));
    const DiscreteDistribution q = DiscreteDistribution::Normalized(RandomMasses(gen, 10, true));
    const std::vector<double> eps = LinearGrid(0.0, 5.0, 51);
    const PrivacyProfile profile = ComposeProfile(p, q, 1, eps, options);
    EXPECT_TRUE(profile.IsNonIncreasing());
    for (double e : eps) {
      const double exact = SymmetricDelta(p, q, e);
      EXPECT_GE(profile.Delta(e), exact - 1e-12);
      EXPECT_LE(profile.Delta(e), exact + 2.0 * options.step());
    }
  }
}

TEST(ComposeProfileTest, ComposedGaussianMatchesOracle) {
  const double sigma = 2.0;
  const BinningSpec spec(-12.0 * sigma, 1.0 + 12.0 * sigma,
                         static_cast<std::size_t>(std::ceil((1.0 + 24.0 * sigma) / 0.01)));
  const DiscreteDistribution p = BinMasses(
      spec, [&](double x) { return GaussianCdf(1.0, sigma, x); },
      [&](double x) { return GaussianSf(1.0, sigma, x); });
  const DiscreteDistribution q = BinMasses(
      spec, [&](double x) { return GaussianCdf(0.0, sigma, x); },
      [&](double x) { return GaussianSf(0.0, sigma, x); });
  const std::vector<double> eps = {0.0, 0.5, 1.0, 2.0};
  const PrivacyProfile profile = ComposeProfile(p, q, 10, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    EXPECT_NEAR(profile.Delta(eps[i]), oracles::kComposedGaussian[i], 1e-3);
    EXPECT_NEAR(oracles::kComposedGaussian[i],
                GaussianDelta(GaussianMech(sigma, std::sqrt(10.0)), eps[i]), 1e-15);
  }
  EXPECT_THROW(ComposeProfile(p, q, 10, std::vector<double>{}), DomainError);
}

}  // namespace
}  // namespace dpaudit
