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

#include "dpaudit/histogram.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/mechanisms.hpp"
#include "oracles.hpp"

namespace dpaudit {
namespace {

namespace oracle = ::dpaudit_oracles;

TEST(ScottWidthTest, GaussianRule) {
  EXPECT_NEAR(kScottGaussianConstant, oracle::kScottConstant, 1e-14);
  const double h = ScottWidthGaussian(1.0, 1000);
  EXPECT_NEAR(h, 0.349083021225, 1e-11);
  EXPECT_NEAR(ScottWidthGaussian(2.0, 1000), 2.0 * h, 1e-15);
  EXPECT_NEAR(ScottWidthGaussian(1.0, 8000), 0.5 * h, 1e-15);
  EXPECT_THROW(ScottWidthGaussian(0.0, 10), DomainError);
  EXPECT_THROW(ScottWidthGaussian(1.0, 0), DomainError);
}

TEST(ScottWidthTest, GeneralRuleReducesToGaussianRule) {
  // int phi'(x)^2 dx = 1 / (4 sqrt(pi)) for the standard normal density.
  const double energy = 1.0 / (4.0 * std::sqrt(std::numbers::pi));
  for (std::size_t n : {10u, 1000u, 123456u}) {
    EXPECT_NEAR(ScottWidthGeneral(energy, energy, n), ScottWidthGaussian(1.0, n),
                1e-12);
  }
  EXPECT_NEAR(ScottWidthGeneral(12.0, 0.0, 1), 1.0, 1e-15);
  EXPECT_NEAR(ScottWidthGeneral(3.0, 1.0, 800), 0.5 * ScottWidthGeneral(3.0, 1.0, 100),
              1e-15);
  EXPECT_THROW(ScottWidthGeneral(0.0, 0.0, 10), DomainError);
}

TEST(BinningSpecTest, EdgesFollowOpenEndedLayout) {
  const BinningSpec spec(0.0, 1.0, 4);
  EXPECT_DOUBLE_EQ(spec.h(), 0.25);
  EXPECT_EQ(spec.BinIndex(-100.0), 0u);
  EXPECT_EQ(spec.BinIndex(0.2499), 0u);
  EXPECT_EQ(spec.BinIndex(0.25), 1u);  // left-closed interior bins
  EXPECT_EQ(spec.BinIndex(0.5), 2u);
  EXPECT_EQ(spec.BinIndex(0.7499), 2u);
  EXPECT_EQ(spec.BinIndex(0.75), 3u);
  EXPECT_EQ(spec.BinIndex(1e9), 3u);
  EXPECT_THROW(BinningSpec(1.0, 0.0, 4), DomainError);
  EXPECT_THROW(BinningSpec(0.0, 1.0, 1), DomainError);
}

TEST(BinningSpecTest, IndexAgreesWithEdgesOnManyPoints) {
  const BinningSpec spec(-3.7, 2.9, 37);
  for (int i = -5000; i <= 5000; ++i) {
    const double x = 0.001 * i;
    const std::size_t j = spec.BinIndex(x);
    if (j > 0) {
      EXPECT_GE(x, spec.Edge(j));
    }
    if (j + 1 < spec.k()) {
      EXPECT_LT(x, spec.Edge(j + 1));
    }
  }
}

TEST(BuildHistogramsTest, HandPlacement) {
  // With a = 0, b = 1, k = 2 the bins are (-inf, 0.5) and [0.5, inf), so 0.5
  // joins 10 in the upper bin.
  const std::vector<double> p = {-10.0, 0.5, 10.0};
  const HistogramEstimate hist = BuildHistograms(p, p, BinningSpec(0.0, 1.0, 2));
  EXPECT_NEAR(hist.p_hat[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(hist.p_hat[1], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(hist.p_hat, hist.q_hat);
  EXPECT_EQ(hist.n, 3u);
}

TEST(BuildHistogramsTest, SingleSampleAndErrors) {
  const std::vector<double> one = {0.3};
  const HistogramEstimate hist = BuildHistograms(one, one, BinningSpec(0.0, 1.0, 5));
  int occupied = 0;
  for (double m : hist.p_hat.probs()) occupied += m == 1.0 ? 1 : 0;
  EXPECT_EQ(occupied, 1);
  const std::vector<double> two = {0.1, 0.2};
  const std::vector<double> none;
  EXPECT_THROW(BuildHistograms(one, two, BinningSpec(0.0, 1.0, 2)), DataError);
  EXPECT_THROW(BuildHistograms(none, none, BinningSpec(0.0, 1.0, 2)), DataError);
}

TEST(EstimateDeltaTest, IdenticalSamplesGiveZero) {
  const std::vector<double> s = Sample(NormalScores{0.0, 1.0}, 1000, 3);
  const HistogramEstimate hist = BuildHistograms(s, s, AutoSpec(s, s));
  for (double eps : {0.0, 0.5, 3.0}) {
    EXPECT_DOUBLE_EQ(EstimateDelta(hist, eps), 0.0);
    EXPECT_DOUBLE_EQ(EstimateSymmetricDelta(hist, eps), 0.0);
  }
}

TEST(EstimateDeltaTest, GaussianTvWithScottBins) {
  const std::vector<double> p = Sample(NormalScores{1.0, 1.0}, 100000, 11);
  const std::vector<double> q = Sample(NormalScores{0.0, 1.0}, 100000, 12);
  const HistogramEstimate hist = BuildHistograms(p, q, AutoSpec(p, q));
  EXPECT_NEAR(EstimateDelta(hist, 0.0), oracle::kGaussianDeltaSigma1Eps0, 0.01);
  double previous = 1.0;
  for (double eps = 0.0; eps < 5.0; eps += 0.05) {
    const double d = EstimateDelta(hist, eps);
    EXPECT_LE(d, previous + 1e-15);
    previous = d;
  }
}

TEST(EstimateDeltaTest, CoarseningNestedBinsNeverIncreasesEstimate) {
  const std::vector<double> p = Sample(NormalScores{0.7, 1.0}, 20000, 21);
  const std::vector<double> q = Sample(NormalScores{0.0, 1.0}, 20000, 22);
  const HistogramEstimate fine = BuildHistograms(p, q, BinningSpec(-3.0, 4.0, 40));
  const HistogramEstimate coarse = BuildHistograms(p, q, BinningSpec(-3.0, 4.0, 10));
  for (double eps = 0.0; eps < 3.0; eps += 0.1) {
    EXPECT_LE(EstimateSymmetricDelta(coarse, eps),
              EstimateSymmetricDelta(fine, eps) + 1e-12);
  }
}

TEST(AutoSpecTest, ModesAndDegenerateInput) {
  const std::vector<double> p = Sample(NormalScores{0.0, 1.0}, 100000, 31);
  const std::vector<double> q = Sample(NormalScores{0.0, 1.0}, 100000, 32);
  const BinningSpec spec = AutoSpec(p, q);
  const double h = ScottWidthGaussian(1.0, p.size());
  const double expected_k = (spec.b() - spec.a()) / h;
  EXPECT_NEAR(static_cast<double>(spec.k()), expected_k, 0.2 * expected_k);
  EXPECT_NEAR(spec.a(), -3.09, 0.05);
  EXPECT_NEAR(spec.b(), 3.09, 0.05);
  EXPECT_EQ(AutoSpec(p, q, BinningMode::FixedCount(10)).k(), 10u);
  EXPECT_EQ(AutoSpec(p, q, BinningMode::FixedWidth(0.5)).k(),
            static_cast<std::size_t>(std::ceil((spec.b() - spec.a()) / 0.5)));
  const std::vector<double> constant(100, 2.0);
  EXPECT_THROW(AutoSpec(constant, constant), DataError);
}

TEST(BinMassesTest, MatchesCdfDifferencesAndKeepsTails) {
  const BinningSpec spec(-2.0, 2.0, 8);
  const DiscreteDistribution m = BinMasses(
      spec, [](double x) { return NormalCdf(x); }, [](double x) { return NormalSf(x); });
  EXPECT_NEAR(m[0], NormalCdf(-1.5), 1e-15);
  EXPECT_NEAR(m[3], NormalCdf(0.0) - NormalCdf(-0.5), 1e-15);
  EXPECT_NEAR(m[7], NormalSf(1.5), 1e-15);
  const BinningSpec wide(-30.0, 30.0, 60);
  const DiscreteDistribution tails = BinMasses(
      wide, [](double x) { return NormalCdf(x); }, [](double x) { return NormalSf(x); });
  EXPECT_NEAR(tails[59] / NormalSf(29.0), 1.0, 1e-12);
  EXPECT_GT(tails[59], 0.0);
}

}  // namespace
}  // namespace dpaudit
