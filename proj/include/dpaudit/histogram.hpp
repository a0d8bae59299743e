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

// Aligned histograms of two score samples and the (eps, delta) estimates read
// off them. Bin layout: k bins of width h = (b - a) / k, with the outer two
// open-ended,
//
//   (-inf, a + h), [a + h, a + 2h), ..., [b - 2h, b - h), [b - h, +inf).

#ifndef DPAUDIT_HISTOGRAM_HPP_
#define DPAUDIT_HISTOGRAM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/numeric.hpp"

namespace dpaudit {

class BinningSpec {
 public:
  BinningSpec(double a, double b, std::size_t k) : a_(a), b_(b), k_(k) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
      throw DomainError("BinningSpec: need finite a < b");
    }
    if (k < 2) throw DomainError("BinningSpec: need at least two bins");
    h_ = (b - a) / static_cast<double>(k);
  }

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t k() const { return k_; }
  double h() const { return h_; }

  // Left edge of bin j (0-based) for 1 <= j <= k-1.
  double Edge(std::size_t j) const {
    return j == k_ ? b_ : a_ + h_ * static_cast<double>(j);
  }

  std::size_t BinIndex(double x) const {
    if (x < Edge(1)) return 0;
    if (x >= Edge(k_ - 1)) return k_ - 1;
    auto j = static_cast<std::size_t>(std::floor((x - a_) / h_));
    j = std::clamp<std::size_t>(j, 1, k_ - 2);
    // Floating-point division can land one bin off near an edge.
    if (x < Edge(j)) --j;
    if (x >= Edge(j + 1)) ++j;
    return j;
  }

 private:
  double a_;
  double b_;
  std::size_t k_;
  double h_;
};

struct HistogramEstimate {
  BinningSpec spec;
  DiscreteDistribution p_hat;
  DiscreteDistribution q_hat;
  std::size_t n;
};

// 2 * 3^{1/3} * pi^{1/6}: the MSE-optimal width constant for Gaussian scores.
inline const double kScottGaussianConstant =
    2.0 * std::cbrt(3.0) * std::pow(std::numbers::pi, 1.0 / 6.0);

inline double ScottWidthGaussian(double sigma_hat, std::size_t n) {
  if (!(sigma_hat > 0.0) || n < 1) {
    throw DomainError("ScottWidthGaussian: need sigma_hat > 0 and n >= 1");
  }
  return kScottGaussianConstant * sigma_hat /
         std::cbrt(static_cast<double>(n));
}

// Width minimising the asymptotic error of the binned hockey-stick estimate,
// given the derivative energies int P'(x)^2 dx and int Q'(x)^2 dx.
inline double ScottWidthGeneral(double derivative_energy_p,
                                double derivative_energy_q, std::size_t n) {
  const double energy = derivative_energy_p + derivative_energy_q;
  if (!(derivative_energy_p >= 0.0 && derivative_energy_q >= 0.0) ||
      !(energy > 0.0) || n < 1) {
    throw DomainError("ScottWidthGeneral: need non-negative energies with a "
                      "positive sum and n >= 1");
  }
  return std::cbrt(12.0 / energy) / std::cbrt(static_cast<double>(n));
}

namespace internal {

inline std::vector<double> BinFrequencies(std::span<const double> samples,
                                          const BinningSpec& spec) {
  std::vector<std::uint64_t> counts(spec.k(), 0);
  for (double x : samples) ++counts[spec.BinIndex(x)];
  std::vector<double> freq(spec.k());
  const double n = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < spec.k(); ++j) {
    freq[j] = static_cast<double>(counts[j]) / n;
  }
  return freq;
}

}  // namespace internal

inline HistogramEstimate BuildHistograms(std::span<const double> samples_p,
                                         std::span<const double> samples_q,
                                         const BinningSpec& spec) {
  if (samples_p.empty() || samples_q.empty()) {
    throw DataError("BuildHistograms: empty sample");
  }
  if (samples_p.size() != samples_q.size()) {
    throw DataError("BuildHistograms: samples have " +
                    std::to_string(samples_p.size()) + " and " +
                    std::to_string(samples_q.size()) +
                    " entries; equal counts are required");
  }
  return HistogramEstimate{
      spec, DiscreteDistribution(internal::BinFrequencies(samples_p, spec)),
      DiscreteDistribution(internal::BinFrequencies(samples_q, spec)),
      samples_p.size()};
}

// delta(eps) = H_{e^eps}(P_hat || Q_hat).
inline double EstimateDelta(const HistogramEstimate& hist, double eps) {
  return HsDivergenceAtEps(hist.p_hat, hist.q_hat, eps);
}

inline double EstimateSymmetricDelta(const HistogramEstimate& hist, double eps) {
  return SymmetricDelta(hist.p_hat, hist.q_hat, eps);
}

// Exact bin masses of a distribution with the given CDF.
inline DiscreteDistribution BinMasses(const BinningSpec& spec,
                                      const std::function<double(double)>& cdf,
                                      const std::function<double(double)>& sf) {
  std::vector<double> masses(spec.k());
  // Lower-tail bins from CDF differences, upper-tail bins from survival
  // differences, so that tiny tail masses keep their relative accuracy.
  const double median_edge = 0.5 * (spec.a() + spec.b());
  for (std::size_t j = 0; j < spec.k(); ++j) {
    const double lo = j == 0 ? -std::numeric_limits<double>::infinity() : spec.Edge(j);
    const double hi = j + 1 == spec.k() ? std::numeric_limits<double>::infinity() : spec.Edge(j + 1);
    if (hi <= median_edge) {
      masses[j] = (j + 1 == spec.k() ? 1.0 : cdf(hi)) - (j == 0 ? 0.0 : cdf(lo));
    } else {
      masses[j] = (j == 0 ? 1.0 : sf(lo)) - (j + 1 == spec.k() ? 0.0 : sf(hi));
    }
    masses[j] = std::max(masses[j], 0.0);
  }
  return DiscreteDistribution::Normalized(std::move(masses));
}

// Quantile with linear interpolation between order statistics.
inline double SampleQuantile(std::vector<double>& values, double prob) {
  if (values.empty()) throw DataError("SampleQuantile: empty sample");
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<long>(lo),
                   values.end());
  const double v_lo = values[lo];
  if (hi == lo) return v_lo;
  const double v_hi =
      *std::min_element(values.begin() + static_cast<long>(lo) + 1, values.end());
  return v_lo + (pos - static_cast<double>(lo)) * (v_hi - v_lo);
}

inline double SampleStddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = CompensatedTotal(values) / static_cast<double>(values.size());
  CompensatedSum sum;
  for (double v : values) sum.Add((v - mean) * (v - mean));
  return std::sqrt(sum.Value() / static_cast<double>(values.size() - 1));
}

struct BinningMode {
  enum class Kind { kScottGaussian, kFixedCount, kFixedWidth };

  Kind kind = Kind::kScottGaussian;
  std::size_t count = 0;
  double width = 0.0;

  static BinningMode ScottGaussian() { return {}; }
  static BinningMode FixedCount(std::size_t k) {
    return {Kind::kFixedCount, k, 0.0};
  }
  static BinningMode FixedWidth(double h) { return {Kind::kFixedWidth, 0, h}; }
};

inline constexpr double kInteriorLowerQuantile = 0.001;
inline constexpr double kInteriorUpperQuantile = 0.999;

// Interior range from the pooled 0.1% / 99.9% quantiles; width per `mode`.
inline BinningSpec AutoSpec(std::span<const double> samples_p,
                            std::span<const double> samples_q,
                            BinningMode mode = BinningMode::ScottGaussian()) {
  if (samples_p.empty() || samples_q.empty()) {
    throw DataError("AutoSpec: empty sample");
  }
  std::vector<double> pooled(samples_p.begin(), samples_p.end());
  pooled.insert(pooled.end(), samples_q.begin(), samples_q.end());
  const double a = SampleQuantile(pooled, kInteriorLowerQuantile);
  const double b = SampleQuantile(pooled, kInteriorUpperQuantile);
  if (!(b > a)) {
    throw DataError("AutoSpec: samples have no spread; a histogram would have a "
                    "single bin");
  }
  switch (mode.kind) {
    case BinningMode::Kind::kFixedCount:
      return BinningSpec(a, b, mode.count);
    case BinningMode::Kind::kFixedWidth: {
      if (!(mode.width > 0.0)) throw DomainError("AutoSpec: width must be > 0");
      const auto k = static_cast<std::size_t>(std::ceil((b - a) / mode.width));
      return BinningSpec(a, b, std::max<std::size_t>(k, 2));
    }
    case BinningMode::Kind::kScottGaussian:
    default: {
      const double sd = SampleStddev(pooled);
      const double h = ScottWidthGaussian(sd, samples_p.size());
      const auto k = static_cast<std::size_t>(std::ceil((b - a) / h));
      return BinningSpec(a, b, std::max<std::size_t>(k, 2));
    }
  }
}

}  // namespace dpaudit

#endif  // DPAUDIT_HISTOGRAM_HPP_
