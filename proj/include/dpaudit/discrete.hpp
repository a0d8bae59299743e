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

// Finite distributions over ordered bins and the divergences between them.

#ifndef DPAUDIT_DISCRETE_HPP_
#define DPAUDIT_DISCRETE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpaudit/error.hpp"
#include "dpaudit/numeric.hpp"

namespace dpaudit {

inline constexpr double kMassTolerance = 1e-9;

// Probability vector p_1..p_k. Immutable after construction.
class DiscreteDistribution {
 public:
  // Rejects negative masses and totals outside 1 +- kMassTolerance.
  explicit DiscreteDistribution(std::vector<double> probs)
      : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw DomainError("DiscreteDistribution: needs at least one bin");
    }
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("DiscreteDistribution: masses must be finite and >= 0");
      }
    }
    const double total = CompensatedTotal(probs_);
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw DomainError("DiscreteDistribution: masses sum to " +
                        std::to_string(total) + ", expected 1");
    }
  }

  // Scales non-negative weights to unit mass.
  static DiscreteDistribution Normalized(std::vector<double> weights) {
    const double total = CompensatedTotal(weights);
    if (!(total > 0.0)) {
      throw DomainError("DiscreteDistribution: weights have no positive mass");
    }
    for (double& w : weights) w /= total;
    return DiscreteDistribution(std::move(weights));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const DiscreteDistribution&,
                         const DiscreteDistribution&) = default;

 private:
  std::vector<double> probs_;
};

namespace internal {

inline void RequireSameLength(const DiscreteDistribution& p,
                              const DiscreteDistribution& q) {
  if (p.size() != q.size()) {
    throw DimensionError("distributions have " + std::to_string(p.size()) +
                         " and " + std::to_string(q.size()) + " bins");
  }
}

}  // namespace internal

// H_alpha(P||Q) = sum_j max(p_j - alpha q_j, 0). alpha = +inf gives the mass
// of P on bins where Q vanishes.
inline double HsDivergence(const DiscreteDistribution& p,
                           const DiscreteDistribution& q, double alpha) {
  internal::RequireSameLength(p, q);
  if (std::isnan(alpha) || alpha < 0.0) {
    throw DomainError("HsDivergence: alpha must be >= 0");
  }
  CompensatedSum sum;
  if (std::isinf(alpha)) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (q[j] == 0.0) sum.Add(p[j]);
    }
  } else {
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double t = p[j] - alpha * q[j];
      if (t > 0.0) sum.Add(t);
    }
  }
  return std::clamp(sum.Value(), 0.0, 1.0);
}

// Hockey-stick divergence parameterised by eps = log(alpha).
inline double HsDivergenceAtEps(const DiscreteDistribution& p,
                                const DiscreteDistribution& q, double eps) {
  return HsDivergence(p, q, ExpOrInf(eps));
}

inline double TvDistance(const DiscreteDistribution& p,
                         const DiscreteDistribution& q) {
  return HsDivergence(p, q, 1.0);
}

// max{H_{e^eps}(P||Q), H_{e^eps}(Q||P)}.
inline double SymmetricDelta(const DiscreteDistribution& p,
                             const DiscreteDistribution& q, double eps) {
  return std::max(HsDivergenceAtEps(p, q, eps), HsDivergenceAtEps(q, p, eps));
}

// Sums the masses of bins sharing a group index. merge_map[j] is the group of
// bin j; the groups used must be exactly {0, ..., m-1}.
inline DiscreteDistribution Coarsen(const DiscreteDistribution& p,
                                    std::span<const std::size_t> merge_map) {
  if (merge_map.size() != p.size()) {
    throw DimensionError("Coarsen: merge map covers " +
                         std::to_string(merge_map.size()) + " of " +
                         std::to_string(p.size()) + " bins");
  }
  const std::size_t groups =
      *std::max_element(merge_map.begin(), merge_map.end()) + 1;
  if (groups > p.size()) {
    throw DomainError("Coarsen: group index out of range");
  }
  std::vector<CompensatedSum> sums(groups);
  std::vector<bool> used(groups, false);
  for (std::size_t j = 0; j < p.size(); ++j) {
    sums[merge_map[j]].Add(p[j]);
    used[merge_map[j]] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw DomainError("Coarsen: merge map is not surjective onto its groups");
  }
  std::vector<double> out(groups);
  for (std::size_t g = 0; g < groups; ++g) out[g] = sums[g].Value();
  return DiscreteDistribution(std::move(out));
}

}  // namespace dpaudit

#endif  // DPAUDIT_DISCRETE_HPP_
