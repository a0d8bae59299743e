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

// Frequentist error bars: the multinomial TV radius of Canonne, its transfer
// to hockey-stick divergences, and Clopper-Pearson binomial intervals.

#ifndef DPAUDIT_CONFIDENCE_HPP_
#define DPAUDIT_CONFIDENCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include <boost/math/special_functions/beta.hpp>

#include "dpaudit/error.hpp"
#include "dpaudit/numeric.hpp"

namespace dpaudit {

// With probability >= confidence, TV(p, p_hat) <= tau for an n-sample
// empirical distribution over k bins.
struct TvRadius {
  double tau;
  double confidence;
  std::size_t n;
  std::size_t k;
};

struct Interval {
  double lower;
  double upper;
};

// Smallest tau for which n >= max(k / tau^2, 2 log(2 / failure) / tau^2).
inline TvRadius CanonneRadius(std::size_t n, std::size_t k,
                              double failure_prob) {
  if (n < 1 || k < 1) throw DomainError("CanonneRadius: need n, k >= 1");
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    throw DomainError("CanonneRadius: failure probability must be in (0, 1)");
  }
  const double nd = static_cast<double>(n);
  const double tau = std::max(std::sqrt(static_cast<double>(k) / nd),
                              std::sqrt(2.0 / nd * std::log(2.0 / failure_prob)));
  return TvRadius{tau, 1.0 - failure_prob, n, k};
}

inline std::uint64_t RequiredSamples(std::size_t k, double tau,
                                     double failure_prob) {
  if (!(tau > 0.0)) throw DomainError("RequiredSamples: tau must be > 0");
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    throw DomainError("RequiredSamples: failure probability must be in (0, 1)");
  }
  const double needed =
      std::max(static_cast<double>(k), 2.0 * std::log(2.0 / failure_prob)) /
      (tau * tau);
  // Guard against 9999.999999 -> 10000 style rounding of exact quotients.
  return static_cast<std::uint64_t>(std::ceil(needed * (1.0 - 1e-12)));
}

// Two-sided bound on H_{e^eps}(P||Q) around the binned estimate, with slack
// (1 + e^eps) * max(tau_p, tau_q).
inline Interval HsInterval(double delta_hat, double eps, const TvRadius& tau_p,
                           const TvRadius& tau_q) {
  if (!(delta_hat >= 0.0 && delta_hat <= 1.0)) {
    throw DomainError("HsInterval: estimate must lie in [0, 1]");
  }
  const double tau = std::max(tau_p.tau, tau_q.tau);
  const double slack = (1.0 + ExpOrInf(eps)) * tau;
  if (std::isinf(slack)) return {0.0, 1.0};
  return {std::max(0.0, delta_hat - slack), std::min(1.0, delta_hat + slack)};
}

// [tv_hat - tau, tv_hat + tau] clipped to [0, 1].
inline Interval TvInterval(double tv_hat, double tau) {
  return {std::max(0.0, tv_hat - tau), std::min(1.0, tv_hat + tau)};
}

inline Interval ClopperPearson(std::uint64_t successes, std::uint64_t trials,
                               double confidence) {
  if (trials < 1 || successes > trials) {
    throw DomainError("ClopperPearson: need 0 <= successes <= trials, trials >= 1");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("ClopperPearson: confidence must be in (0, 1)");
  }
  const double tail = 0.5 * (1.0 - confidence);
  const double s = static_cast<double>(successes);
  const double t = static_cast<double>(trials);
  const double lower =
      successes == 0 ? 0.0 : boost::math::ibeta_inv(s, t - s + 1.0, tail);
  const double upper = successes == trials
                           ? 1.0
                           : boost::math::ibeta_inv(s + 1.0, t - s, 1.0 - tail);
  return {lower, upper};
}

}  // namespace dpaudit

#endif  // DPAUDIT_CONFIDENCE_HPP_
