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

// Trade-off functions: the (eps, delta) lower envelope f_{eps,delta}, the
// profile-to-curve conversion, and curve diagnostics.

#ifndef DPAUDIT_TRADEOFF_HPP_
#define DPAUDIT_TRADEOFF_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dpaudit/error.hpp"
#include "dpaudit/io.hpp"
#include "dpaudit/numeric.hpp"
#include "dpaudit/profile.hpp"

namespace dpaudit {

// Piecewise-linear curve through (alpha_i, beta_i) with strictly increasing
// alpha in [0, 1]. Shape constraints are checked by Validate, not enforced.
class TradeoffCurve {
 public:
  TradeoffCurve(std::vector<double> alpha, std::vector<double> beta)
      : alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (alpha_.size() != beta_.size()) {
      throw DimensionError("TradeoffCurve: alpha and beta lengths differ");
    }
    if (alpha_.size() < 2) throw DomainError("TradeoffCurve: need two nodes");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!(alpha_[i] >= 0.0 && alpha_[i] <= 1.0 && beta_[i] >= 0.0 &&
            beta_[i] <= 1.0)) {
        throw DomainError("TradeoffCurve: nodes must lie in [0, 1]^2");
      }
      if (i > 0 && !(alpha_[i] > alpha_[i - 1])) {
        throw DomainError("TradeoffCurve: alpha must increase strictly");
      }
    }
  }

  std::size_t size() const { return alpha_.size(); }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }

  double Beta(double a) const {
    if (a <= alpha_.front()) return beta_.front();
    if (a >= alpha_.back()) return beta_.back();
    const auto it = std::upper_bound(alpha_.begin(), alpha_.end(), a);
    const auto i = static_cast<std::size_t>(it - alpha_.begin());
    const double t = (a - alpha_[i - 1]) / (alpha_[i] - alpha_[i - 1]);
    return beta_[i - 1] + t * (beta_[i] - beta_[i - 1]);
  }

 private:
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

// f_{eps,delta}(alpha) = max{0, 1 - delta - e^eps alpha, e^-eps (1 - delta - alpha)}.
inline double FEpsDelta(double eps, double delta, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("FEpsDelta: alpha must lie in [0, 1]");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DomainError("FEpsDelta: delta must lie in [0, 1]");
  }
  const double e = ExpOrInf(eps);
  const double steep = std::isinf(e) ? (alpha > 0 ? -1.0 : 1.0 - delta)
                                     : 1.0 - delta - e * alpha;
  return std::max({0.0, steep, (1.0 - delta - alpha) / e});
}

inline constexpr std::size_t kMinCurveNodes = 512;

// Upper envelope of f_{eps(delta'), delta'} over n_points values delta' spread
// linearly over [delta_target, 1 - delta_target], sampled on a uniform grid of
// max(n_points, 512) alpha nodes. eps(delta') is read from the profile on
// eps >= 0; delta' values the profile never reaches are skipped.
inline TradeoffCurve ProfileToTradeoff(const PrivacyProfile& profile,
                                       double delta_target = 1e-3,
                                       std::size_t n_points = 200) {
  if (!(delta_target > 0.0 && delta_target < 0.5)) {
    throw DomainError("ProfileToTradeoff: delta target must be in (0, 0.5)");
  }
  if (n_points < 2) throw DomainError("ProfileToTradeoff: need n_points >= 2");

  const std::vector<double> deltas =
      LinearGrid(delta_target, 1.0 - delta_target, n_points);
  std::vector<std::pair<double, double>> pairs;  // (eps, delta')
  pairs.reserve(deltas.size());
  for (double d : deltas) {
    if (auto eps = profile.Epsilon(d, 0.0)) pairs.emplace_back(*eps, d);
  }
  if (pairs.empty()) {
    throw DomainError("ProfileToTradeoff: profile does not reach delta = " +
                      FormatNumber(1.0 - delta_target) +
                      " on its epsilon range");
  }

  const std::vector<double> alpha =
      LinearGrid(0.0, 1.0, std::max(n_points, kMinCurveNodes));
  std::vector<double> beta(alpha.size(), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (const auto& [eps, d] : pairs) {
      beta[i] = std::max(beta[i], FEpsDelta(eps, d, alpha[i]));
    }
  }
  return TradeoffCurve(alpha, std::move(beta));
}

// Samples a closed-form trade-off function on a uniform alpha grid.
inline TradeoffCurve SampleTradeoff(const std::function<double(double)>& f,
                                    std::size_t nodes = kMinCurveNodes) {
  std::vector<double> alpha = LinearGrid(0.0, 1.0, nodes);
  std::vector<double> beta(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) beta[i] = f(alpha[i]);
  return TradeoffCurve(std::move(alpha), std::move(beta));
}

struct CurveViolation {
  enum class Kind { kIncreasing, kNonConvex, kAboveDiagonal };
  Kind kind;
  std::size_t index;
  std::string message;
};

// Empty iff the curve is non-increasing, convex and below 1 - alpha, each to
// within `slack`.
inline std::vector<CurveViolation> Validate(const TradeoffCurve& curve,
                                            double slack = 1e-9) {
  std::vector<CurveViolation> out;
  const auto& a = curve.alpha();
  const auto& b = curve.beta();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > 1.0 - a[i] + slack) {
      out.push_back({CurveViolation::Kind::kAboveDiagonal, i,
                     "beta exceeds 1 - alpha at alpha = " + FormatNumber(a[i])});
    }
    if (i > 0 && b[i] > b[i - 1] + slack) {
      out.push_back({CurveViolation::Kind::kIncreasing, i,
                     "beta increases at alpha = " + FormatNumber(a[i])});
    }
    if (i > 0 && i + 1 < a.size()) {
      const double left = (b[i] - b[i - 1]) / (a[i] - a[i - 1]);
      const double right = (b[i + 1] - b[i]) / (a[i + 1] - a[i]);
      // Slopes of a convex curve never decrease.
      if (right < left - slack * std::max(1.0, std::abs(left))) {
        out.push_back({CurveViolation::Kind::kNonConvex, i,
                       "curve is not convex at alpha = " + FormatNumber(a[i])});
      }
    }
  }
  return out;
}

// Largest |f(alpha) - g(alpha)| over a dense grid of [lo, hi].
inline double SupDistance(const std::function<double(double)>& f,
                          const std::function<double(double)>& g, double lo,
                          double hi, std::size_t nodes = 4001) {
  double worst = 0.0;
  for (double a : LinearGrid(lo, hi, nodes)) {
    worst = std::max(worst, std::abs(f(a) - g(a)));
  }
  return worst;
}

inline double SupDistance(const TradeoffCurve& f, const TradeoffCurve& g,
                          double lo = 0.0, double hi = 1.0) {
  return SupDistance([&](double a) { return f.Beta(a); },
                     [&](double a) { return g.Beta(a); }, lo, hi);
}

// mu_lower = Phi^{-1}(1 - alpha_bar) - Phi^{-1}(beta_bar).
inline double MuLowerFromRates(double alpha_bar, double beta_bar) {
  if (!(alpha_bar > 0.0 && alpha_bar < 1.0 && beta_bar > 0.0 &&
        beta_bar < 1.0)) {
    throw DomainError("MuLowerFromRates: rates must be strictly inside (0, 1); "
                      "boundary rates give an unbounded mu");
  }
  return NormalQuantile(1.0 - alpha_bar) - NormalQuantile(beta_bar);
}

inline std::string CurveToCsv(const TradeoffCurve& curve) {
  return FormatCsv("alpha,beta", curve.alpha(), curve.beta());
}

}  // namespace dpaudit

#endif  // DPAUDIT_TRADEOFF_HPP_
