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

#ifndef DPAUDIT_PROFILE_HPP_
#define DPAUDIT_PROFILE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpaudit/error.hpp"

namespace dpaudit {

// Evenly spaced grid of `count` points on [lo, hi].
inline std::vector<double> LinearGrid(double lo, double hi, std::size_t count) {
  if (count < 1 || (count > 1 && !(hi > lo))) {
    throw DomainError("LinearGrid: need count >= 1 and hi > lo");
  }
  if (count == 1) return {lo};
  std::vector<double> grid(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + step * static_cast<double>(i);
  }
  grid.back() = hi;
  return grid;
}

// eps -> delta(eps), either a closed form restricted to [eps_min, eps_max] or a
// table read with piecewise-linear interpolation (constant outside the table).
class PrivacyProfile {
 public:
  static PrivacyProfile Tabulated(std::vector<double> eps,
                                  std::vector<double> delta) {
    if (eps.empty()) throw DomainError("PrivacyProfile: empty epsilon grid");
    if (eps.size() != delta.size()) {
      throw DimensionError("PrivacyProfile: epsilon and delta lengths differ");
    }
    for (std::size_t i = 1; i < eps.size(); ++i) {
      if (!(eps[i] > eps[i - 1])) {
        throw DomainError("PrivacyProfile: epsilon grid must increase strictly");
      }
    }
    for (double d : delta) {
      if (!(d >= 0.0 && d <= 1.0)) {
        throw DomainError("PrivacyProfile: delta values must lie in [0, 1]");
      }
    }
    PrivacyProfile profile;
    profile.eps_ = std::move(eps);
    profile.delta_ = std::move(delta);
    return profile;
  }

  static PrivacyProfile Analytic(std::function<double(double)> fn,
                                 double eps_min, double eps_max) {
    if (!(eps_max > eps_min)) {
      throw DomainError("PrivacyProfile: need eps_max > eps_min");
    }
    PrivacyProfile profile;
    profile.fn_ = std::move(fn);
    profile.eps_min_ = eps_min;
    profile.eps_max_ = eps_max;
    return profile;
  }

  bool is_tabulated() const { return !fn_; }
  double eps_min() const { return fn_ ? eps_min_ : eps_.front(); }
  double eps_max() const { return fn_ ? eps_max_ : eps_.back(); }
  std::span<const double> eps_grid() const { return eps_; }
  std::span<const double> delta_values() const { return delta_; }

  double Delta(double eps) const {
    if (fn_) return fn_(eps);
    if (eps <= eps_.front()) return delta_.front();
    if (eps >= eps_.back()) return delta_.back();
    const auto it = std::upper_bound(eps_.begin(), eps_.end(), eps);
    const std::size_t i = static_cast<std::size_t>(it - eps_.begin());
    const double t = (eps - eps_[i - 1]) / (eps_[i] - eps_[i - 1]);
    return delta_[i - 1] + t * (delta_[i] - delta_[i - 1]);
  }

  // Smallest eps in [lower, eps_max] with delta(eps) <= target, assuming a
  // non-increasing profile. nullopt when the profile never gets that low.
  std::optional<double> Epsilon(double target, double lower) const {
    lower = std::max(lower, eps_min());
    if (Delta(lower) <= target) return lower;
    if (Delta(eps_max()) > target) return std::nullopt;
    if (fn_) {
      double lo = lower;
      double hi = eps_max();
      for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (fn_(mid) <= target ? hi : lo) = mid;
      }
      return hi;
    }
    // First table node at or below target; interpolate on the segment before it.
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(eps_.begin(), eps_.end(), lower) - eps_.begin());
    while (i < eps_.size() && delta_[i] > target) ++i;
    const double left_eps = i == 0 ? lower : std::max(eps_[i - 1], lower);
    const double left_delta = Delta(left_eps);
    if (left_delta <= target) return left_eps;
    const double t = (left_delta - target) / (left_delta - delta_[i]);
    return left_eps + t * (eps_[i] - left_eps);
  }

  std::optional<double> Epsilon(double target) const {
    return Epsilon(target, eps_min());
  }

  PrivacyProfile Tabulate(std::span<const double> grid) const {
    std::vector<double> eps(grid.begin(), grid.end());
    std::vector<double> delta(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
      delta[i] = std::clamp(Delta(eps[i]), 0.0, 1.0);
    }
    return Tabulated(std::move(eps), std::move(delta));
  }

  // True when tabulated values never increase by more than `slack`.
  bool IsNonIncreasing(double slack = 1e-12) const {
    if (fn_) return true;
    for (std::size_t i = 1; i < delta_.size(); ++i) {
      if (delta_[i] > delta_[i - 1] + slack) return false;
    }
    return true;
  }

 private:
  PrivacyProfile() = default;

  std::function<double(double)> fn_;
  double eps_min_ = 0.0;
  double eps_max_ = 0.0;
  std::vector<double> eps_;
  std::vector<double> delta_;
};

}  // namespace dpaudit

#endif  // DPAUDIT_PROFILE_HPP_
