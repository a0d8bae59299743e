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

// Small numeric toolbox shared by every module: compensated summation, the
// standard normal distribution, and one-dimensional search routines.

#ifndef DPAUDIT_NUMERIC_HPP_
#define DPAUDIT_NUMERIC_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/erf.hpp>

#include "dpaudit/error.hpp"

namespace dpaudit {

// Neumaier's variant of Kahan summation. Error is O(eps) independent of the
// number of terms, which keeps divergences over 10^6 bins accurate to ~1e-15.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double Value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

template <typename Range>
double CompensatedTotal(const Range& values) {
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  return sum.Value();
}

inline double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Phi(x) through erfc, accurate in relative terms deep into the lower tail.
inline double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// 1 - Phi(x) without cancellation.
inline double NormalSf(double x) { return NormalCdf(-x); }

// Phi^{-1}(p) = -sqrt(2) erfc^{-1}(2p), accurate in relative terms in both tails.
inline double NormalQuantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw DomainError("NormalQuantile: p must lie in [0, 1]");
  }
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (p > 0.5) return -NormalQuantile(1.0 - p);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

struct SearchResult {
  double x;
  double value;
};

// Golden-section minimisation of a unimodal function on [lo, hi].
inline SearchResult GoldenSectionMinimize(const std::function<double(double)>& f,
                                          double lo, double hi,
                                          double tolerance = 1e-10,
                                          int max_iterations = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && (hi - lo) > tolerance; ++i) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? SearchResult{c, fc} : SearchResult{d, fd};
}

// Trapezoid rule on [lo, hi] with `intervals` equal panels.
inline double Trapezoid(const std::function<double(double)>& f, double lo,
                        double hi, std::size_t intervals) {
  const double h = (hi - lo) / static_cast<double>(intervals);
  CompensatedSum sum;
  sum.Add(0.5 * f(lo));
  sum.Add(0.5 * f(hi));
  for (std::size_t i = 1; i < intervals; ++i) {
    sum.Add(f(lo + h * static_cast<double>(i)));
  }
  return sum.Value() * h;
}

// exp(eps) with +inf for large eps instead of an overflow warning.
inline double ExpOrInf(double eps) {
  if (eps > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(eps);
}

}  // namespace dpaudit

#endif  // DPAUDIT_NUMERIC_HPP_
