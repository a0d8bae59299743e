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

// Privacy loss distributions on a uniform grid of log-likelihood ratios, their
// self-composition by convolution, and the resulting privacy profiles.

#ifndef DPAUDIT_PLD_HPP_
#define DPAUDIT_PLD_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/io.hpp"
#include "dpaudit/numeric.hpp"
#include "dpaudit/profile.hpp"

namespace dpaudit {

struct PldGridOptions {
  double half_width = 40.0;             // L: finite losses must lie in [-L, L]
  std::size_t nodes = std::size_t{1} << 20;  // m: grid step is 2L / m
  std::size_t max_nodes = std::size_t{1} << 26;

  double step() const { return 2.0 * half_width / static_cast<double>(nodes); }
};

// Masses on the loss values (offset + i) * step, plus an atom at +inf. Only
// the occupied stretch of the grid is stored.
struct PldGrid {
  double step = 0.0;
  std::int64_t offset = 0;
  std::vector<double> masses;
  double mass_inf = 0.0;

  double grid_start() const { return static_cast<double>(offset) * step; }
  double LossAt(std::size_t i) const {
    return static_cast<double>(offset + static_cast<std::int64_t>(i)) * step;
  }
  double FiniteMass() const { return CompensatedTotal(masses); }
};

// Loss log(p_j / q_j) with mass p_j, rounded up to the grid. Bins with q_j = 0
// feed the +inf atom; bins with p_j = 0 carry nothing.
inline PldGrid PldFromDiscrete(const DiscreteDistribution& p,
                               const DiscreteDistribution& q,
                               const PldGridOptions& options = {}) {
  internal::RequireSameLength(p, q);
  if (!(options.half_width > 0.0) || options.nodes < 2) {
    throw DomainError("PldFromDiscrete: need L > 0 and m >= 2");
  }
  const double step = options.step();
  const double limit = options.half_width;
  std::vector<std::pair<std::int64_t, double>> atoms;
  CompensatedSum inf_mass;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (q[j] == 0.0) {
      inf_mass.Add(p[j]);
      continue;
    }
    const double loss = std::log(p[j]) - std::log(q[j]);
    if (std::abs(loss) > limit) {
      throw GridError("privacy loss " + FormatNumber(loss) +
                      " falls outside the grid [-L, L] with L = " +
                      FormatNumber(limit) + "; use a larger L");
    }
    // Nudge against ratios that are exact multiples of the step.
    const double scaled = loss / step;
    auto index = static_cast<std::int64_t>(std::ceil(scaled - 1e-9));
    atoms.emplace_back(index, p[j]);
  }
  PldGrid pld;
  pld.step = step;
  pld.mass_inf = inf_mass.Value();
  if (atoms.empty()) return pld;
  const auto [lo_it, hi_it] = std::minmax_element(
      atoms.begin(), atoms.end(),
      [](const auto& x, const auto& y) { return x.first < y.first; });
  pld.offset = lo_it->first;
  const auto width = static_cast<std::size_t>(hi_it->first - lo_it->first + 1);
  if (width > options.max_nodes) {
    throw GridError("PLD support needs " + std::to_string(width) +
                    " grid nodes, above the cap");
  }
  pld.masses.assign(width, 0.0);
  for (const auto& [index, mass] : atoms) {
    pld.masses[static_cast<std::size_t>(index - pld.offset)] += mass;
  }
  return pld;
}

namespace internal {

inline std::mutex& FftwPlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

// Power-of-two length >= n.
inline std::size_t FftLength(std::size_t n) {
  std::size_t len = 1;
  while (len < n) len <<= 1;
  return len;
}

inline std::vector<double> DirectConvolve(std::span<const double> a,
                                          std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Linear convolution through a real-to-complex FFT of padded inputs.
inline std::vector<double> FftConvolve(std::span<const double> a,
                                       std::span<const double> b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t len = FftLength(out_len);
  const std::size_t spectrum = len / 2 + 1;
  double* in = fftw_alloc_real(len);
  fftw_complex* fa = fftw_alloc_complex(spectrum);
  fftw_complex* fb = fftw_alloc_complex(spectrum);
  fftw_plan forward_a;
  fftw_plan forward_b;
  fftw_plan backward;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    forward_a = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fa, FFTW_ESTIMATE);
    forward_b = fftw_plan_dft_r2c_1d(static_cast<int>(len), in, fb, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(len), fa, in, FFTW_ESTIMATE);
  }
  std::fill(in, in + len, 0.0);
  std::copy(a.begin(), a.end(), in);
  fftw_execute(forward_a);
  std::fill(in, in + len, 0.0);
  std::copy(b.begin(), b.end(), in);
  fftw_execute(forward_b);
  for (std::size_t i = 0; i < spectrum; ++i) {
    const std::complex<double> x(fa[i][0], fa[i][1]);
    const std::complex<double> y(fb[i][0], fb[i][1]);
    const std::complex<double> z = x * y;
    fa[i][0] = z.real();
    fa[i][1] = z.imag();
  }
  fftw_execute(backward);
  std::vector<double> out(out_len);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t i = 0; i < out_len; ++i) {
    // Round-off leaves values of order 1e-17 where the true mass is zero.
    out[i] = std::max(in[i] * scale, 0.0);
  }
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    fftw_destroy_plan(forward_a);
    fftw_destroy_plan(forward_b);
    fftw_destroy_plan(backward);
  }
  fftw_free(in);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

inline std::vector<double> Convolve(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() * b.size() <= (std::size_t{1} << 20)) return DirectConvolve(a, b);
  return FftConvolve(a, b);
}

// Finite part of the sum of two independent losses on the same grid.
inline PldGrid ConvolveGrids(const PldGrid& x, const PldGrid& y,
                             std::size_t max_nodes) {
  PldGrid out;
  out.step = x.step;
  out.mass_inf = 1.0 - (1.0 - x.mass_inf) * (1.0 - y.mass_inf);
  if (x.masses.empty() || y.masses.empty()) return out;
  if (x.masses.size() + y.masses.size() - 1 > max_nodes) {
    throw GridError("composed PLD needs " +
                    std::to_string(x.masses.size() + y.masses.size() - 1) +
                    " grid nodes, above the cap of " + std::to_string(max_nodes));
  }
  out.offset = x.offset + y.offset;
  out.masses = Convolve(x.masses, y.masses);
  // Drop trailing/leading cells that the FFT left at exactly zero.
  std::size_t first = 0;
  while (first + 1 < out.masses.size() && out.masses[first] == 0.0) ++first;
  std::size_t last = out.masses.size();
  while (last > first + 1 && out.masses[last - 1] == 0.0) --last;
  out.masses = std::vector<double>(out.masses.begin() + static_cast<long>(first),
                                   out.masses.begin() + static_cast<long>(last));
  out.offset += static_cast<std::int64_t>(first);
  return out;
}

}  // namespace internal

// Distribution of the sum of c independent copies, by repeated squaring.
inline PldGrid SelfConvolve(const PldGrid& pld, std::size_t c,
                            std::size_t max_nodes = std::size_t{1} << 26) {
  if (c < 1) throw DomainError("SelfConvolve: need c >= 1");
  PldGrid result;
  bool have_result = false;
  PldGrid power = pld;
  std::size_t remaining = c;
  while (true) {
    if (remaining & 1U) {
      result = have_result ? internal::ConvolveGrids(result, power, max_nodes)
                           : power;
      have_result = true;
    }
    remaining >>= 1U;
    if (remaining == 0) break;
    power = internal::ConvolveGrids(power, power, max_nodes);
  }
  // The finite part of the atom at +inf follows 1 - (1 - m)^c exactly.
  result.mass_inf = 1.0 - std::pow(1.0 - pld.mass_inf, static_cast<double>(c));
  return result;
}

// delta(eps) = mass_inf + sum_s m(s) max{0, 1 - e^{eps - s}}.
inline double DeltaFromPld(const PldGrid& pld, double eps) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < pld.masses.size(); ++i) {
    const double loss = pld.LossAt(i);
    if (loss <= eps || pld.masses[i] == 0.0) continue;
    sum.Add(pld.masses[i] * -std::expm1(eps - loss));
  }
  sum.Add(pld.mass_inf);
  return std::clamp(sum.Value(), 0.0, 1.0);
}

// delta(eps) for every eps in `eps_grid` in one pass over the losses, using
// delta(eps) = mass_inf + sum_{s > eps} m(s) - e^eps sum_{s > eps} m(s) e^{-s}.
// Only losses above eps enter the tilted sum, so e^{-s} stays finite for
// eps >= -600; below that the direct sum is used.
inline std::vector<double> DeltaCurveFromPld(const PldGrid& pld,
                                             std::span<const double> eps_grid) {
  std::vector<std::size_t> order(eps_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return eps_grid[a] > eps_grid[b];
  });
  std::vector<double> delta(eps_grid.size());
  CompensatedSum mass_above;
  CompensatedSum tilted_above;
  std::size_t next = pld.masses.size();  // losses at indices >= next are summed
  for (std::size_t i : order) {
    const double eps = eps_grid[i];
    if (pld.masses.empty() || eps < -600.0) {
      delta[i] = DeltaFromPld(pld, eps);
      continue;
    }
    while (next > 0 && pld.LossAt(next - 1) > eps) {
      --next;
      const double m = pld.masses[next];
      if (m == 0.0) continue;
      mass_above.Add(m);
      tilted_above.Add(m * std::exp(-pld.LossAt(next)));
    }
    const double value = pld.mass_inf + mass_above.Value() -
                         std::exp(eps) * tilted_above.Value();
    delta[i] = std::clamp(value, 0.0, 1.0);
  }
  return delta;
}

// Profile of the c-fold composition: max over the two loss directions.
inline PrivacyProfile ComposeProfile(const DiscreteDistribution& p,
                                     const DiscreteDistribution& q,
                                     std::size_t c,
                                     std::span<const double> eps_grid,
                                     const PldGridOptions& options = {}) {
  if (eps_grid.empty()) throw DomainError("ComposeProfile: empty epsilon grid");
  const PldGrid forward =
      SelfConvolve(PldFromDiscrete(p, q, options), c, options.max_nodes);
  const PldGrid backward =
      SelfConvolve(PldFromDiscrete(q, p, options), c, options.max_nodes);
  std::vector<double> eps(eps_grid.begin(), eps_grid.end());
  std::vector<double> delta = DeltaCurveFromPld(forward, eps);
  const std::vector<double> reverse = DeltaCurveFromPld(backward, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    delta[i] = std::max(delta[i], reverse[i]);
  }
  return PrivacyProfile::Tabulated(std::move(eps), std::move(delta));
}

}  // namespace dpaudit

#endif  // DPAUDIT_PLD_HPP_
