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

// Reference mechanisms: closed-form privacy profiles, trade-off functions,
// densities and samplers for the Gaussian, subsampled Gaussian and Laplace
// mechanisms. Conventions for the dominating pair (P, Q):
//   Gaussian:            P = N(sensitivity, sigma^2), Q = N(0, sigma^2)
//   Subsampled Gaussian: P = q N(1, sigma^2) + (1 - q) N(0, sigma^2), Q = N(0, sigma^2)
//   Laplace:             P = Lap(l1_sensitivity, lambda), Q = Lap(0, lambda)

#ifndef DPAUDIT_MECHANISMS_HPP_
#define DPAUDIT_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/histogram.hpp"
#include "dpaudit/numeric.hpp"
#include "dpaudit/pld.hpp"
#include "dpaudit/profile.hpp"
#include "dpaudit/random.hpp"

namespace dpaudit {

struct GaussianMech {
  double sigma;
  double sensitivity;

  GaussianMech(double sigma, double sensitivity = 1.0)
      : sigma(sigma), sensitivity(sensitivity) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw DomainError("GaussianMech: sigma must be positive");
    }
    if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
      throw DomainError("GaussianMech: sensitivity must be positive");
    }
  }
};

struct SubsampledGaussianMech {
  double q;
  double sigma;

  SubsampledGaussianMech(double q, double sigma) : q(q), sigma(sigma) {
    if (!(q > 0.0 && q <= 1.0)) {
      throw DomainError("SubsampledGaussianMech: q must lie in (0, 1]");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw DomainError("SubsampledGaussianMech: sigma must be positive");
    }
  }
};

struct LaplaceMech {
  double lambda;
  double l1_sensitivity;

  LaplaceMech(double lambda, double l1_sensitivity = 1.0)
      : lambda(lambda), l1_sensitivity(l1_sensitivity) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw DomainError("LaplaceMech: lambda must be positive");
    }
    if (!(l1_sensitivity > 0.0) || !std::isfinite(l1_sensitivity)) {
      throw DomainError("LaplaceMech: sensitivity must be positive");
    }
  }
};

namespace internal {

inline void RequirePositiveScale(double scale, const char* what) {
  if (!(scale > 0.0)) throw DomainError(std::string(what) + ": scale must be > 0");
}

// e^eps * x without producing inf * 0.
inline double ScaleByExp(double eps, double x) {
  if (x == 0.0) return 0.0;
  return std::exp(eps + std::log(x));
}

}  // namespace internal

// delta(eps) = Phi(-eps s / D + D / 2s) - e^eps Phi(-eps s / D - D / 2s).
inline double GaussianDelta(const GaussianMech& mech, double eps) {
  const double ratio = mech.sigma / mech.sensitivity;
  const double half = mech.sensitivity / (2.0 * mech.sigma);
  const double value = NormalCdf(-eps * ratio + half) -
                       internal::ScaleByExp(eps, NormalCdf(-eps * ratio - half));
  return std::clamp(value, 0.0, 1.0);
}

inline PrivacyProfile GaussianProfile(const GaussianMech& mech,
                                      double eps_min = 0.0,
                                      double eps_max = 50.0) {
  return PrivacyProfile::Analytic(
      [mech](double eps) { return GaussianDelta(mech, eps); }, eps_min,
      eps_max);
}

inline double GaussianDensity(double mu, double sigma, double x) {
  internal::RequirePositiveScale(sigma, "GaussianDensity");
  return NormalPdf((x - mu) / sigma) / sigma;
}

inline double GaussianCdf(double mu, double sigma, double x) {
  internal::RequirePositiveScale(sigma, "GaussianCdf");
  return NormalCdf((x - mu) / sigma);
}

inline double GaussianSf(double mu, double sigma, double x) {
  internal::RequirePositiveScale(sigma, "GaussianSf");
  return NormalSf((x - mu) / sigma);
}

inline double LaplaceDensity(double b, double mu, double x) {
  internal::RequirePositiveScale(b, "LaplaceDensity");
  return std::exp(-std::abs(x - mu) / b) / (2.0 * b);
}

inline double LaplaceCdf(double b, double mu, double x) {
  internal::RequirePositiveScale(b, "LaplaceCdf");
  const double z = (x - mu) / b;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

inline double LaplaceSf(double b, double mu, double x) {
  internal::RequirePositiveScale(b, "LaplaceSf");
  const double z = (x - mu) / b;
  return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
}

inline double MixtureDensity(const SubsampledGaussianMech& mech, double x) {
  return mech.q * GaussianDensity(1.0, mech.sigma, x) +
         (1.0 - mech.q) * GaussianDensity(0.0, mech.sigma, x);
}

inline double MixtureCdf(const SubsampledGaussianMech& mech, double x) {
  return mech.q * GaussianCdf(1.0, mech.sigma, x) +
         (1.0 - mech.q) * GaussianCdf(0.0, mech.sigma, x);
}

inline double MixtureSf(const SubsampledGaussianMech& mech, double x) {
  return mech.q * GaussianSf(1.0, mech.sigma, x) +
         (1.0 - mech.q) * GaussianSf(0.0, mech.sigma, x);
}

// Closed form of the mixture profile. The likelihood ratio of P to Q is
// 1 - q + q exp((x - 1/2) / sigma^2), increasing in x, so each directed
// divergence is attained on a half-line.
inline double SubsampledGaussianDelta(const SubsampledGaussianMech& mech,
                                      double eps) {
  const double alpha = ExpOrInf(eps);
  if (std::isinf(alpha)) return 0.0;
  const double q = mech.q;
  const double s = mech.sigma;
  const double s2 = s * s;
  // H_alpha(P || Q): P(x > x*) - alpha Q(x > x*).
  double forward;
  if (alpha <= 1.0 - q) {
    forward = 1.0 - alpha;
  } else {
    const double cut = s2 * std::log((alpha - 1.0 + q) / q) + 0.5;
    forward = q * NormalSf((cut - 1.0) / s) + (1.0 - q) * NormalSf(cut / s) -
              alpha * NormalSf(cut / s);
  }
  // H_alpha(Q || P): Q(x < x*) - alpha P(x < x*), where ratio < 1 / alpha.
  double backward = 0.0;
  const double inv = 1.0 / alpha;
  if (inv > 1.0 - q) {
    const double cut = s2 * std::log((inv - 1.0 + q) / q) + 0.5;
    backward = NormalCdf(cut / s) -
               alpha * (q * NormalCdf((cut - 1.0) / s) +
                        (1.0 - q) * NormalCdf(cut / s));
  }
  return std::clamp(std::max(forward, backward), 0.0, 1.0);
}

// Total variation of the mixture pair: q (2 Phi(1 / (2 sigma)) - 1).
inline double SubsampledGaussianTv(const SubsampledGaussianMech& mech) {
  return mech.q * (2.0 * NormalCdf(0.5 / mech.sigma) - 1.0);
}

struct MixtureProfileOptions {
  double tail_sigmas = 20.0;      // bins span [-tail * sigma, 1 + tail * sigma]
  double width_per_sigma = 1e-3;  // bin width as a fraction of sigma
  PldGridOptions grid;            // its step is kept; L grows to fit the losses
};

// Analytic bin masses of the mixture pair on the fine layout of `options`.
inline std::pair<DiscreteDistribution, DiscreteDistribution> MixtureBinMasses(
    const SubsampledGaussianMech& mech, const MixtureProfileOptions& options) {
  const double lo = -options.tail_sigmas * mech.sigma;
  const double hi = 1.0 + options.tail_sigmas * mech.sigma;
  const double width = options.width_per_sigma * mech.sigma;
  const auto k = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  const BinningSpec spec(lo, hi, std::max<std::size_t>(k, 2));
  DiscreteDistribution p = BinMasses(
      spec, [&](double x) { return MixtureCdf(mech, x); },
      [&](double x) { return MixtureSf(mech, x); });
  DiscreteDistribution q = BinMasses(
      spec, [&](double x) { return GaussianCdf(0.0, mech.sigma, x); },
      [&](double x) { return GaussianSf(0.0, mech.sigma, x); });
  return {std::move(p), std::move(q)};
}

// Grid options with the step of `base` and a half-width covering every finite
// log-ratio of the pair.
inline PldGridOptions GridCovering(const DiscreteDistribution& p,
                                   const DiscreteDistribution& q,
                                   const PldGridOptions& base) {
  double largest = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0 && q[j] > 0.0) {
      largest = std::max(largest, std::abs(std::log(p[j]) - std::log(q[j])));
    }
  }
  PldGridOptions out = base;
  if (largest < base.half_width) return out;
  const double blocks = std::ceil((largest + 1.0) / base.half_width);
  out.half_width = base.half_width * blocks;
  out.nodes = base.nodes * static_cast<std::size_t>(blocks);
  out.max_nodes = std::max(base.max_nodes, out.nodes);
  return out;
}

// Accurate mixture profile (optionally composed) by the PLD accountant applied
// to finely binned exact densities.
inline PrivacyProfile SubsampledGaussianProfile(
    const SubsampledGaussianMech& mech, std::span<const double> eps_grid,
    std::size_t compositions = 1, const MixtureProfileOptions& options = {}) {
  if (eps_grid.empty()) {
    throw DomainError("SubsampledGaussianProfile: empty epsilon grid");
  }
  const auto [p, q] = MixtureBinMasses(mech, options);
  return ComposeProfile(p, q, compositions, eps_grid,
                        GridCovering(p, q, options.grid));
}

// f(alpha) for mu-GDP: Phi(Phi^{-1}(1 - alpha) - mu).
inline double GdpTradeoff(double mu, double alpha) {
  if (!(mu >= 0.0)) throw DomainError("GdpTradeoff: mu must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("GdpTradeoff: alpha must lie in [0, 1]");
  }
  return NormalCdf(NormalQuantile(1.0 - alpha) - mu);
}

// Trade-off function of the Laplace pair with mu = l1_sensitivity / lambda.
inline double LaplaceTradeoff(double mu, double alpha) {
  if (!(mu >= 0.0)) throw DomainError("LaplaceTradeoff: mu must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("LaplaceTradeoff: alpha must lie in [0, 1]");
  }
  const double decay = std::exp(-mu);
  if (alpha < 0.5 * decay) return 1.0 - alpha / decay;
  if (alpha <= 0.5) return decay / (4.0 * alpha);
  return decay * (1.0 - alpha);
}

// --- Score distributions and sampling --------------------------------------

struct NormalScores {
  double mean;
  double sd;
};

struct LaplaceScores {
  double loc;
  double scale;
};

// q N(1, sigma^2) + (1 - q) N(0, sigma^2).
struct MixtureScores {
  double q;
  double sigma;
};

using ScoreDistribution = std::variant<NormalScores, LaplaceScores, MixtureScores>;

struct ScorePair {
  ScoreDistribution p;
  ScoreDistribution q;
};

inline ScorePair DominatingPair(const GaussianMech& mech) {
  return {NormalScores{mech.sensitivity, mech.sigma},
          NormalScores{0.0, mech.sigma}};
}

inline ScorePair DominatingPair(const SubsampledGaussianMech& mech) {
  return {MixtureScores{mech.q, mech.sigma}, NormalScores{0.0, mech.sigma}};
}

inline ScorePair DominatingPair(const LaplaceMech& mech) {
  return {LaplaceScores{mech.l1_sensitivity, mech.lambda},
          LaplaceScores{0.0, mech.lambda}};
}

inline void Validate(const ScoreDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NormalScores>) {
          if (!(d.sd > 0.0)) throw DomainError("normal scores: sd must be > 0");
        } else if constexpr (std::is_same_v<T, LaplaceScores>) {
          if (!(d.scale > 0.0)) {
            throw DomainError("laplace scores: scale must be > 0");
          }
        } else {
          SubsampledGaussianMech check(d.q, d.sigma);
          (void)check;
        }
      },
      dist);
}

// Owns the generator; use one instance per thread.
class Sampler {
 public:
  Sampler(ScoreDistribution dist, std::uint64_t seed)
      : dist_(dist), rng_(seed) {
    Validate(dist_);
  }

  double Draw() {
    return std::visit(
        [this](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, NormalScores>) {
            return rng_.Normal(d.mean, d.sd);
          } else if constexpr (std::is_same_v<T, LaplaceScores>) {
            return rng_.Laplace(d.loc, d.scale);
          } else {
            const double center = rng_.Bernoulli(d.q) ? 1.0 : 0.0;
            return rng_.Normal(center, d.sigma);
          }
        },
        dist_);
  }

  std::vector<double> Draw(std::size_t n) {
    std::vector<double> out(n);
    for (double& x : out) x = Draw();
    return out;
  }

 private:
  ScoreDistribution dist_;
  Rng rng_;
};

inline std::vector<double> Sample(const ScoreDistribution& dist, std::size_t n,
                                  std::uint64_t seed) {
  if (n == 0) throw DomainError("Sample: need n >= 1");
  return Sampler(dist, seed).Draw(n);
}

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_HPP_
