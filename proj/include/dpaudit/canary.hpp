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

// Synthetic canary simulators: the one-shot release with many random
// unit-sphere canaries, and a white-box gradient stream with a random canary
// gradient per step.
//
// Each simulator has two engines. The explicit engine materialises the
// d-dimensional vectors. The projected engine draws the same scores exactly in
// distribution at a cost independent of d: for a d x m Gaussian matrix G = QR,
// Q is Haar-distributed and independent of R, whose entries are independent
// with R_jt ~ N(0, 1) above the diagonal and R_tt ~ chi_{d - t}. Rotating the
// isotropic noise by Q^T leaves it isotropic, so every inner product the
// scores need can be computed in the m-dimensional coordinates of R.

#ifndef DPAUDIT_CANARY_HPP_
#define DPAUDIT_CANARY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "dpaudit/error.hpp"
#include "dpaudit/estimators.hpp"
#include "dpaudit/random.hpp"

namespace dpaudit {

enum class CanaryEngine { kExplicit, kProjected };

struct OneShotConfig {
  std::size_t d = 1;
  std::size_t n = 1;
  double sigma = 1.0;
  double x_norm = 0.0;
  std::uint64_t seed = 0;
};

inline void Validate(const OneShotConfig& cfg) {
  if (cfg.d < 1) throw DomainError("one-shot: dimension d must be >= 1");
  if (cfg.n < 1) throw DomainError("one-shot: need at least one canary per side");
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw DomainError("one-shot: sigma must be positive");
  }
  if (!(cfg.x_norm >= 0.0) || !std::isfinite(cfg.x_norm)) {
    throw DomainError("one-shot: x_norm must be >= 0");
  }
}

// n independent directions, uniform on the unit sphere in R^d.
inline std::vector<std::vector<double>> SampleSphere(std::size_t d,
                                                     std::size_t n, Rng& rng) {
  if (d < 1) throw DomainError("SampleSphere: d must be >= 1");
  std::vector<std::vector<double>> out(n, std::vector<double>(d));
  for (auto& v : out) {
    double norm2 = 0.0;
    do {
      CompensatedSum sum;
      for (double& x : v) {
        x = rng.Normal();
        sum.Add(x * x);
      }
      norm2 = sum.Value();
    } while (!(norm2 > 0.0));
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
  }
  return out;
}

struct OneShotRelease {
  std::vector<double> theta;
  std::vector<std::vector<double>> train;
  std::vector<std::vector<double>> test;
};

namespace internal {

// Stream labels for DeriveSeed; fixed so that outputs are reproducible.
inline constexpr std::uint64_t kBaseStream = 1;
inline constexpr std::uint64_t kTrainStream = 2;
inline constexpr std::uint64_t kTestStream = 3;
inline constexpr std::uint64_t kNoiseStream = 4;
inline constexpr std::uint64_t kOffDiagonalStream = 5;
inline constexpr std::uint64_t kChiStream = 6;
inline constexpr std::uint64_t kBernoulliStream = 7;
inline constexpr std::uint64_t kNuisanceStream = 8;

// Uniform in the open interval (0, 1).
inline double OpenUniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Chi with `dof` degrees of freedom as the quantile of the uniform u.
inline double ChiQuantile(double dof, double u) {
  return std::sqrt(2.0 * boost::math::gamma_p_inv(0.5 * dof, u));
}

inline double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DimensionError("inner product of vectors of length " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < a.size(); ++i) sum.Add(a[i] * b[i]);
  return sum.Value();
}

// Column t of the triangular factor for a d x m Gaussian matrix. Off-diagonal
// entries and the uniform behind the diagonal come from per-column streams
// that do not depend on d, so runs that differ only in d share their noise.
inline std::vector<double> TriangularColumn(std::uint64_t seed, std::size_t t,
                                            std::size_t d) {
  Rng off(DeriveSeed(DeriveSeed(seed, kOffDiagonalStream), t));
  std::vector<double> column(std::min(t, d));
  for (double& x : column) x = off.Normal();
  if (t < d) {
    Rng chi(DeriveSeed(DeriveSeed(seed, kChiStream), t));
    column.push_back(ChiQuantile(static_cast<double>(d - t), OpenUniform(chi)));
  }
  return column;
}

inline double Norm(const std::vector<double>& v) {
  CompensatedSum sum;
  for (double x : v) sum.Add(x * x);
  return std::sqrt(sum.Value());
}

}  // namespace internal

// theta = X + sum of the train canaries + Z, Z ~ N(0, sigma^2 I_d).
inline OneShotRelease MakeOneShotRelease(const OneShotConfig& cfg) {
  Validate(cfg);
  Rng base_rng(DeriveSeed(cfg.seed, internal::kBaseStream));
  Rng train_rng(DeriveSeed(cfg.seed, internal::kTrainStream));
  Rng test_rng(DeriveSeed(cfg.seed, internal::kTestStream));
  Rng noise_rng(DeriveSeed(cfg.seed, internal::kNoiseStream));
  OneShotRelease release;
  const std::vector<double> base = SampleSphere(cfg.d, 1, base_rng).front();
  release.train = SampleSphere(cfg.d, cfg.n, train_rng);
  release.test = SampleSphere(cfg.d, cfg.n, test_rng);
  release.theta.assign(cfg.d, 0.0);
  for (std::size_t i = 0; i < cfg.d; ++i) {
    CompensatedSum sum;
    sum.Add(cfg.x_norm * base[i]);
    for (const auto& canary : release.train) sum.Add(canary[i]);
    sum.Add(cfg.sigma * noise_rng.Normal());
    release.theta[i] = sum.Value();
  }
  return release;
}

struct ScorePairSamples {
  std::vector<double> p;  // train canaries
  std::vector<double> q;  // test canaries
};

inline ScorePairSamples OneShotScores(
    const std::vector<double>& theta,
    const std::vector<std::vector<double>>& train,
    const std::vector<std::vector<double>>& test) {
  ScorePairSamples out;
  out.p.reserve(train.size());
  out.q.reserve(test.size());
  for (const auto& x : train) out.p.push_back(internal::Dot(x, theta));
  for (const auto& x : test) out.q.push_back(internal::Dot(x, theta));
  return out;
}

// Scores with the same joint distribution as the explicit release, computed
// in the span of the 2n + 1 directions (base, train canaries, test canaries).
inline ScorePairSamples ProjectedOneShotScores(const OneShotConfig& cfg) {
  Validate(cfg);
  const std::size_t n = cfg.n;
  const std::size_t m = 2 * n + 1;
  const std::size_t rows = std::min(m, cfg.d);
  std::vector<double> v(rows, 0.0);
  {
    Rng noise(DeriveSeed(cfg.seed, internal::kNoiseStream));
    for (double& x : v) x = cfg.sigma * noise.Normal();
  }
  auto add_column = [&v](const std::vector<double>& column, double weight) {
    for (std::size_t j = 0; j < column.size(); ++j) v[j] += weight * column[j];
  };
  const std::vector<double> base = internal::TriangularColumn(cfg.seed, 0, cfg.d);
  add_column(base, cfg.x_norm / internal::Norm(base));
  std::vector<std::vector<double>> train(n);
  std::vector<double> train_norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    train[i] = internal::TriangularColumn(cfg.seed, 1 + i, cfg.d);
    train_norm[i] = internal::Norm(train[i]);
    add_column(train[i], 1.0 / train_norm[i]);
  }
  auto score = [&v](const std::vector<double>& column, double norm) {
    CompensatedSum sum;
    for (std::size_t j = 0; j < column.size(); ++j) sum.Add(column[j] * v[j]);
    return sum.Value() / norm;
  };
  ScorePairSamples out;
  out.p.reserve(n);
  out.q.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.p.push_back(score(train[i], train_norm[i]));
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> column =
        internal::TriangularColumn(cfg.seed, 1 + n + i, cfg.d);
    out.q.push_back(score(column, internal::Norm(column)));
  }
  return out;
}

inline ScorePairSamples OneShotScores(const OneShotConfig& cfg,
                                      CanaryEngine engine) {
  if (engine == CanaryEngine::kProjected) return ProjectedOneShotScores(cfg);
  const OneShotRelease release = MakeOneShotRelease(cfg);
  return OneShotScores(release.theta, release.train, release.test);
}

inline AuditReport OneShotAudit(const OneShotConfig& cfg,
                                const AuditConfig& audit = {},
                                CanaryEngine engine = CanaryEngine::kProjected) {
  const ScorePairSamples scores = OneShotScores(cfg, engine);
  AuditReport report = HistogramAudit(scores.p, scores.q, audit);
  report.method = AuditMethod::kOneShot;
  return report;
}

// --- White-box stream ---------------------------------------------------------

struct WhiteBoxConfig {
  std::size_t steps = 1;         // T
  double canary_rate = 1.0;      // q_c
  double sample_rate = 0.01;     // q, used for the nuisance batch size
  double sigma = 1.0;
  double clip = 1.0;             // C
  std::size_t d = 1;
  std::uint64_t seed = 0;
  std::size_t dataset_size = 0;  // 0 switches the nuisance gradients off
  double nuisance_norm = 0.0;    // per-example gradient norm, as a fraction of C
  double learning_rate = 0.1;
  CanaryEngine engine = CanaryEngine::kProjected;
};

inline void Validate(const WhiteBoxConfig& cfg) {
  if (cfg.steps < 1) throw DomainError("white-box: need at least one step");
  if (!(cfg.canary_rate >= 0.0 && cfg.canary_rate <= 1.0)) {
    throw DomainError("white-box: canary rate must lie in [0, 1]");
  }
  if (!(cfg.sample_rate > 0.0 && cfg.sample_rate <= 1.0)) {
    throw DomainError("white-box: sample rate must lie in (0, 1]");
  }
  if (!(cfg.sigma > 0.0) || !(cfg.clip > 0.0)) {
    throw DomainError("white-box: sigma and clip must be positive");
  }
  if (cfg.d < 1) throw DomainError("white-box: dimension d must be >= 1");
  if (!(cfg.nuisance_norm >= 0.0 && cfg.nuisance_norm <= 1.0)) {
    throw DomainError("white-box: nuisance norm must lie in [0, 1]");
  }
}

struct WhiteBoxScores {
  std::vector<double> without_canary;  // O
  std::vector<double> with_canary;     // O'
};

namespace internal {

inline std::size_t BinomialDraw(std::size_t trials, double p, Rng& rng) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < trials; ++i) count += rng.Bernoulli(p) ? 1 : 0;
  return count;
}

}  // namespace internal

// Per step, with a fresh canary gradient g' of norm C:
//   O[t]  = <N_t + Z_t, g'>,  O'[t] = <N_t + Z'_t + b_t g', g'>,
// where Z_t, Z'_t ~ N(0, C^2 sigma^2 I_d), b_t ~ Bernoulli(q_c), and N_t is
// the (optional) sum of the batch's clipped gradients. All batch examples
// share one gradient direction of norm nuisance_norm * C. The model update is
// carried along but never feeds back into the scores.
inline WhiteBoxScores WhiteBoxStream(const WhiteBoxConfig& cfg) {
  Validate(cfg);
  Rng canary_rng(DeriveSeed(cfg.seed, internal::kTrainStream));
  Rng noise_rng(DeriveSeed(cfg.seed, internal::kNoiseStream));
  Rng coin_rng(DeriveSeed(cfg.seed, internal::kBernoulliStream));
  Rng batch_rng(DeriveSeed(cfg.seed, internal::kNuisanceStream));
  const double c = cfg.clip;
  const double noise_sd = c * cfg.sigma;
  WhiteBoxScores out;
  out.without_canary.reserve(cfg.steps);
  out.with_canary.reserve(cfg.steps);
  std::vector<double> theta;
  if (cfg.engine == CanaryEngine::kExplicit) theta.assign(cfg.d, 0.0);
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const bool inserted = coin_rng.Bernoulli(cfg.canary_rate);
    const std::size_t batch =
        cfg.dataset_size == 0
            ? 0
            : internal::BinomialDraw(cfg.dataset_size, cfg.sample_rate, batch_rng);
    const double nuisance = static_cast<double>(batch) * cfg.nuisance_norm * c;
    if (cfg.engine == CanaryEngine::kExplicit) {
      const std::vector<double> g =
          SampleSphere(cfg.d, 1, canary_rng).front();  // unit; canary is c * g
      CompensatedSum o;
      CompensatedSum o_prime;
      for (std::size_t i = 0; i < cfg.d; ++i) {
        const double shared = i == 0 ? nuisance : 0.0;
        const double z = noise_rng.Normal(0.0, noise_sd);
        const double z_prime = noise_rng.Normal(0.0, noise_sd);
        const double canary = c * g[i];
        o.Add((shared + z) * canary);
        o_prime.Add((shared + z_prime + (inserted ? canary : 0.0)) * canary);
        theta[i] -= cfg.learning_rate *
                    (shared + z_prime + (inserted ? canary : 0.0));
      }
      out.without_canary.push_back(o.Value());
      out.with_canary.push_back(o_prime.Value());
    } else {
      // <Z, g'> ~ N(0, C^4 sigma^2); <N_t, g'> = nuisance * C * u_1 with u_1 the
      // first coordinate of a uniform unit vector, shared by O and O'.
      double u1 = 1.0;
      if (cfg.d > 1) {
        const double head = canary_rng.Normal();
        const double tail2 =
            2.0 * boost::math::gamma_p_inv(0.5 * static_cast<double>(cfg.d - 1),
                                           internal::OpenUniform(canary_rng));
        u1 = head / std::sqrt(head * head + tail2);
      } else {
        u1 = canary_rng.Bernoulli(0.5) ? 1.0 : -1.0;
      }
      const double shared = nuisance * c * u1;
      const double o = shared + c * noise_rng.Normal(0.0, noise_sd);
      const double o_prime = shared + c * noise_rng.Normal(0.0, noise_sd) +
                             (inserted ? c * c : 0.0);
      out.without_canary.push_back(o);
      out.with_canary.push_back(o_prime);
    }
  }
  return out;
}

}  // namespace dpaudit

#endif  // DPAUDIT_CANARY_HPP_
