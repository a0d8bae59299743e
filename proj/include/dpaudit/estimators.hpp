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

// Audit pipelines built on the lower layers: the histogram audit with
// confidence bounds, the threshold membership-inference baseline, exposure,
// monotone inversion for single-parameter families, mu-GDP fitting, and the
// sensitivity of the Gaussian profile to its noise scale.

#ifndef DPAUDIT_ESTIMATORS_HPP_
#define DPAUDIT_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpaudit/confidence.hpp"
#include "dpaudit/discrete.hpp"
#include "dpaudit/error.hpp"
#include "dpaudit/histogram.hpp"
#include "dpaudit/io.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/numeric.hpp"
#include "dpaudit/profile.hpp"
#include "dpaudit/tradeoff.hpp"

namespace dpaudit {

// --- Monotone inversion ------------------------------------------------------

// Solves forward(x) = target on [lo, hi] by bisection for a strictly monotone
// forward map (increasing or decreasing).
inline double InvertMonotone(const std::function<double(double)>& forward,
                             double target, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("InvertMonotone: need lo < hi");
  const double f_lo = forward(lo);
  const double f_hi = forward(hi);
  const bool increasing = f_hi >= f_lo;
  if (target < std::min(f_lo, f_hi) || target > std::max(f_lo, f_hi)) {
    throw DomainError("InvertMonotone: target " + FormatNumber(target) +
                      " is outside the bracket's range [" +
                      FormatNumber(std::min(f_lo, f_hi)) + ", " +
                      FormatNumber(std::max(f_lo, f_hi)) + "]");
  }
  if (std::abs(f_lo - target) <= 1e-10 && std::abs(f_hi - target) > 1e-10) {
    return lo;
  }
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double value = forward(mid);
    if (std::abs(value - target) <= 1e-10 || hi - lo <= 0.0) break;
    ((value < target) == increasing ? lo : hi) = mid;
  }
  return mid;
}

// --- Single-parameter estimation from the TV distance ---------------------------

struct SigmaEstimate {
  double q;  // subsampling ratio of the assumed mixture family; 1 = Gaussian
  double tv_hat;
  Interval tv_interval;
  double sigma;
  double sigma_lower;
  double sigma_upper;  // +inf when the TV interval reaches 0
};

inline constexpr double kSigmaBracketLo = 1e-3;
inline constexpr double kSigmaBracketHi = 1e3;

// Inverts TV(sigma) = q (2 Phi(1 / (2 sigma)) - 1), decreasing in sigma.
inline double SigmaFromTv(double tv, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("SigmaFromTv: q must lie in (0, 1]");
  auto forward = [q](double sigma) {
    return SubsampledGaussianTv(SubsampledGaussianMech(q, sigma));
  };
  if (tv <= 0.0) return std::numeric_limits<double>::infinity();
  if (tv >= forward(kSigmaBracketLo)) return kSigmaBracketLo;
  if (tv <= forward(kSigmaBracketHi)) return kSigmaBracketHi;
  return InvertMonotone(forward, tv, kSigmaBracketLo, kSigmaBracketHi);
}

// Maps a TV interval through a strictly decreasing forward map sigma -> TV:
// the upper TV endpoint gives the lower sigma endpoint and vice versa.
inline Interval SigmaIntervalFromTv(Interval tv_interval,
                                    const std::function<double(double)>& forward,
                                    double sigma_lo = kSigmaBracketLo,
                                    double sigma_hi = kSigmaBracketHi) {
  return {InvertMonotone(forward, tv_interval.upper, sigma_lo, sigma_hi),
          InvertMonotone(forward, tv_interval.lower, sigma_lo, sigma_hi)};
}

inline SigmaEstimate EstimateSigmaFromTv(double tv_hat, Interval tv_interval,
                                         double q) {
  SigmaEstimate out{q, tv_hat, tv_interval, 0.0, 0.0, 0.0};
  out.sigma = SigmaFromTv(tv_hat, q);
  out.sigma_lower = SigmaFromTv(tv_interval.upper, q);
  out.sigma_upper = SigmaFromTv(tv_interval.lower, q);
  return out;
}

// --- Histogram audit -------------------------------------------------------------

enum class AuditMethod { kHistogram, kThreshold, kOneShot, kComposedHeuristic };

inline std::string MethodTag(AuditMethod method) {
  switch (method) {
    case AuditMethod::kHistogram:
      return "histogram";
    case AuditMethod::kThreshold:
      return "threshold";
    case AuditMethod::kOneShot:
      return "one-shot";
    case AuditMethod::kComposedHeuristic:
    default:
      return "composed-heuristic";
  }
}

struct AuditConfig {
  BinningMode binning = BinningMode::ScottGaussian();
  std::vector<double> delta_targets = {1e-3, 1e-2, 5e-2};
  double confidence = 0.95;
  std::vector<double> eps_grid = LinearGrid(0.0, 10.0, 1001);
  double tradeoff_delta_floor = 1e-3;
  std::size_t tradeoff_points = 200;
  // When set, also estimate sigma of the mixture family with this q.
  std::optional<double> fit_sigma_q;
};

struct EpsEstimate {
  double delta;
  std::optional<double> point;  // nullopt: target unreachable on the grid
  std::optional<double> lower;
};

struct AuditReport {
  AuditMethod method = AuditMethod::kHistogram;
  std::size_t n = 0;
  double confidence = 0.0;
  std::optional<BinningSpec> binning;
  double tv_hat = 0.0;
  Interval tv_interval{0.0, 1.0};
  TvRadius radius{};
  std::vector<EpsEstimate> eps;
  std::optional<PrivacyProfile> point_profile;
  std::optional<PrivacyProfile> lower_profile;
  std::optional<TradeoffCurve> tradeoff_estimate;
  std::optional<TradeoffCurve> tradeoff_bound;
  bool heuristic = false;
  std::optional<SigmaEstimate> sigma;
};

namespace internal {

inline void ValidateAuditConfig(const AuditConfig& config) {
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw DomainError("audit: confidence must lie in (0, 1)");
  }
  if (config.eps_grid.empty()) throw DomainError("audit: empty epsilon grid");
  for (double d : config.delta_targets) {
    if (!(d >= 0.0 && d < 1.0)) {
      throw DomainError("audit: delta targets must lie in [0, 1)");
    }
  }
}

inline std::optional<TradeoffCurve> TryTradeoff(const PrivacyProfile& profile,
                                                const AuditConfig& config) {
  try {
    return ProfileToTradeoff(profile, config.tradeoff_delta_floor,
                             config.tradeoff_points);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace internal

// Lower profile: delta_hat(eps) - (1 + e^eps) tau, floored at 0.
inline PrivacyProfile LowerProfile(const PrivacyProfile& point,
                                   const TvRadius& p_radius,
                                   const TvRadius& q_radius) {
  std::vector<double> eps(point.eps_grid().begin(), point.eps_grid().end());
  std::vector<double> delta(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    delta[i] =
        HsInterval(point.delta_values()[i], eps[i], p_radius, q_radius).lower;
  }
  return PrivacyProfile::Tabulated(std::move(eps), std::move(delta));
}

// Fills the profile-derived fields of a report from the two histograms.
inline AuditReport ReportFromHistograms(const HistogramEstimate& hist,
                                        const AuditConfig& config,
                                        AuditMethod method) {
  internal::ValidateAuditConfig(config);
  AuditReport report;
  report.method = method;
  report.n = hist.n;
  report.confidence = config.confidence;
  report.binning = hist.spec;
  // The failure probability is shared equally by the two histograms.
  const double failure = 0.5 * (1.0 - config.confidence);
  const TvRadius radius = CanonneRadius(hist.n, hist.spec.k(), failure);
  report.radius = radius;
  report.tv_hat = TvDistance(hist.p_hat, hist.q_hat);
  report.tv_interval = TvInterval(report.tv_hat, radius.tau);

  std::vector<double> grid = config.eps_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> delta(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    delta[i] = EstimateSymmetricDelta(hist, grid[i]);
  }
  const PrivacyProfile point = PrivacyProfile::Tabulated(grid, delta);
  const PrivacyProfile lower = LowerProfile(point, radius, radius);
  for (double target : config.delta_targets) {
    report.eps.push_back({target, point.Epsilon(target), lower.Epsilon(target)});
  }
  report.tradeoff_estimate = internal::TryTradeoff(point, config);
  report.tradeoff_bound = internal::TryTradeoff(lower, config);
  report.point_profile = point;
  report.lower_profile = lower;
  if (config.fit_sigma_q) {
    report.sigma =
        EstimateSigmaFromTv(report.tv_hat, report.tv_interval, *config.fit_sigma_q);
  }
  return report;
}

inline AuditReport HistogramAudit(std::span<const double> samples_p,
                                  std::span<const double> samples_q,
                                  const AuditConfig& config = {}) {
  internal::ValidateAuditConfig(config);
  if (samples_p.empty() || samples_q.empty()) {
    throw DataError("audit: empty sample");
  }
  if (samples_p.size() != samples_q.size()) {
    throw DataError("audit: samples have unequal sizes (" +
                    std::to_string(samples_p.size()) + " and " +
                    std::to_string(samples_q.size()) + ")");
  }
  const BinningSpec spec = AutoSpec(samples_p, samples_q, config.binning);
  return ReportFromHistograms(BuildHistograms(samples_p, samples_q, spec),
                              config, AuditMethod::kHistogram);
}

// --- Threshold baseline -------------------------------------------------------

struct ThresholdEstimate {
  enum class Status { kFinite, kUndefined, kUnbounded };

  Status status = Status::kUndefined;
  double eps = 0.0;  // meaningful only when finite
  double tpr = 0.0;
  double fpr = 0.0;
};

namespace internal {

inline double FractionBelow(std::span<const double> samples, double threshold) {
  std::size_t count = 0;
  for (double s : samples) count += s < threshold ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

inline std::size_t CountBelow(std::span<const double> samples, double threshold) {
  std::size_t count = 0;
  for (double s : samples) count += s < threshold ? 1 : 0;
  return count;
}

// log((numerator) / denominator) with -inf for a non-positive numerator and
// +inf for a zero denominator.
inline double LogRatioOrInf(double numerator, double denominator) {
  if (!(numerator > 0.0)) return -std::numeric_limits<double>::infinity();
  if (!(denominator > 0.0)) return std::numeric_limits<double>::infinity();
  return std::log(numerator) - std::log(denominator);
}

inline ThresholdEstimate ThresholdFromRates(double tpr, double fpr, double tnr,
                                            double fnr, double delta) {
  ThresholdEstimate out;
  out.tpr = tpr;
  out.fpr = fpr;
  const double eps = std::max(LogRatioOrInf(tpr - delta, fpr),
                              LogRatioOrInf(tnr - delta, fnr));
  if (std::isinf(eps)) {
    out.status = eps > 0 ? ThresholdEstimate::Status::kUnbounded
                         : ThresholdEstimate::Status::kUndefined;
    return out;
  }
  out.status = ThresholdEstimate::Status::kFinite;
  out.eps = eps;
  return out;
}

inline void ValidateThresholdInputs(std::span<const double> samples_p,
                                    std::span<const double> samples_q,
                                    double delta) {
  if (samples_p.empty() || samples_q.empty()) {
    throw DataError("threshold: empty sample");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw DomainError("threshold: delta must lie in [0, 1)");
  }
}

}  // namespace internal

// Membership is "score < threshold"; ties go to the negative class.
inline ThresholdEstimate ThresholdEpsilon(std::span<const double> samples_p,
                                          std::span<const double> samples_q,
                                          double threshold, double delta) {
  internal::ValidateThresholdInputs(samples_p, samples_q, delta);
  const double tpr = internal::FractionBelow(samples_p, threshold);
  const double fpr = internal::FractionBelow(samples_q, threshold);
  return internal::ThresholdFromRates(tpr, fpr, 1.0 - fpr, 1.0 - tpr, delta);
}

// Same estimate with each rate replaced by its conservative Clopper-Pearson
// end: true rates lowered, error rates raised. Each of the two samples gets
// half the failure probability.
inline ThresholdEstimate ThresholdEpsilonClopperPearson(
    std::span<const double> samples_p, std::span<const double> samples_q,
    double threshold, double delta, double confidence) {
  internal::ValidateThresholdInputs(samples_p, samples_q, delta);
  const double per_sample = 1.0 - 0.5 * (1.0 - confidence);
  const std::size_t n_p = samples_p.size();
  const std::size_t n_q = samples_q.size();
  const std::size_t below_p = internal::CountBelow(samples_p, threshold);
  const std::size_t below_q = internal::CountBelow(samples_q, threshold);
  const Interval tpr = ClopperPearson(below_p, n_p, per_sample);
  const Interval fpr = ClopperPearson(below_q, n_q, per_sample);
  ThresholdEstimate out = internal::ThresholdFromRates(
      tpr.lower, fpr.upper, 1.0 - fpr.upper, 1.0 - tpr.lower, delta);
  out.tpr = static_cast<double>(below_p) / static_cast<double>(n_p);
  out.fpr = static_cast<double>(below_q) / static_cast<double>(n_q);
  return out;
}

// mu lower bound from Clopper-Pearson upper limits on both error rates.
inline double ThresholdMuLower(std::span<const double> samples_p,
                               std::span<const double> samples_q,
                               double threshold, double confidence) {
  internal::ValidateThresholdInputs(samples_p, samples_q, 0.0);
  const double per_sample = 1.0 - 0.5 * (1.0 - confidence);
  const std::size_t below_p = internal::CountBelow(samples_p, threshold);
  const std::size_t below_q = internal::CountBelow(samples_q, threshold);
  // Type I error: a non-member flagged as member. Type II: a member missed.
  const double alpha_bar =
      ClopperPearson(below_q, samples_q.size(), per_sample).upper;
  const double beta_bar =
      ClopperPearson(samples_p.size() - below_p, samples_p.size(), per_sample)
          .upper;
  return MuLowerFromRates(alpha_bar, beta_bar);
}

// --- Exposure -------------------------------------------------------------------

// log2(n) - log2(rank), rank = number of reference losses strictly below the
// canary's loss, raised to 1 so the value stays finite.
inline std::vector<double> Exposure(std::span<const double> canary_losses,
                                    std::span<const double> reference_losses) {
  if (reference_losses.empty()) throw DataError("exposure: empty reference set");
  std::vector<double> sorted(reference_losses.begin(), reference_losses.end());
  std::sort(sorted.begin(), sorted.end());
  const double log_n = std::log2(static_cast<double>(sorted.size()));
  std::vector<double> out;
  out.reserve(canary_losses.size());
  for (double loss : canary_losses) {
    const auto smaller = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), loss) - sorted.begin());
    const double rank = static_cast<double>(std::max<std::size_t>(1, smaller));
    out.push_back(log_n - std::log2(rank));
  }
  return out;
}

// --- mu-GDP fit -----------------------------------------------------------------

struct GdpFitOptions {
  double sigma_lo = 0.01;
  double sigma_hi = 100.0;
  double derivative_step = 1e-4;
  std::size_t eps_nodes = 2000;
  std::size_t sigma_scan_nodes = 241;
};

struct GdpFit {
  double mu;
  double sigma;
  double eps_at_best;  // where the value-and-slope mismatch is smallest
  double mismatch;
};

namespace internal {

inline double CentralDifference(const std::function<double(double)>& f, double x,
                                double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace internal

// Chooses the Gaussian profile whose value and slope best touch the target
// profile somewhere in [eps_lo, eps_hi]; returns mu = 1 / sigma.
inline GdpFit FitMuGdp(const PrivacyProfile& profile, double eps_lo,
                       double eps_hi, const GdpFitOptions& options = {}) {
  if (!std::isfinite(eps_lo) || !std::isfinite(eps_hi) || !(eps_hi > eps_lo)) {
    throw DomainError("FitMuGdp: need a finite range with eps_lo < eps_hi");
  }
  const double h = options.derivative_step;
  // Keep both difference stencils inside the profile's domain.
  const double lo = std::max(eps_lo, profile.eps_min() + h);
  const double hi = std::min(eps_hi, profile.eps_max() - h);
  if (!(hi > lo)) throw DomainError("FitMuGdp: range misses the profile domain");
  if (!profile.IsNonIncreasing(1e-12)) {
    throw FitError("FitMuGdp: profile is not non-increasing in epsilon");
  }
  auto target = [&profile](double e) { return profile.Delta(e); };
  const std::vector<double> grid = LinearGrid(lo, hi, options.eps_nodes);
  std::vector<double> value(grid.size());
  std::vector<double> slope(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    value[i] = target(grid[i]);
    slope[i] = internal::CentralDifference(target, grid[i], h);
    if (i > 0 && value[i] > value[i - 1] + 1e-12) {
      throw FitError("FitMuGdp: profile increases near eps = " +
                     FormatNumber(grid[i]));
    }
  }
  // Where the profile is exactly zero every Gaussian with a negligible delta
  // matches it, so those nodes say nothing about sigma and are skipped.
  if (!(value.front() > 0.0)) {
    throw FitError("FitMuGdp: profile is zero on the whole fitting range");
  }

  struct Inner {
    double mismatch;
    double eps;
  };
  auto inner = [&](double sigma) -> Inner {
    const GaussianMech mech(sigma, 1.0);
    auto gauss = [&mech](double e) { return GaussianDelta(mech, e); };
    auto distance = [&](double e, double v, double s) {
      return std::hypot(v - gauss(e),
                        s - internal::CentralDifference(gauss, e, h));
    };
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(value[i] > 0.0)) continue;
      const double d = distance(grid[i], value[i], slope[i]);
      if (d < best_value) {
        best_value = d;
        best = i;
      }
    }
    const double left = grid[best == 0 ? 0 : best - 1];
    const double right = grid[std::min(best + 1, grid.size() - 1)];
    const SearchResult refined = GoldenSectionMinimize(
        [&](double e) {
          const double v = target(e);
          if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
          return distance(e, v, internal::CentralDifference(target, e, h));
        },
        left, right, 1e-9);
    if (refined.value < best_value) return {refined.value, refined.x};
    return {best_value, grid[best]};
  };

  // Coarse scan in log(sigma), then golden section around the best node.
  const double log_lo = std::log(options.sigma_lo);
  const double log_hi = std::log(options.sigma_hi);
  const std::vector<double> scan =
      LinearGrid(log_lo, log_hi, options.sigma_scan_nodes);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double d = inner(std::exp(scan[i])).mismatch;
    if (d < best_value) {
      best_value = d;
      best = i;
    }
  }
  const SearchResult refined = GoldenSectionMinimize(
      [&](double t) { return inner(std::exp(t)).mismatch; },
      scan[best == 0 ? 0 : best - 1], scan[std::min(best + 1, scan.size() - 1)],
      1e-9);
  double log_sigma = scan[best];
  if (refined.value <= best_value) log_sigma = refined.x;
  const double sigma = std::exp(log_sigma);
  const Inner at = inner(sigma);
  return {1.0 / sigma, sigma, at.eps, at.mismatch};
}

// --- Sensitivity of the Gaussian profile ------------------------------------

// d/d sigma of the unit-sensitivity Gaussian hockey-stick divergence at
// alpha = e^eps:
//   (-ln a - 1/(2 s^2)) phi(-s ln a + 1/(2s)) - a (-ln a + 1/(2 s^2)) phi(-s ln a - 1/(2s)).
inline double FAlphaSensitivity(double sigma, double alpha) {
  if (!(sigma > 0.0) || !(alpha > 0.0)) {
    throw DomainError("FAlphaSensitivity: sigma and alpha must be positive");
  }
  const double log_a = std::log(alpha);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const double shift = 1.0 / (2.0 * sigma);
  return (-log_a - inv) * NormalPdf(-sigma * log_a + shift) -
         alpha * (-log_a + inv) * NormalPdf(-sigma * log_a - shift);
}

// --- Serialization ----------------------------------------------------------------

inline nlohmann::json OptionalNumber(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

inline nlohmann::json ToJson(const AuditReport& report) {
  nlohmann::json out;
  out["method"] = MethodTag(report.method);
  out["n"] = report.n;
  out["confidence"] = report.confidence;
  out["heuristic"] = report.heuristic;
  if (report.binning) {
    out["binning"] = {{"a", report.binning->a()},
                      {"b", report.binning->b()},
                      {"k", report.binning->k()},
                      {"h", report.binning->h()}};
  } else {
    out["binning"] = nullptr;
  }
  out["tv"] = {{"estimate", report.tv_hat},
               {"lower", report.tv_interval.lower},
               {"upper", report.tv_interval.upper},
               {"radius", report.radius.tau}};
  nlohmann::json eps = nlohmann::json::array();
  for (const EpsEstimate& e : report.eps) {
    eps.push_back({{"delta", e.delta},
                   {"point", OptionalNumber(e.point)},
                   {"lower", OptionalNumber(e.lower)}});
  }
  out["eps"] = eps;
  nlohmann::json curves;
  curves["estimate"] = report.tradeoff_estimate
                           ? nlohmann::json(CurveToCsv(*report.tradeoff_estimate))
                           : nlohmann::json(nullptr);
  curves["bound"] = report.tradeoff_bound
                        ? nlohmann::json(CurveToCsv(*report.tradeoff_bound))
                        : nlohmann::json(nullptr);
  out["curves"] = curves;
  if (report.sigma) {
    const SigmaEstimate& s = *report.sigma;
    out["sigma_estimation"] = {{"q", s.q},
                               {"tv", s.tv_hat},
                               {"sigma", s.sigma},
                               {"sigma_lower", s.sigma_lower},
                               {"sigma_upper", OptionalNumber(s.sigma_upper)}};
  }
  return out;
}

}  // namespace dpaudit

#endif  // DPAUDIT_ESTIMATORS_HPP_
