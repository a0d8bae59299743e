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

// dpaudit: command-line front end for empirical privacy auditing.
//
//   dpaudit simulate  --mechanism gaussian --sigma 1 -n 1000 --out-p p.txt --out-q q.txt
//   dpaudit audit     p.txt q.txt --bins 20 --delta 0.01 --json report.json
//   dpaudit tradeoff  p.txt q.txt --out curve.csv
//   dpaudit compose   p.txt q.txt --compositions 10 --out profile.csv
//   dpaudit fit-gdp   --profile profile.csv --eps-range 0.1:7
//   dpaudit canary    --mode one-shot -d 1048576 -n 2000 --sigma 1 --audit
//
// Exit codes: 0 success, 2 usage or configuration, 3 input data, 4 numeric
// grid, 5 fit failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpaudit/dpaudit.hpp"
#include "json.hpp"

namespace {

using dpaudit::DataError;
using dpaudit::DomainError;
using dpaudit::FormatNumber;

constexpr int kExitUsage = 2;
constexpr int kExitUnexpected = 1;

int ExitCodeFor(dpaudit::ErrorKind kind) {
  switch (kind) {
    case dpaudit::ErrorKind::kDomain:
    case dpaudit::ErrorKind::kDimension:
      return 2;
    case dpaudit::ErrorKind::kData:
      return 3;
    case dpaudit::ErrorKind::kGrid:
      return 4;
    case dpaudit::ErrorKind::kFit:
      return 5;
  }
  return kExitUnexpected;
}

std::uint64_t DefaultSeed() {
  if (const char* env = std::getenv("DPAUDIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DomainError("DPAUDIT_SEED is not an unsigned integer: " +
                        std::string(env));
    }
  }
  return 0;
}

// "lo:hi:m" -> m evenly spaced values.
std::vector<double> ParseGrid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  double lo = 0.0;
  double hi = 0.0;
  double count = 0.0;
  if (parts.size() != 3 || !dpaudit::internal::ParseDouble(parts[0], lo) ||
      !dpaudit::internal::ParseDouble(parts[1], hi) ||
      !dpaudit::internal::ParseDouble(parts[2], count) || count < 2 ||
      count != static_cast<double>(static_cast<std::size_t>(count)) || !(hi > lo)) {
    throw DomainError("expected lo:hi:m with lo < hi and integer m >= 2, got '" +
                      text + "'");
  }
  return dpaudit::LinearGrid(lo, hi, static_cast<std::size_t>(count));
}

std::pair<double, double> ParseRange(const std::string& text) {
  const auto colon = text.find(':');
  double lo = 0.0;
  double hi = 0.0;
  if (colon == std::string::npos ||
      !dpaudit::internal::ParseDouble(text.substr(0, colon), lo) ||
      !dpaudit::internal::ParseDouble(text.substr(colon + 1), hi) || !(hi > lo)) {
    throw DomainError("expected lo:hi with lo < hi, got '" + text + "'");
  }
  return {lo, hi};
}

// "mixture:q=0.25" or "gaussian" -> subsampling ratio of the family.
double ParseSigmaFamily(const std::string& text) {
  if (text == "gaussian") return 1.0;
  const std::string prefix = "mixture:q=";
  double q = 0.0;
  if (text.rfind(prefix, 0) != 0 ||
      !dpaudit::internal::ParseDouble(text.substr(prefix.size()), q) ||
      !(q > 0.0 && q <= 1.0)) {
    throw DomainError("--fit-sigma expects 'gaussian' or 'mixture:q=<value>', got '" +
                      text + "'");
  }
  return q;
}

struct MechanismFlags {
  std::string name = "gaussian";
  double sigma = 1.0;
  double sensitivity = 1.0;
  double q = 1.0;
  double lambda = 1.0;

  void Register(CLI::App* app) {
    app->add_option("--mechanism", name, "gaussian | subsampled-gaussian | laplace")
        ->check(CLI::IsMember({"gaussian", "subsampled-gaussian", "laplace"}));
    app->add_option("--sigma", sigma, "Gaussian noise scale");
    app->add_option("--sensitivity", sensitivity, "L2 (or L1 for laplace) sensitivity");
    app->add_option("--q", q, "Subsampling ratio");
    app->add_option("--lambda", lambda, "Laplace noise scale");
  }

  dpaudit::ScorePair Pair() const {
    if (name == "gaussian") {
      return dpaudit::DominatingPair(dpaudit::GaussianMech(sigma, sensitivity));
    }
    if (name == "subsampled-gaussian") {
      return dpaudit::DominatingPair(dpaudit::SubsampledGaussianMech(q, sigma));
    }
    return dpaudit::DominatingPair(dpaudit::LaplaceMech(lambda, sensitivity));
  }
};

struct SamplePair {
  std::vector<double> p;
  std::vector<double> q;
};

SamplePair ReadPair(const std::string& path_p, const std::string& path_q) {
  SamplePair out{dpaudit::ReadScores(path_p), dpaudit::ReadScores(path_q)};
  if (out.p.empty() || out.q.empty()) {
    throw DataError("score files must not be empty");
  }
  if (out.p.size() != out.q.size()) {
    throw DataError("score files have unequal counts: " + path_p + " has " +
                    std::to_string(out.p.size()) + ", " + path_q + " has " +
                    std::to_string(out.q.size()));
  }
  return out;
}

void WriteJson(const std::string& path, const nlohmann::json& doc) {
  dpaudit::WriteText(path, doc.dump(2) + "\n");
}

std::string OptionalText(const std::optional<double>& x) {
  return x ? FormatNumber(*x) : "null";
}

// --- audit -------------------------------------------------------------------

struct AuditFlags {
  std::string path_p;
  std::string path_q;
  std::size_t bins = 0;
  double bin_width = 0.0;
  bool auto_bins = false;
  std::vector<double> deltas;
  double confidence = 0.95;
  std::string eps_grid = "0:10:1001";
  std::string json_path;
  std::string curve_path;
  std::string profile_path;
  std::string fit_sigma;

  void Register(CLI::App* app, bool with_report_outputs) {
    app->add_option("p_scores", path_p, "Scores of the first distribution, one per line")
        ->required();
    app->add_option("q_scores", path_q, "Scores of the second distribution")->required();
    auto* bins_opt = app->add_option("--bins", bins, "Fixed number of bins");
    auto* width_opt = app->add_option("--bin-width", bin_width, "Fixed bin width");
    auto* auto_opt =
        app->add_flag("--auto-bins", auto_bins, "Scott's rule for the bin width (default)");
    bins_opt->excludes(width_opt)->excludes(auto_opt);
    width_opt->excludes(auto_opt);
    app->add_option("--eps-grid", eps_grid, "Epsilon grid lo:hi:m");
    if (!with_report_outputs) return;
    app->add_option("--delta", deltas, "Delta target (repeatable)");
    app->add_option("--confidence", confidence, "Confidence level of the bounds");
    app->add_option("--json", json_path, "Write the JSON report here");
    app->add_option("--curve", curve_path, "Write the estimated trade-off curve CSV");
    app->add_option("--profile", profile_path, "Write the estimated profile CSV");
    app->add_option("--fit-sigma", fit_sigma,
                    "Estimate sigma from the TV distance: gaussian | mixture:q=<q>");
  }

  dpaudit::BinningMode Binning() const {
    if (bins > 0) return dpaudit::BinningMode::FixedCount(bins);
    if (bin_width > 0.0) return dpaudit::BinningMode::FixedWidth(bin_width);
    return dpaudit::BinningMode::ScottGaussian();
  }

  dpaudit::AuditConfig Config() const {
    dpaudit::AuditConfig config;
    config.binning = Binning();
    if (!deltas.empty()) config.delta_targets = deltas;
    config.confidence = confidence;
    config.eps_grid = ParseGrid(eps_grid);
    if (!fit_sigma.empty()) config.fit_sigma_q = ParseSigmaFamily(fit_sigma);
    return config;
  }
};

void PrintReport(const dpaudit::AuditReport& report) {
  for (const auto& e : report.eps) {
    if (!e.point) {
      std::cerr << "warning: delta target " << FormatNumber(e.delta)
                << " is not reached on the epsilon grid\n";
    }
    std::cout << "delta=" << FormatNumber(e.delta) << " eps=" << OptionalText(e.point)
              << " eps_lower=" << OptionalText(e.lower) << "\n";
  }
}

void EmitReport(const dpaudit::AuditReport& report, const AuditFlags& flags) {
  PrintReport(report);
  if (!flags.json_path.empty()) WriteJson(flags.json_path, dpaudit::ToJson(report));
  if (!flags.curve_path.empty() && report.tradeoff_estimate) {
    dpaudit::WriteText(flags.curve_path, dpaudit::CurveToCsv(*report.tradeoff_estimate));
  }
  if (!flags.profile_path.empty() && report.point_profile) {
    dpaudit::WriteText(flags.profile_path, dpaudit::ProfileToCsv(*report.point_profile));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Empirical differential-privacy auditing from score samples"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& value) {
          seed = value;
          seed_given = true;
        },
        "Random seed (default: $DPAUDIT_SEED or 0)");
  };

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw score samples from a reference mechanism");
  MechanismFlags sim_mech;
  sim_mech.Register(simulate);
  long long sim_n = 0;
  std::string sim_out_p;
  std::string sim_out_q;
  simulate->add_option("-n", sim_n, "Samples per side")->required();
  simulate->add_option("--out-p", sim_out_p, "Output file for P scores")->required();
  simulate->add_option("--out-q", sim_out_q, "Output file for Q scores")->required();
  add_seed(simulate);

  // audit
  auto* audit = app.add_subcommand("audit", "Histogram audit of two score files");
  AuditFlags audit_flags;
  audit_flags.Register(audit, true);

  // tradeoff
  auto* tradeoff = app.add_subcommand("tradeoff", "Estimated trade-off curve of two score files");
  AuditFlags tradeoff_flags;
  tradeoff_flags.Register(tradeoff, false);
  double tradeoff_floor = 1e-3;
  std::size_t tradeoff_points = 200;
  std::string tradeoff_out;
  tradeoff->add_option("--delta-floor", tradeoff_floor, "Smallest delta used for the envelope");
  tradeoff->add_option("--points", tradeoff_points, "Number of delta values in the envelope");
  tradeoff->add_option("--out", tradeoff_out, "Output CSV (default: stdout)");

  // compose
  auto* compose = app.add_subcommand("compose", "Composed privacy profile via the PLD accountant");
  std::string compose_p;
  std::string compose_q;
  long long compose_c = 1;
  std::string compose_grid = "40:1048576";
  std::string compose_eps = "0:10:1001";
  std::string compose_out;
  std::string compose_json;
  std::size_t compose_bins = 0;
  MechanismFlags compose_mech;
  bool compose_reference = false;
  compose->add_option("p_scores", compose_p, "Scores of the first distribution");
  compose->add_option("q_scores", compose_q, "Scores of the second distribution");
  compose->add_option("--compositions,-c", compose_c, "Number of compositions")->required();
  compose->add_option("--grid", compose_grid, "PLD grid L:m");
  compose->add_option("--eps-grid", compose_eps, "Epsilon grid lo:hi:m");
  compose->add_option("--bins", compose_bins, "Fixed number of bins (default: Scott)");
  compose->add_option("--out", compose_out, "Output profile CSV (default: stdout)");
  compose->add_option("--json", compose_json, "Write a JSON summary here");
  compose->add_flag("--reference", compose_reference,
                    "Compose the reference subsampled-Gaussian pair instead of samples");
  compose_mech.Register(compose);

  // fit-gdp
  auto* fit = app.add_subcommand("fit-gdp", "Fit a mu-GDP parameter to a privacy profile");
  std::string fit_profile;
  std::string fit_p;
  std::string fit_q;
  std::string fit_range = "0.1:7";
  std::string fit_json;
  bool fit_reference = false;
  std::size_t fit_bins = 0;
  MechanismFlags fit_mech;
  fit->add_option("--profile", fit_profile, "Profile CSV with header epsilon,delta");
  fit->add_option("--p-scores", fit_p, "Scores of the first distribution");
  fit->add_option("--q-scores", fit_q, "Scores of the second distribution");
  fit->add_option("--bins", fit_bins, "Fixed number of bins for samples (default: Scott)");
  fit->add_option("--eps-range", fit_range, "Epsilon range lo:hi of the fit");
  fit->add_option("--json", fit_json, "Write a JSON summary here");
  fit->add_flag("--reference", fit_reference, "Fit the reference profile of --mechanism");
  fit_mech.Register(fit);

  // canary
  auto* canary = app.add_subcommand("canary", "Synthetic canary auditing simulators");
  std::string canary_mode = "one-shot";
  long long canary_d = 1;
  long long canary_n = 1;
  double canary_sigma = 1.0;
  double canary_x_norm = 0.0;
  long long canary_steps = 1000;
  double canary_rate = 1.0;
  double canary_sample_rate = 0.01;
  double canary_clip = 1.0;
  long long canary_dataset = 0;
  double canary_nuisance = 0.0;
  std::string canary_engine = "projected";
  std::string canary_out_p;
  std::string canary_out_q;
  bool canary_audit = false;
  AuditFlags canary_flags;
  canary->add_option("--mode", canary_mode, "one-shot | white-box")
      ->check(CLI::IsMember({"one-shot", "white-box"}));
  canary->add_option("-d", canary_d, "Dimension");
  canary->add_option("-n", canary_n, "Canaries per side (one-shot)");
  canary->add_option("--sigma", canary_sigma, "Noise scale");
  canary->add_option("--x-norm", canary_x_norm, "Norm of the base sum X (one-shot)");
  canary->add_option("--steps", canary_steps, "Iterations T (white-box)");
  canary->add_option("--canary-rate", canary_rate, "Canary inclusion probability (white-box)");
  canary->add_option("--sample-rate", canary_sample_rate, "Data sampling rate (white-box)");
  canary->add_option("--clip", canary_clip, "Clipping norm C (white-box)");
  canary->add_option("--dataset-size", canary_dataset, "Nuisance dataset size; 0 = off");
  canary->add_option("--nuisance-norm", canary_nuisance,
                     "Nuisance gradient norm as a fraction of C");
  canary->add_option("--engine", canary_engine, "projected | explicit")
      ->check(CLI::IsMember({"projected", "explicit"}));
  canary->add_option("--out-p", canary_out_p, "Write the P scores here");
  canary->add_option("--out-q", canary_out_q, "Write the Q scores here");
  canary->add_flag("--audit", canary_audit, "Run the histogram audit on the scores");
  canary->add_option("--bins", canary_flags.bins, "Fixed number of bins for --audit");
  canary->add_option("--delta", canary_flags.deltas, "Delta target for --audit (repeatable)");
  canary->add_option("--confidence", canary_flags.confidence, "Confidence for --audit");
  canary->add_option("--eps-grid", canary_flags.eps_grid, "Epsilon grid for --audit");
  canary->add_option("--json", canary_flags.json_path, "JSON report for --audit");
  add_seed(canary);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!seed_given) seed = DefaultSeed();

    if (*simulate) {
      if (sim_n < 1) throw DomainError("simulate: -n must be >= 1");
      const dpaudit::ScorePair pair = sim_mech.Pair();
      const auto n = static_cast<std::size_t>(sim_n);
      dpaudit::WriteScores(sim_out_p,
                           dpaudit::Sample(pair.p, n, dpaudit::DeriveSeed(seed, 1)));
      dpaudit::WriteScores(sim_out_q,
                           dpaudit::Sample(pair.q, n, dpaudit::DeriveSeed(seed, 2)));
      return 0;
    }

    if (*audit) {
      const SamplePair samples = ReadPair(audit_flags.path_p, audit_flags.path_q);
      EmitReport(dpaudit::HistogramAudit(samples.p, samples.q, audit_flags.Config()),
                 audit_flags);
      return 0;
    }

    if (*tradeoff) {
      const SamplePair samples = ReadPair(tradeoff_flags.path_p, tradeoff_flags.path_q);
      dpaudit::AuditConfig config = tradeoff_flags.Config();
      config.delta_targets.clear();
      config.tradeoff_delta_floor = tradeoff_floor;
      config.tradeoff_points = tradeoff_points;
      const dpaudit::AuditReport report =
          dpaudit::HistogramAudit(samples.p, samples.q, config);
      if (!report.tradeoff_estimate) {
        throw DomainError("tradeoff: no delta in the envelope is reachable");
      }
      const std::string csv = dpaudit::CurveToCsv(*report.tradeoff_estimate);
      if (tradeoff_out.empty()) {
        std::cout << csv;
      } else {
        dpaudit::WriteText(tradeoff_out, csv);
      }
      return 0;
    }

    if (*compose) {
      if (compose_c < 1) throw DomainError("compose: --compositions must be >= 1");
      const auto c = static_cast<std::size_t>(compose_c);
      const std::vector<double> eps = ParseGrid(compose_eps);
      const auto [half_width, nodes] = ParseRange(compose_grid);
      dpaudit::PldGridOptions grid;
      grid.half_width = half_width;
      grid.nodes = static_cast<std::size_t>(nodes);
      std::optional<dpaudit::PrivacyProfile> profile;
      std::string source;
      if (compose_reference) {
        dpaudit::MixtureProfileOptions options;
        options.grid = grid;
        profile = dpaudit::SubsampledGaussianProfile(
            dpaudit::SubsampledGaussianMech(compose_mech.q, compose_mech.sigma), eps,
            c, options);
        source = "reference";
      } else {
        if (compose_p.empty() || compose_q.empty()) {
          throw DomainError("compose: give two score files or --reference");
        }
        const SamplePair samples = ReadPair(compose_p, compose_q);
        const dpaudit::BinningSpec spec = dpaudit::AutoSpec(
            samples.p, samples.q,
            compose_bins > 0 ? dpaudit::BinningMode::FixedCount(compose_bins)
                             : dpaudit::BinningMode::ScottGaussian());
        const dpaudit::HistogramEstimate hist =
            dpaudit::BuildHistograms(samples.p, samples.q, spec);
        profile = dpaudit::ComposeProfile(hist.p_hat, hist.q_hat, c, eps, grid);
        source = "histogram";
      }
      const std::string csv = dpaudit::ProfileToCsv(*profile);
      if (compose_out.empty()) {
        std::cout << csv;
      } else {
        dpaudit::WriteText(compose_out, csv);
      }
      if (!compose_json.empty()) {
        nlohmann::json doc;
        doc["method"] = dpaudit::MethodTag(dpaudit::AuditMethod::kComposedHeuristic);
        doc["heuristic"] = true;
        doc["source"] = source;
        doc["compositions"] = c;
        doc["grid"] = {{"L", grid.half_width}, {"m", grid.nodes}, {"step", grid.step()}};
        doc["profile"] = csv;
        WriteJson(compose_json, doc);
      }
      return 0;
    }

    if (*fit) {
      const auto [lo, hi] = ParseRange(fit_range);
      std::optional<dpaudit::PrivacyProfile> profile;
      if (!fit_profile.empty()) {
        std::ifstream in(fit_profile);
        if (!in) throw DataError("cannot open " + fit_profile);
        if (in.peek() == std::ifstream::traits_type::eof()) {
          throw DomainError("fit-gdp: profile file " + fit_profile + " is empty");
        }
        profile = dpaudit::ProfileFromCsv(in, fit_profile);
      } else if (fit_reference) {
        const std::vector<double> grid = dpaudit::LinearGrid(0.0, hi + 1.0, 10001);
        if (fit_mech.name == "gaussian") {
          profile = dpaudit::GaussianProfile(
                        dpaudit::GaussianMech(fit_mech.sigma, fit_mech.sensitivity))
                        .Tabulate(grid);
        } else if (fit_mech.name == "subsampled-gaussian") {
          profile = dpaudit::SubsampledGaussianProfile(
              dpaudit::SubsampledGaussianMech(fit_mech.q, fit_mech.sigma), grid);
        } else {
          throw DomainError("fit-gdp: --reference supports gaussian and subsampled-gaussian");
        }
      } else if (!fit_p.empty() && !fit_q.empty()) {
        const SamplePair samples = ReadPair(fit_p, fit_q);
        dpaudit::AuditConfig config;
        config.binning = fit_bins > 0 ? dpaudit::BinningMode::FixedCount(fit_bins)
                                      : dpaudit::BinningMode::ScottGaussian();
        config.eps_grid = dpaudit::LinearGrid(0.0, hi + 1.0, 2001);
        profile = *dpaudit::HistogramAudit(samples.p, samples.q, config).point_profile;
      } else {
        throw DomainError("fit-gdp: give --profile, --p-scores and --q-scores, or --reference");
      }
      const dpaudit::GdpFit result = dpaudit::FitMuGdp(*profile, lo, hi);
      std::cout << "mu=" << FormatNumber(result.mu) << "\n";
      if (!fit_json.empty()) {
        WriteJson(fit_json, {{"mu", result.mu},
                             {"sigma", result.sigma},
                             {"eps_at_best", result.eps_at_best},
                             {"mismatch", result.mismatch},
                             {"eps_range", {lo, hi}}});
      }
      return 0;
    }

    if (*canary) {
      const dpaudit::CanaryEngine engine = canary_engine == "explicit"
                                               ? dpaudit::CanaryEngine::kExplicit
                                               : dpaudit::CanaryEngine::kProjected;
      if (canary_d < 1) throw DomainError("canary: -d must be >= 1");
      std::vector<double> p;
      std::vector<double> q;
      if (canary_mode == "one-shot") {
        if (canary_n < 1) throw DomainError("canary: -n must be >= 1");
        dpaudit::OneShotConfig cfg;
        cfg.d = static_cast<std::size_t>(canary_d);
        cfg.n = static_cast<std::size_t>(canary_n);
        cfg.sigma = canary_sigma;
        cfg.x_norm = canary_x_norm;
        cfg.seed = seed;
        dpaudit::ScorePairSamples scores = dpaudit::OneShotScores(cfg, engine);
        p = std::move(scores.p);
        q = std::move(scores.q);
      } else {
        if (canary_steps < 1) throw DomainError("canary: --steps must be >= 1");
        if (canary_dataset < 0) throw DomainError("canary: --dataset-size must be >= 0");
        dpaudit::WhiteBoxConfig cfg;
        cfg.steps = static_cast<std::size_t>(canary_steps);
        cfg.canary_rate = canary_rate;
        cfg.sample_rate = canary_sample_rate;
        cfg.sigma = canary_sigma;
        cfg.clip = canary_clip;
        cfg.d = static_cast<std::size_t>(canary_d);
        cfg.seed = seed;
        cfg.dataset_size = static_cast<std::size_t>(canary_dataset);
        cfg.nuisance_norm = canary_nuisance;
        cfg.engine = engine;
        dpaudit::WhiteBoxScores scores = dpaudit::WhiteBoxStream(cfg);
        p = std::move(scores.with_canary);
        q = std::move(scores.without_canary);
      }
      if (!canary_out_p.empty()) dpaudit::WriteScores(canary_out_p, p);
      if (!canary_out_q.empty()) dpaudit::WriteScores(canary_out_q, q);
      if (canary_audit) {
        dpaudit::AuditReport report =
            dpaudit::HistogramAudit(p, q, canary_flags.Config());
        if (canary_mode == "one-shot") report.method = dpaudit::AuditMethod::kOneShot;
        EmitReport(report, canary_flags);
      }
      return 0;
    }
  } catch (const dpaudit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUsage;
}
