// Copyright 2026 The qmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qmono/channels.hpp"
#include "qmono/io.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/version.hpp"

namespace qmono {

enum class Campaign { kCkw, kTauLeI2, kChi2Agreement, kKoashiWinter, kInductiveStep, kSigmaMax, kSaturation };

inline constexpr std::string_view campaign_name(Campaign c) {
  switch (c) {
    case Campaign::kCkw: return "ckw";
    case Campaign::kTauLeI2: return "tau-le-i2";
    case Campaign::kChi2Agreement: return "chi2-agreement";
    case Campaign::kKoashiWinter: return "koashi-winter";
    case Campaign::kInductiveStep: return "inductive-step";
    case Campaign::kSigmaMax: return "sigma-max";
    case Campaign::kSaturation: return "saturation";
  }
  return "unknown";
}

inline std::optional<Campaign> parse_campaign(std::string_view name) {
  for (auto c : {Campaign::kCkw, Campaign::kTauLeI2, Campaign::kChi2Agreement, Campaign::kKoashiWinter,
                 Campaign::kInductiveStep, Campaign::kSigmaMax, Campaign::kSaturation}) {
    if (campaign_name(c) == name) return c;
  }
  return std::nullopt;
}

struct CampaignConfig {
  Campaign campaign = Campaign::kCkw;
  int qubits = 3;
  int samples = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int restarts = 20;
  int threads = 1;
  /// Report path; witness files are written next to it. Empty disables both.
  std::filesystem::path out;

  /// Throws Error describing the first invalid field.
  void validate() const {
    if (samples < 1) throw Error("config: samples must be >= 1");
    if (!(tolerance > 0.0)) throw Error("config: tolerance must be > 0");
    if (restarts < 1) throw Error("config: restarts must be >= 1");
    if (threads < 1) throw Error("config: threads must be >= 1");
    switch (campaign) {
      case Campaign::kCkw:
        if (qubits < 2 || qubits > 10) throw Error("config: ckw needs 2..10 qubits");
        break;
      case Campaign::kKoashiWinter:
      case Campaign::kInductiveStep:
        if (qubits < 3 || qubits > 10) throw Error("config: this campaign needs 3..10 qubits");
        break;
      case Campaign::kSaturation:
        if (qubits < 2 || qubits + 1 > kMaxNamedQubits) throw Error("config: saturation needs 2..11 qubits");
        break;
      default:
        break;
    }
  }
};

/// Aggregate of a verification campaign.
struct MonogamyReport {
  std::string campaign;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double min_residual = 0.0;
  int violations = 0;
  std::vector<std::string> witnesses;
  double wall_time_s = 0.0;
  int restarts = 0;
};

struct CampaignOutcome {
  MonogamyReport report;
  std::vector<ResidualSample> samples;
};

inline Json report_to_json(const MonogamyReport& r) {
  return Json{{"campaign", r.campaign},
              {"n", r.n},
              {"samples", r.samples},
              {"seed", r.seed},
              {"tolerance", r.tolerance},
              {"min_residual", r.min_residual},
              {"violations", r.violations},
              {"witnesses", r.witnesses},
              {"wall_time_s", r.wall_time_s},
              {"version", kVersion},
              {"config", {{"restarts", r.restarts}}}};
}

namespace detail {

struct SampleOutcome {
  ResidualSample sample;
  std::optional<Json> witness;  // state payload for a potential witness file
};

inline RoofOptions roof_options_for(const CampaignConfig& cfg, std::uint64_t sample_seed) {
  RoofOptions o;
  o.restarts = cfg.restarts;
  o.seed = mix_seed(sample_seed, 7);
  return o;
}

inline SampleOutcome run_sample(const CampaignConfig& cfg, int index) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(index);
  SampleOutcome out;
  switch (cfg.campaign) {
    case Campaign::kCkw: {
      const auto psi = random_pure(qubits(cfg.qubits), seed);
      int focus = 0;
      out.sample.residual = std::numeric_limits<double>::infinity();
      for (int f = 0; f < cfg.qubits; ++f) {
        const auto s = ckw_residual(psi, f);
        if (s.residual < out.sample.residual) {
          out.sample = s;
          focus = f;
        }
      }
      out.witness = io::state_to_json(psi);
      (*out.witness)["focus"] = focus;
      break;
    }
    case Campaign::kTauLeI2: {
      const auto rho = random_mixed(Dims{2, 2}, 1 + index % 4, seed);
      out.sample = tau_le_i2(rho);
      out.witness = io::state_to_json(rho);
      break;
    }
    case Campaign::kChi2Agreement: {
      const auto ch = random_kraus_channel(1 + index % 4, mix_seed(seed, 0));
      const auto rho = random_mixed(2, 2, mix_seed(seed, 1));
      out.sample = make_sample(chi2_closed(ch, rho), chi2_bruteforce(ch, rho).value);
      out.witness = io::state_to_json(rho);
      (*out.witness)["channel"] = io::channel_to_json(ch);
      break;
    }
    case Campaign::kKoashiWinter: {
      const auto psi = random_pure(Dims{2, 2, 1 << (cfg.qubits - 2)}, seed);
      const auto terms = koashi_winter_terms(psi, roof_options_for(cfg, seed));
      out.sample = make_sample(terms.tau_ac_upper, terms.identity_value());
      out.witness = io::state_to_json(psi);
      break;
    }
    case Campaign::kInductiveStep: {
      const auto psi = random_pure(Dims{2, 2, 1 << (cfg.qubits - 2)}, seed);
      out.sample = inductive_step_check(psi, roof_options_for(cfg, seed));
      out.witness = io::state_to_json(psi);
      break;
    }
    case Campaign::kSigmaMax: {
      const auto rho = random_mixed(Dims{2, 2}, 4, seed);
      out.sample = sigma_max_vs_concurrence(rho);
      out.witness = io::state_to_json(rho);
      break;
    }
    case Campaign::kSaturation: {
      // Checks 0..n-1: W state at every focus; check n: the maximal-focus state.
      const auto psi = index < cfg.qubits ? w_state(cfg.qubits) : saturating_state(cfg.qubits);
      const int focus = index < cfg.qubits ? index : 0;
      const auto s = ckw_residual(psi, focus);
      out.sample = s;
      // Saturation is two-sided: any deviation from equality counts.
      out.sample.residual = -std::abs(s.residual);
      out.witness = io::state_to_json(psi);
      (*out.witness)["focus"] = focus;
      break;
    }
  }
  out.sample.seed = seed;
  return out;
}

}  // namespace detail

/// Number of samples a campaign actually evaluates.
inline int campaign_sample_count(const CampaignConfig& cfg) {
  return cfg.campaign == Campaign::kSaturation ? cfg.qubits + 1 : cfg.samples;
}

inline std::filesystem::path witness_path(const std::filesystem::path& report, int index) {
  auto stem = report.filename().replace_extension("").string();
  return report.parent_path() / (stem + ".witness." + std::to_string(index) + ".json");
}

/// Runs every sample (optionally on several threads), folds the results in
/// sample order, and writes witness files plus the report when `cfg.out` is
/// set. Sample i uses seed cfg.seed + i, so the report does not depend on the
/// thread count.
inline CampaignOutcome run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int count = campaign_sample_count(cfg);
  std::vector<detail::SampleOutcome> results(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.threads));
  auto worker = [&](int slot) {
    try {
      for (int i = next++; i < count; i = next++) results[static_cast<std::size_t>(i)] = detail::run_sample(cfg, i);
    } catch (...) {
      errors[static_cast<std::size_t>(slot)] = std::current_exception();
      next = count;
    }
  };
  if (cfg.threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker, t);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CampaignOutcome outcome;
  auto& rep = outcome.report;
  rep.campaign = std::string(campaign_name(cfg.campaign));
  rep.n = cfg.qubits;
  rep.samples = count;
  rep.seed = cfg.seed;
  rep.tolerance = cfg.tolerance;
  rep.restarts = cfg.restarts;
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    auto& r = results[static_cast<std::size_t>(i)];
    rep.min_residual = std::min(rep.min_residual, r.sample.residual);
    if (r.sample.residual < -cfg.tolerance) {
      ++rep.violations;
      if (!cfg.out.empty() && r.witness) {
        const auto path = witness_path(cfg.out, i);
        Json w = *r.witness;
        w["campaign"] = rep.campaign;
        w["sample"] = i;
        w["seed"] = r.sample.seed;
        w["restarts"] = cfg.restarts;
        w["residual"] = r.sample.residual;
        io::write_json(path, w);
        r.sample.witness = path.string();
        rep.witnesses.push_back(path.string());
      }
    }
    outcome.samples.push_back(std::move(r.sample));
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.out.empty()) io::write_json(cfg.out, report_to_json(rep));
  return outcome;
}

/// Recomputes the residual stored in a witness file from its state payload.
inline double recompute_witness(const Json& w) {
  const auto kind = parse_campaign(w.at("campaign").get<std::string>());
  if (!kind) throw Error("witness: unknown campaign");
  const auto state = io::state_from_json(w);
  CampaignConfig cfg;
  cfg.restarts = w.value("restarts", 20);
  const auto seed = w.at("seed").get<std::uint64_t>();
  switch (*kind) {
    case Campaign::kCkw:
      return ckw_residual(std::get<PureState>(state), w.at("focus").get<int>()).residual;
    case Campaign::kSaturation:
      return -std::abs(ckw_residual(std::get<PureState>(state), w.at("focus").get<int>()).residual);
    case Campaign::kTauLeI2:
      return tau_le_i2(io::as_density(state)).residual;
    case Campaign::kSigmaMax:
      return sigma_max_vs_concurrence(io::as_density(state)).residual;
    case Campaign::kChi2Agreement: {
      const auto ch = io::channel_from_json(w.at("channel"));
      const auto rho = io::as_density(state);
      return chi2_closed(ch, rho) - chi2_bruteforce(ch, rho).value;
    }
    case Campaign::kKoashiWinter: {
      const auto terms = koashi_winter_terms(std::get<PureState>(state), detail::roof_options_for(cfg, seed));
      return terms.tau_ac_upper - terms.identity_value();
    }
    case Campaign::kInductiveStep:
      return inductive_step_check(std::get<PureState>(state), detail::roof_options_for(cfg, seed)).residual;
  }
  throw Error("witness: unhandled campaign");
}

}  // namespace qmono
