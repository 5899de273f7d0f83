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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "qmono/qmono.hpp"
#include "test_support.hpp"

namespace {

using namespace qmono;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MonogamyReport campaign(Campaign c, int qubits, int samples, std::uint64_t seed, int restarts = 20) {
  CampaignConfig cfg;
  cfg.campaign = c;
  cfg.qubits = qubits;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.restarts = restarts;
  return run_campaign(cfg).report;
}

Verdict ckw() {
  constexpr double kTol = 1e-9;
  double worst = 1.0;
  int violations = 0;
  for (int n = 3; n <= 6; ++n) {
    const auto r = campaign(Campaign::kCkw, n, 10000, 1000u * static_cast<std::uint64_t>(n));
    worst = std::min(worst, r.min_residual);
    violations += r.violations;
  }
  return {violations == 0 && worst >= -kTol, fmt("n=3..6 x 1e4, all foci, min residual %.3e", worst)};
}

Verdict tau_le_i2_lemma() {
  const auto r = campaign(Campaign::kTauLeI2, 2, 10000, 2000);
  return {r.violations == 0 && r.min_residual >= -1e-9, fmt("1e4 states ranks 1-4, min I2 - tau %.3e", r.min_residual)};
}

Verdict chi2() {
  double max_gap = 0.0, max_excess = -1.0;
  for (int i = 0; i < 100; ++i) {
    const auto seed = 3000u + static_cast<std::uint64_t>(i);
    const auto ch = random_kraus_channel(1 + i % 4, mix_seed(seed, 0));
    const auto rho = random_mixed(2, 2, mix_seed(seed, 1));
    const double closed = chi2_closed(ch, rho);
    const double brute = chi2_bruteforce(ch, rho).value;
    max_gap = std::max(max_gap, std::abs(closed - brute));
    max_excess = std::max(max_excess, brute - closed);
  }
  return {max_gap <= 1e-6 && max_excess <= 1e-9,
          fmt("100 channels, max |closed - brute| %.3e, max brute - closed %.3e", max_gap, max_excess)};
}

Verdict duality() {
  double worst = 0.0, oracle_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto rho = random_mixed(Dims{2, 2}, 1 + i % 4, 4000u + static_cast<std::uint64_t>(i));
    worst = std::max(worst, duality_residual(dual_channel_of_state(rho), rho));
    if (i < 200) oracle_gap = std::max(oracle_gap, std::abs(i2_arrow(rho) - i2_arrow_povm_oracle(rho)));
  }
  return {worst <= 1e-8 && oracle_gap <= 1e-5,
          fmt("max reconstruction error %.3e (1e3), max |I2 - POVM oracle| %.3e (200)", worst, oracle_gap)};
}

Verdict koashi_winter() {
  CampaignConfig cfg;
  cfg.campaign = Campaign::kKoashiWinter;
  cfg.qubits = 4;
  cfg.samples = 200;
  cfg.seed = 5000;
  cfg.restarts = 20;
  const auto out = run_campaign(cfg);
  double lo = 1.0, hi = -1.0;
  for (const auto& s : out.samples) {
    lo = std::min(lo, s.residual);
    hi = std::max(hi, s.residual);
  }
  return {lo >= -1e-9 && hi <= 1e-4, fmt("200 states 2x2x4, roof - identity in [%.3e, %.3e]", lo, hi)};
}

Verdict saturation() {
  // The eigenvalue oracle takes square roots of near-zero eigenvalues, so it
  // resolves pair tangles only to about sqrt(machine epsilon).
  constexpr double kOracleTol = 1e-7;
  double w_residual = 0.0, w_pair = 0.0, sat_focus = 0.0, sat_residual = 0.0, sat_pair = 0.0, oracle = 0.0;
  for (int n = 3; n <= 10; ++n) {
    const auto w = w_state(n);
    for (int f = 0; f < n; ++f) w_residual = std::max(w_residual, std::abs(ckw_residual(w, f).residual));
    for (int j = 1; j < n; ++j) {
      const auto pair = w.marginal({0, j});
      const double expected = 4.0 / (n * n);
      w_pair = std::max(w_pair, std::abs(tangle_two_qubit(pair) - expected));
      oracle = std::max(oracle, std::abs(std::pow(testing::concurrence_eigen_oracle(pair.matrix()), 2) - expected));
    }
    const auto s = saturating_state(n);
    sat_focus = std::max(sat_focus, std::abs(tangle_pure_split(s, 0) - 1.0));
    sat_residual = std::max(sat_residual, std::abs(ckw_residual(s, 0).residual));
    for (int j = 1; j <= n; ++j) {
      const auto pair = s.marginal({0, j});
      sat_pair = std::max(sat_pair, std::abs(tangle_two_qubit(pair) - 1.0 / n));
      oracle = std::max(oracle, std::abs(std::pow(testing::concurrence_eigen_oracle(pair.matrix()), 2) - 1.0 / n));
    }
  }
  const bool pass = w_residual <= 1e-9 && w_pair <= 1e-12 && sat_focus <= 1e-12 && sat_residual <= 1e-9 &&
                    sat_pair <= 1e-12 && oracle <= kOracleTol;
  return {pass, fmt("n=3..10, W |residual| %.3e, W pair-tangle error %.3e, ", w_residual, w_pair) +
                    fmt("focus |tau - 1| %.3e, |residual| %.3e, pair error %.3e, ", sat_focus, sat_residual, sat_pair) +
                    fmt("oracle error %.3e", oracle)};
}

Verdict filtering() {
  double l_err = 0.0, ratio_err = 0.0;
  int ratios = 0;
  for (int i = 0; i < 500; ++i) {
    const auto seed = 7000u + static_cast<std::uint64_t>(i);
    const auto rho = random_mixed(Dims{2, 2}, 1 + i % 4, seed);
    const auto filtered = local_filter(rho, testing::random_filter(mix_seed(seed, 3))).state;
    const auto before = dual_channel_of_state(rho).channel;
    const auto after = dual_channel_of_state(filtered).channel;
    // The dual channel is fixed only up to a rotation on its input, so L is
    // compared through L L^T together with l.
    const Matrix3 g0 = before.linear() * before.linear().transpose();
    const Matrix3 g1 = after.linear() * after.linear().transpose();
    l_err = std::max({l_err, (g0 - g1).cwiseAbs().maxCoeff(), (before.offset() - after.offset()).cwiseAbs().maxCoeff()});
    const double tau = tangle_two_qubit(rho);
    if (tau > 1e-6) {
      ++ratios;
      const double r_tau = tangle_two_qubit(filtered) / tau;
      const double r_i2 = i2_arrow(filtered) / i2_arrow(rho);
      ratio_err = std::max(ratio_err, std::abs(r_tau - r_i2));
    }
  }
  return {l_err <= 1e-8 && ratio_err <= 1e-8,
          fmt("500 filters, max change in (L L^T, l) %.3e, max ratio gap %.3e over %g entangled", l_err, ratio_err,
              ratios)};
}

Verdict sigma_max() {
  const auto r = campaign(Campaign::kSigmaMax, 2, 1000, 8000);
  return {r.violations == 0 && r.min_residual >= -1e-9, fmt("1e3 full-rank states, min s1(L) - C %.3e", r.min_residual)};
}

Verdict roof() {
  double below = 0.0, above = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto seed = 9000u + static_cast<std::uint64_t>(i);
    const auto rho = random_mixed(Dims{2, 2}, 2 + i % 3, seed);
    RoofOptions opts;
    opts.restarts = 20;
    opts.seed = mix_seed(seed, 7);
    const double gap = tangle_roof_upper(rho, opts).value - tangle_two_qubit(rho);
    below = std::min(below, gap);
    above = std::max(above, gap);
  }
  return {below >= -1e-9 && above <= 1e-4, fmt("200 states, roof - Wootters in [%.3e, %.3e]", below, above)};
}

Verdict lattice() {
  struct Row {
    double d, m, bound, gap;
  };
  const Row table[] = {{1, 0, 1.0, 0.5},      {4, 0, 0.5, 0.25},         {4, 0.5, 0.375, 0.1875},
                       {16, 0, 0.25, 0.125},  {9, 0, 1.0 / 3, 1.0 / 6},  {1, 1, 0.0, 0.0},
                       {4, -0.5, 0.375, 0.1875}, {64, 0.75, 0.0546875, 0.02734375}};
  bool pass = true;
  for (const auto& r : table) {
    const double b = lattice_concurrence_bound(r.d, r.m), g = mean_field_gap_bound(r.d, r.m);
    pass = pass && b == r.bound && g == r.gap && b == 2.0 * g;
  }
  return {pass, fmt("%g table rows exact, bound = 2 x gap", static_cast<double>(std::size(table)))};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"ckw-campaign", ckw},          {"tau-le-i2", tau_le_i2_lemma},  {"chi2-closed-form", chi2},
      {"duality", duality},           {"koashi-winter", koashi_winter}, {"saturation", saturation},
      {"filtering", filtering},       {"sigma-max", sigma_max},        {"roof-oracle", roof},
      {"lattice-bounds", lattice}};
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-16s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
