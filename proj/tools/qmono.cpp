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

// Batch front end: verification campaigns, single measures on state files,
// qubit-channel capacities, and the lattice bounds.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qmono/qmono.hpp"

namespace {

using qmono::Json;

struct GlobalFlags {
  std::uint64_t seed = 0;
  int samples = 1000;
  int qubits = 3;
  double tol = 1e-9;
  int restarts = 20;
  std::string out;
  bool json = false;
  int threads = 1;
};

void print_value(double v) { std::printf("%.17g\n", v); }

void emit(const GlobalFlags& g, const Json& payload, double value) {
  if (g.json) {
    std::cout << payload.dump(2) << '\n';
  } else {
    print_value(value);
  }
  if (!g.out.empty()) qmono::io::write_json(g.out, payload);
}

int cmd_verify(const GlobalFlags& g, const std::string& campaign_name) {
  const auto campaign = qmono::parse_campaign(campaign_name);
  if (!campaign) throw qmono::Error("config: unknown campaign '" + campaign_name + "'");
  qmono::CampaignConfig cfg;
  cfg.campaign = *campaign;
  cfg.qubits = g.qubits;
  cfg.samples = g.samples;
  cfg.seed = g.seed;
  cfg.tolerance = g.tol;
  cfg.restarts = g.restarts;
  cfg.threads = g.threads;
  cfg.out = g.out;
  const auto outcome = qmono::run_campaign(cfg);
  const auto& rep = outcome.report;
  if (g.json || g.out.empty()) {
    std::cout << qmono::report_to_json(rep).dump(2) << '\n';
  } else {
    std::printf("%s: n=%d samples=%d min_residual=%.17g violations=%d\n", rep.campaign.c_str(), rep.n, rep.samples,
                rep.min_residual, rep.violations);
  }
  return rep.violations == 0 ? 0 : 2;
}

qmono::DensityOperator require_two_qubit_state(const qmono::AnyState& s) {
  auto rho = qmono::io::as_density(s);
  if (rho.dim() != 4 || rho.dims().count() != 2) throw qmono::Error("wrong dims: expected a two-qubit state [2, 2]");
  return rho;
}

int cmd_measure(const GlobalFlags& g, const std::string& kind, const std::string& input, int focus) {
  const auto state = qmono::io::read_state_file(input);
  Json payload{{"kind", kind}, {"input", input}};
  double value = 0.0;
  if (kind == "s2") {
    auto rho = qmono::io::as_density(state);
    if (rho.dims().count() > 1) rho = rho.marginal({focus});
    if (rho.dim() != 2) throw qmono::Error("wrong dims: s2 needs a qubit");
    value = qmono::linear_entropy(rho);
  } else if (kind == "concurrence") {
    value = qmono::concurrence_two_qubit(require_two_qubit_state(state));
  } else if (kind == "tangle") {
    if (const auto* psi = std::get_if<qmono::PureState>(&state)) {
      value = qmono::tangle_pure_split(*psi, focus);
    } else {
      value = qmono::tangle_two_qubit(require_two_qubit_state(state));
    }
  } else if (kind == "i2arrow") {
    value = qmono::i2_arrow(require_two_qubit_state(state));
  } else if (kind == "tangle-roof") {
    const auto rho = qmono::io::as_density(state);
    qmono::RoofOptions opts;
    opts.restarts = g.restarts;
    opts.seed = g.seed;
    const auto res = qmono::tangle_roof_upper(rho, opts);
    value = res.value;
    Json members = Json::array();
    for (const auto& m : res.ensemble.members()) {
      members.push_back({{"probability", m.probability}, {"state", qmono::io::state_to_json(m.state)}});
    }
    payload["restarts_used"] = res.restarts_used;
    payload["converged"] = res.converged;
    payload["ensemble"] = std::move(members);
  } else {
    throw qmono::Error("unknown measure kind '" + kind + "'");
  }
  payload["value"] = value;
  emit(g, payload, value);
  return 0;
}

Json vec3(const qmono::Vector3& v) { return Json::array({v(0), v(1), v(2)}); }

int cmd_channel(const GlobalFlags& g, const std::string& kind, const std::string& channel_file,
                const std::string& state_file, int grid, int refine) {
  const auto ch = qmono::io::read_channel_file(channel_file);
  if (kind == "bloch") {
    Json linear = Json::array();
    for (int r = 0; r < 3; ++r) linear.push_back(vec3(ch.linear().row(r).transpose()));
    Json payload{{"kind", kind}, {"L", linear}, {"l", vec3(ch.offset())}};
    if (g.json) {
      std::cout << payload.dump(2) << '\n';
    } else {
      for (int r = 0; r < 3; ++r) {
        std::printf("L %.17g %.17g %.17g\n", ch.linear()(r, 0), ch.linear()(r, 1), ch.linear()(r, 2));
      }
      std::printf("l %.17g %.17g %.17g\n", ch.offset()(0), ch.offset()(1), ch.offset()(2));
    }
    if (!g.out.empty()) qmono::io::write_json(g.out, payload);
    return 0;
  }
  if (state_file.empty()) throw qmono::Error("channel " + kind + " needs --state");
  const auto rho = qmono::io::as_density(qmono::io::read_state_file(state_file));
  if (rho.dim() != 2) throw qmono::Error("wrong dims: channel input must be a single-qubit state");
  if (kind == "chi2") {
    const double v = qmono::chi2_closed(ch, rho);
    emit(g, Json{{"kind", kind}, {"value", v}}, v);
    return 0;
  }
  if (kind == "chi2-brute") {
    const auto res = qmono::chi2_bruteforce(ch, rho, grid, refine);
    Json members = Json::array();
    for (const auto& m : res.best.members()) {
      members.push_back({{"probability", m.probability},
                         {"bloch", vec3(qmono::bloch_vector(m.state.density()))},
                         {"state", qmono::io::state_to_json(m.state)}});
    }
    Json payload{{"kind", kind}, {"value", res.value}, {"ensemble", members}};
    if (g.json) {
      std::cout << payload.dump(2) << '\n';
    } else {
      print_value(res.value);
      for (const auto& m : members) {
        const auto& b = m["bloch"];
        std::printf("p=%.17g bloch=(%.17g, %.17g, %.17g)\n", m["probability"].get<double>(), b[0].get<double>(),
                    b[1].get<double>(), b[2].get<double>());
      }
    }
    if (!g.out.empty()) qmono::io::write_json(g.out, payload);
    return 0;
  }
  throw qmono::Error("unknown channel kind '" + kind + "'");
}

int cmd_bound(const GlobalFlags& g, double d, double m) {
  const double c = qmono::lattice_concurrence_bound(d, m);
  const double gap = qmono::mean_field_gap_bound(d, m);
  Json payload{{"d", d}, {"m", m}, {"concurrence_bound", c}, {"mean_field_gap_bound", gap}};
  if (g.json) {
    std::cout << payload.dump(2) << '\n';
  } else {
    print_value(c);
    print_value(gap);
  }
  if (!g.out.empty()) qmono::io::write_json(g.out, payload);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement monogamy verification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qmono::kVersion);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Base seed; sample i uses seed + i");
  app.add_option("--samples", g.samples, "Number of campaign samples");
  app.add_option("--qubits", g.qubits, "Qubit count for campaigns");
  app.add_option("--tol", g.tol, "Violation tolerance");
  app.add_option("--restarts", g.restarts, "Roof optimizer restarts");
  app.add_option("--out", g.out, "Write the JSON result to this path");
  app.add_flag("--json", g.json, "Print JSON instead of plain values");
  app.add_option("--threads", g.threads, "Worker threads for campaigns");

  std::string campaign;
  auto* verify = app.add_subcommand("verify", "Run a verification campaign")->fallthrough();
  verify->add_option("--campaign", campaign, "ckw | tau-le-i2 | chi2-agreement | koashi-winter | "
                                             "inductive-step | sigma-max | saturation")
      ->required();

  std::string measure_kind, measure_input;
  int focus = 0;
  auto* measure = app.add_subcommand("measure", "Evaluate one measure on a state file")->fallthrough();
  measure->add_option("kind", measure_kind, "tangle | concurrence | i2arrow | s2 | tangle-roof")->required();
  measure->add_option("input", measure_input, "State file")->required();
  measure->add_option("--focus", focus, "Focus subsystem for s2 and pure-state tangle");

  std::string channel_kind, channel_file, state_file;
  int grid = 4096, refine = 2000;
  auto* channel = app.add_subcommand("channel", "Qubit channel quantities")->fallthrough();
  channel->add_option("kind", channel_kind, "chi2 | chi2-brute | bloch")->required();
  channel->add_option("--channel", channel_file, "Channel file")->required();
  channel->add_option("--state", state_file, "Single-qubit state file");
  channel->add_option("--grid", grid, "Sphere directions for chi2-brute");
  channel->add_option("--refine", refine, "Local refinement iterations for chi2-brute");

  double d = 1.0, m = 0.0;
  auto* bound = app.add_subcommand("bound", "Lattice concurrence and mean-field gap bounds")->fallthrough();
  bound->add_option("--d", d, "Coordination number")->required();
  bound->add_option("--m", m, "Magnetization in [-1, 1]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*verify) return cmd_verify(g, campaign);
    if (*measure) return cmd_measure(g, measure_kind, measure_input, focus);
    if (*channel) return cmd_channel(g, channel_kind, channel_file, state_file, grid, refine);
    if (*bound) return cmd_bound(g, d, m);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
