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

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "qmono/channels.hpp"
#include "qmono/measures.hpp"
#include "qmono/roof.hpp"
#include "qmono/states.hpp"

namespace qmono {

/// Two sides of an inequality lhs >= rhs.
struct ResidualSample {
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// Set when lhs is itself only an upper bound, so residual >= 0 does not
  /// certify the inequality.
  bool advisory = false;
  std::string witness;
};

inline ResidualSample make_sample(double lhs, double rhs, std::uint64_t seed = 0) {
  return {seed, lhs, rhs, lhs - rhs, false, {}};
}

inline void require_all_qubits(const PureState& psi, const char* what) {
  if (!psi.dims().all_qubits()) throw Error(std::string(what) + ": every factor must be a qubit");
  const auto n = static_cast<int>(psi.dims().count());
  if (n < 2 || n > kMaxNamedQubits) throw Error(std::string(what) + ": qubit count out of range");
}

/// S2(rho_focus) against the sum of the focus's pairwise Wootters tangles.
inline ResidualSample ckw_residual(const PureState& psi, int focus) {
  require_all_qubits(psi, "ckw_residual");
  const auto n = static_cast<int>(psi.dims().count());
  if (focus < 0 || focus >= n) throw Error("ckw_residual: focus index out of range");
  const double lhs = tangle_pure_split(psi, focus);
  double rhs = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == focus) continue;
    rhs += tangle_two_qubit(psi.marginal({std::min(focus, j), std::max(focus, j)}));
  }
  return make_sample(lhs, rhs);
}

/// Smallest residual over every choice of focus.
inline ResidualSample ckw_residual_all_foci(const PureState& psi) {
  ResidualSample worst;
  worst.residual = std::numeric_limits<double>::infinity();
  for (int f = 0; f < static_cast<int>(psi.dims().count()); ++f) {
    auto s = ckw_residual(psi, f);
    if (s.residual < worst.residual) worst = s;
  }
  return worst;
}

namespace detail {

// Tangle of a 2 x d_C marginal: Wootters when the partner is a qubit, zero
// for a trivial partner, the roof upper bound otherwise.
inline double pair_tangle(const DensityOperator& rho, const RoofOptions& opts) {
  const Eigen::Index partner = rho.dim() / 2;
  if (partner == 1) return 0.0;
  if (partner == 2) return tangle_two_qubit(DensityOperator(rho.matrix(), Dims{2, 2}));
  return tangle_roof_upper(rho, opts).value;
}

inline PureState group_tail(const PureState& psi, const char* what) {
  const Dims& dims = psi.dims();
  if (dims.count() < 2 || dims[0] != 2 || dims[1] != 2) {
    throw Error(std::string(what) + ": first two factors must be qubits");
  }
  const auto tail = static_cast<int>(dims.total() / 4);
  if (tail > 4) return compress_tail(psi);
  return {psi.amplitudes(), Dims{2, 2, tail}};
}

}  // namespace detail

/// tau(A|BC) >= tau(AB) + tau(AC) for a pure state on 2 x 2 x tail. Tails
/// wider than 4 are compressed first. tau(AC) is Wootters-exact for a qubit C
/// and a roof upper bound otherwise, so residual >= 0 is a conservative check.
inline ResidualSample inductive_step_check(const PureState& psi, const RoofOptions& opts = {}) {
  const PureState grouped = detail::group_tail(psi, "inductive_step_check");
  const double lhs = tangle_pure_split(grouped, 0);
  const double ab = tangle_two_qubit(grouped.marginal({0, 1}));
  const double ac = detail::pair_tangle(grouped.marginal({0, 2}), opts);
  return make_sample(lhs, ab + ac, opts.seed);
}

/// Mixed-input form on 2 x 2 x d_C (d_C <= 4). A rank-one input takes the
/// pure path; otherwise lhs is a roof upper bound on tau(A|BC) and the sample
/// is flagged advisory.
inline ResidualSample inductive_step_check(const DensityOperator& rho, const RoofOptions& opts = {}) {
  const Dims& dims = rho.dims();
  if (dims.count() != 3 || dims[0] != 2 || dims[1] != 2 || dims[2] > 4) {
    throw Error("inductive_step_check: expected dims [2, 2, d_C] with d_C <= 4");
  }
  const auto eig = herm_eig(rho.matrix());
  if (eig.values(0) >= 1.0 - kStateTol) {
    return inductive_step_check(PureState::normalized(eig.vectors.col(0), dims), opts);
  }
  const double lhs = tangle_roof_upper(rho, opts).value;
  const double ab = tangle_two_qubit(rho.marginal({0, 1}));
  const double ac = detail::pair_tangle(rho.marginal({0, 2}), opts);
  auto sample = make_sample(lhs, ab + ac, opts.seed);
  sample.advisory = true;
  return sample;
}

struct KoashiWinterTerms {
  double s2_a;
  double i2_ab;
  double tau_ac_upper;
  /// s2_a - i2_ab, the exact value of tau(AC).
  [[nodiscard]] double identity_value() const { return s2_a - i2_ab; }
  /// s2_a - i2_ab - tau_ac_upper; nonpositive up to roundoff.
  [[nodiscard]] double residual() const { return s2_a - i2_ab - tau_ac_upper; }
};

inline KoashiWinterTerms koashi_winter_terms(const PureState& psi, const RoofOptions& opts = {}) {
  const PureState grouped = detail::group_tail(psi, "koashi_winter_residual");
  const auto rho_ac = grouped.marginal({0, 2});
  const double tau_ac = rho_ac.dim() == 2 ? 0.0 : tangle_roof_upper(rho_ac, opts).value;
  return {tangle_pure_split(grouped, 0), i2_arrow(grouped.marginal({0, 1})), tau_ac};
}

/// S2(rho_A) - I2<-(rho_AB) - tau(rho_AC), the last term from the roof optimizer.
inline double koashi_winter_residual(const PureState& psi, const RoofOptions& opts = {}) {
  return koashi_winter_terms(psi, opts).residual();
}

/// I2<-(rho) against tau(rho), both closed form.
inline ResidualSample tau_le_i2(const DensityOperator& rho_ab) {
  return make_sample(i2_arrow(rho_ab), tangle_two_qubit(rho_ab));
}

/// s1(L) of the dual channel against the concurrence, both taken on the
/// normal form (rho_B = I/2). A rank-deficient rho_B means B is pure, so both
/// sides are reported as 0.
inline ResidualSample sigma_max_vs_concurrence(const DensityOperator& rho_ab) {
  require_two_qubit(rho_ab, "sigma_max_vs_concurrence");
  const auto spectrum = herm_eig(rho_ab.marginal({1}).matrix()).values;
  if (spectrum(1) <= kDefaultRankTol) return make_sample(0.0, 0.0);
  const auto normal = normal_form_filter(rho_ab);
  const double s1 = singular_values_3x3(dual_channel_of_state(normal.state).channel.linear())(0);
  return make_sample(s1, concurrence_two_qubit(normal.state));
}

inline void require_lattice_domain(double d, double m) {
  if (!(d >= 1.0)) throw Error("lattice bound: coordination number must be >= 1");
  if (!(std::abs(m) <= 1.0)) throw Error("lattice bound: magnetization must lie in [-1, 1]");
}

/// Nearest-neighbour concurrence bound (1 - m^2)/sqrt(d).
inline double lattice_concurrence_bound(double d, double m) {
  require_lattice_domain(d, m);
  return (1.0 - m * m) / std::sqrt(d);
}

/// Mean-field gap bound (1 - m^2)/(2 sqrt(d)).
inline double mean_field_gap_bound(double d, double m) {
  require_lattice_domain(d, m);
  return (1.0 - m * m) / (2.0 * std::sqrt(d));
}

}  // namespace qmono
