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
#include <cmath>

#include "qmono/linalg.hpp"
#include "qmono/states.hpp"

namespace qmono {

/// S2(rho) = 2(1 - tr rho^2) = 4 det rho for a single qubit.
inline double linear_entropy(const DensityOperator& rho) {
  if (rho.dim() != 2) throw Error("linear_entropy: expected a single-qubit state");
  return std::clamp(2.0 * (1.0 - rho.purity()), 0.0, 1.0);
}

/// Same quantity from an unnormalized 2x2 block sigma; returns 4 det(sigma) / tr(sigma),
/// i.e. p * S2(sigma / p) with p = tr(sigma).
inline double weighted_linear_entropy(const ComplexMatrix& sigma) {
  const double p = sigma.trace().real();
  if (!(p > 0.0)) return 0.0;
  const double det = (sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(1, 0)).real();
  return std::max(0.0, 4.0 * det / p);
}

/// sigma_y (x) sigma_y.
inline ComplexMatrix spin_flip() {
  static const ComplexMatrix yy = kron(pauli(2), pauli(2));
  return yy;
}

inline void require_two_qubit(const DensityOperator& rho, const char* what) {
  if (rho.dim() != 4 || rho.dims().count() != 2 || !rho.dims().all_qubits()) {
    throw Error(std::string(what) + ": expected a two-qubit state");
  }
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4). The l_i are the singular
/// values of sqrt(rho) sqrt(rho~), rho~ = (Y(x)Y) rho* (Y(x)Y), which equal the
/// square roots of the eigenvalues of rho rho~ without squaring small values.
inline double concurrence_two_qubit(const DensityOperator& rho) {
  require_two_qubit(rho, "concurrence_two_qubit");
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  const ComplexMatrix flipped_root = spin_flip() * root.conjugate() * spin_flip();
  Eigen::JacobiSVD<ComplexMatrix> svd(root * flipped_root);
  const auto& s = svd.singularValues();
  return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

inline double tangle_two_qubit(const DensityOperator& rho) {
  const double c = concurrence_two_qubit(rho);
  return c * c;
}

/// Tangle of a pure state across focus : rest, i.e. the linear entropy of
/// the focus marginal.
inline double tangle_pure_split(const PureState& psi, int focus) {
  if (focus < 0 || static_cast<std::size_t>(focus) >= psi.dims().count()) {
    throw Error("tangle_pure_split: focus index out of range");
  }
  if (psi.dims()[static_cast<std::size_t>(focus)] != 2) throw Error("tangle_pure_split: focus is not a qubit");
  const int keep[] = {focus};
  return linear_entropy(psi.marginal(keep));
}

}  // namespace qmono
