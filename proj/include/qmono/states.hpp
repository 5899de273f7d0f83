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
#include <string>
#include <utility>
#include <vector>

#include "qmono/linalg.hpp"
#include "qmono/rng.hpp"

namespace qmono {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kStateTol = 1e-10;
inline constexpr double kEnsembleTol = 1e-9;
inline constexpr Eigen::Index kMaxSampledDim = 1024;
inline constexpr int kMaxNamedQubits = 12;

class DensityOperator;

/// Unit vector over a tensor-product space.
class PureState {
 public:
  PureState(ComplexVector amplitudes, Dims dims) : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (dims_.total() != amps_.size()) throw Error("pure state: dims do not match vector dimension");
    if (!amps_.allFinite()) throw Error("pure state: non-finite amplitudes");
    if (std::abs(amps_.norm() - 1.0) > kNormTol) throw Error("pure state: vector is not normalized");
  }

  /// Normalizes `v` before validation. Rejects the zero vector.
  static PureState normalized(ComplexVector v, Dims dims) {
    const double n = v.norm();
    if (!(n > 0.0)) throw Error("pure state: zero vector");
    v /= n;
    return {std::move(v), std::move(dims)};
  }

  [[nodiscard]] const ComplexVector& amplitudes() const { return amps_; }
  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }
  [[nodiscard]] DensityOperator density() const;
  [[nodiscard]] DensityOperator marginal(std::span<const int> keep) const;
  [[nodiscard]] DensityOperator marginal(std::initializer_list<int> keep) const;

 private:
  ComplexVector amps_;
  Dims dims_;
};

/// Positive semidefinite, unit-trace operator over a tensor-product space.
/// The stored matrix is exactly Hermitian.
class DensityOperator {
 public:
  DensityOperator(const ComplexMatrix& m, Dims dims) : dims_(std::move(dims)) {
    if (m.rows() != m.cols()) throw Error("density operator: matrix is not square");
    if (dims_.total() != m.rows()) throw Error("density operator: dims do not match matrix dimension");
    require_finite(m, "density operator");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kStateTol) throw Error("density operator: matrix is not Hermitian");
    matrix_ = 0.5 * (m + m.adjoint());
    if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > kStateTol) throw Error("density operator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTol) {
      throw Error("density operator: matrix is not positive semidefinite");
    }
  }

  /// Divides by the trace before validation.
  static DensityOperator normalized(const ComplexMatrix& m, Dims dims) {
    const Complex t = m.trace();
    if (!(t.real() > 0.0)) throw Error("density operator: non-positive trace");
    return {m / t.real(), std::move(dims)};
  }

  [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }
  [[nodiscard]] double purity() const { return (matrix_ * matrix_).trace().real(); }

  [[nodiscard]] DensityOperator marginal(std::span<const int> keep) const {
    auto reduced = partial_trace(matrix_, dims_, keep);
    std::vector<int> k(keep.begin(), keep.end());
    std::sort(k.begin(), k.end());
    return DensityOperator::normalized(reduced, dims_.select(k));
  }
  [[nodiscard]] DensityOperator marginal(std::initializer_list<int> keep) const {
    return marginal(std::span<const int>(keep.begin(), keep.size()));
  }

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

inline DensityOperator PureState::density() const { return DensityOperator::normalized(projector(), dims_); }

inline DensityOperator PureState::marginal(std::span<const int> keep) const {
  std::vector<int> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  return DensityOperator::normalized(reduced_from_vector(amps_, dims_, k), dims_.select(k));
}

inline DensityOperator PureState::marginal(std::initializer_list<int> keep) const {
  return marginal(std::span<const int>(keep.begin(), keep.size()));
}

/// Probability-weighted pure-state decomposition.
class Ensemble {
 public:
  struct Member {
    double probability;
    PureState state;
  };

  Ensemble() = default;
  explicit Ensemble(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error("ensemble: no members");
    double total = 0.0;
    for (const auto& m : members_) {
      if (m.probability < 0.0) throw Error("ensemble: negative probability");
      if (!(m.state.dims() == members_.front().state.dims())) throw Error("ensemble: members have different dims");
      total += m.probability;
    }
    if (std::abs(total - 1.0) > kStateTol) throw Error("ensemble: probabilities do not sum to 1");
  }

  [[nodiscard]] const std::vector<Member>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }

  [[nodiscard]] ComplexMatrix mixture() const {
    const auto d = members_.front().state.amplitudes().size();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (const auto& m : members_) out += m.probability * m.state.projector();
    return out;
  }

  /// True when the weighted projectors reproduce `target` within `tol`
  /// (Frobenius).
  [[nodiscard]] bool decomposes(const DensityOperator& target, double tol = kEnsembleTol) const {
    if (members_.empty() || mixture().rows() != target.dim()) return false;
    return frobenius_distance(mixture(), target.matrix()) <= tol;
  }

 private:
  std::vector<Member> members_;
};

// ---------------------------------------------------------------------------
// Sampling

/// Haar-random unit vector: normalized i.i.d. complex Gaussian components.
inline PureState random_pure(const Dims& dims, std::uint64_t seed) {
  if (dims.total() > kMaxSampledDim) throw Error("random_pure: dimension exceeds 1024");
  Rng rng(seed);
  ComplexVector v(dims.total());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return PureState::normalized(std::move(v), dims);
}

/// G G^dagger / tr(G G^dagger) with G a dim x rank complex Ginibre matrix
/// (Hilbert-Schmidt-induced measure for rank = dim).
inline DensityOperator random_mixed(const Dims& dims, int rank, std::uint64_t seed) {
  const Eigen::Index d = dims.total();
  if (d > kMaxSampledDim) throw Error("random_mixed: dimension exceeds 1024");
  if (rank < 1 || rank > d) throw Error("random_mixed: rank must lie in [1, dim]");
  Rng rng(seed);
  ComplexMatrix g(d, rank);
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.complex_normal();
  }
  return DensityOperator::normalized(g * g.adjoint(), dims);
}

inline DensityOperator random_mixed(int dim, int rank, std::uint64_t seed) {
  return random_mixed(Dims{dim}, rank, seed);
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix on R).
inline ComplexMatrix random_unitary(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex diag = rmat(i, i);
    const double a = std::abs(diag);
    if (a > 0.0) q.col(i) *= diag / a;
  }
  return q;
}

inline ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

// ---------------------------------------------------------------------------
// Constructions

/// |r> = sum_i sqrt(lambda_i) |e_i>|e_i> in the eigenbasis {e_i} of rho.
/// Both marginals equal rho.
inline PureState symmetric_purification(const DensityOperator& rho) {
  const auto eig = herm_eig(rho.matrix());
  const Eigen::Index d = rho.dim();
  ComplexVector r = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double w = std::max(eig.values(i), 0.0);
    if (w == 0.0) continue;
    r += std::sqrt(w) * kron(ComplexVector(eig.vectors.col(i)), ComplexVector(eig.vectors.col(i)));
  }
  return PureState::normalized(std::move(r), Dims{static_cast<int>(d), static_cast<int>(d)});
}

inline constexpr double kTailWeightTol = 1e-12;

/// Rotates everything after the first two qubits into the eigenbasis of its
/// reduced operator and drops directions of weight below 1e-12. The result
/// has dims [2, 2, d_C] with d_C <= 4.
inline PureState compress_tail(const PureState& psi) {
  const Dims& dims = psi.dims();
  if (dims.count() < 3 || dims[0] != 2 || dims[1] != 2) {
    throw Error("compress_tail: expected two leading qubits followed by a tail");
  }
  const Eigen::Index tail = dims.total() / 4;
  // coeffs(ab, c) = <ab, c | psi>
  const ComplexMatrix coeffs = psi.amplitudes().reshaped(tail, 4).transpose();
  const ComplexMatrix rho_c = coeffs.transpose() * coeffs.conjugate();
  const auto eig = herm_eig(rho_c);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    if (eig.values(j) >= kTailWeightTol) kept.push_back(j);
  }
  const auto dc = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix compressed(4, dc);
  for (Eigen::Index j = 0; j < dc; ++j) {
    compressed.col(j) = coeffs * eig.vectors.col(kept[static_cast<std::size_t>(j)]).conjugate();
  }
  ComplexVector out = compressed.transpose().reshaped();
  return PureState::normalized(std::move(out), Dims{2, 2, static_cast<int>(dc)});
}

inline PureState basis_state(const Dims& dims, Eigen::Index index) {
  ComplexVector v = ComplexVector::Zero(dims.total());
  v(index) = 1.0;
  return {std::move(v), dims};
}

/// Uniform superposition of all weight-1 computational basis strings.
inline PureState w_state(int n) {
  if (n < 2) throw Error("w_state: need at least 2 qubits");
  if (n > kMaxNamedQubits) throw Error("w_state: too many qubits");
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  for (int q = 0; q < n; ++q) v(Eigen::Index{1} << q) = 1.0 / std::sqrt(static_cast<double>(n));
  return PureState::normalized(std::move(v), qubits(n));
}

/// (|0>|0...0> + |1>|W_n>)/sqrt(2) on 1 + n qubits, focus qubit first.
inline PureState saturating_state(int n) {
  if (n < 2) throw Error("saturating_state: need at least 2 qubits after the focus");
  if (n + 1 > kMaxNamedQubits) throw Error("saturating_state: too many qubits");
  const ComplexVector w = w_state(n).amplitudes();
  ComplexVector v = ComplexVector::Zero(Eigen::Index{2} << n);
  v(0) = 1.0 / std::sqrt(2.0);
  v.tail(w.size()) = w / std::sqrt(2.0);
  return PureState::normalized(std::move(v), qubits(n + 1));
}

/// (|0...0> + |1...1>)/sqrt(2).
inline PureState ghz_state(int n) {
  if (n < 2) throw Error("ghz_state: need at least 2 qubits");
  if (n > kMaxNamedQubits) throw Error("ghz_state: too many qubits");
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
  v(0) = 1.0;
  v(v.size() - 1) = 1.0;
  return PureState::normalized(std::move(v), qubits(n));
}

inline PureState bell_state() { return ghz_state(2); }

/// r_j = tr(rho sigma_j).
inline Vector3 bloch_vector(const DensityOperator& rho) {
  if (rho.dim() != 2) throw Error("bloch_vector: expected a single-qubit state");
  Vector3 r;
  for (int j = 1; j <= 3; ++j) r(j - 1) = (rho.matrix() * pauli(j)).trace().real();
  return r;
}

/// (I + r.sigma)/2 as a plain matrix; no positivity check.
inline ComplexMatrix bloch_matrix(const Vector3& r) {
  ComplexMatrix m = 0.5 * pauli(0);
  for (int j = 1; j <= 3; ++j) m += 0.5 * r(j - 1) * pauli(j);
  return m;
}

inline DensityOperator state_from_bloch(const Vector3& r) {
  if (r.norm() > 1.0 + kStateTol) throw Error("state_from_bloch: vector outside the Bloch ball");
  return {bloch_matrix(r), Dims{2}};
}

}  // namespace qmono
