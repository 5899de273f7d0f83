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

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmono {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// Raised when an input violates an operation's preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered subsystem dimensions of a tensor-product space. The first entry
/// is the slowest-varying index (big-endian).
class Dims {
 public:
  Dims() = default;
  Dims(std::initializer_list<int> sizes) : Dims(std::vector<int>(sizes)) {}
  explicit Dims(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw Error("dims: empty subsystem list");
    for (int d : sizes_) {
      if (d < 1) throw Error("dims: subsystem dimension must be positive");
    }
  }

  [[nodiscard]] std::size_t count() const { return sizes_.size(); }
  [[nodiscard]] int operator[](std::size_t i) const { return sizes_.at(i); }
  [[nodiscard]] const std::vector<int>& sizes() const { return sizes_; }
  [[nodiscard]] Eigen::Index total() const {
    Eigen::Index t = 1;
    for (int d : sizes_) t *= d;
    return t;
  }
  [[nodiscard]] bool all_qubits() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](int d) { return d == 2; });
  }
  /// Dimensions of the listed subsystems, in the listed order.
  [[nodiscard]] Dims select(std::span<const int> keep) const {
    std::vector<int> out;
    out.reserve(keep.size());
    for (int k : keep) out.push_back(sizes_.at(static_cast<std::size_t>(k)));
    return Dims(std::move(out));
  }

  friend bool operator==(const Dims&, const Dims&) = default;

 private:
  std::vector<int> sizes_;
};

/// Qubit register of `n` factors.
inline Dims qubits(int n) { return Dims(std::vector<int>(static_cast<std::size_t>(n), 2)); }

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + ": non-finite entries");
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace detail {

// Flat offsets contributed by every joint value of the listed subsystems.
inline std::vector<Eigen::Index> subsystem_offsets(const Dims& dims, std::span<const int> which) {
  std::vector<Eigen::Index> strides(dims.count());
  Eigen::Index s = 1;
  for (std::size_t i = dims.count(); i-- > 0;) {
    strides[i] = s;
    s *= dims[i];
  }
  std::vector<Eigen::Index> offsets{0};
  for (int w : which) {
    const auto idx = static_cast<std::size_t>(w);
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims[idx]));
    for (Eigen::Index base : offsets) {
      for (int v = 0; v < dims[idx]; ++v) next.push_back(base + v * strides[idx]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

inline std::vector<int> validated_keep(const Dims& dims, std::span<const int> keep) {
  std::vector<int> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end()) throw Error("partial_trace: repeated subsystem");
  for (int i : k) {
    if (i < 0 || static_cast<std::size_t>(i) >= dims.count()) {
      throw Error("partial_trace: subsystem index out of range");
    }
  }
  return k;
}

inline std::vector<int> complement(const Dims& dims, const std::vector<int>& keep) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(dims.count()); ++i) {
    if (!std::binary_search(keep.begin(), keep.end(), i)) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Reduced operator on the `keep` subsystems (output in ascending subsystem
/// order). An empty keep-set returns the 1x1 trace.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::span<const int> keep) {
  if (m.rows() != m.cols()) throw Error("partial_trace: matrix is not square");
  if (dims.total() != m.rows()) throw Error("partial_trace: dims do not match matrix dimension");
  const auto k = detail::validated_keep(dims, keep);
  const auto kept = detail::subsystem_offsets(dims, k);
  const auto traced = detail::subsystem_offsets(dims, detail::complement(dims, k));
  const auto n = static_cast<Eigen::Index>(kept.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index t : traced) acc += m(kept[r] + t, kept[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, std::initializer_list<int> keep) {
  return partial_trace(m, dims, std::span<const int>(keep.begin(), keep.size()));
}

/// Reduced operator of the pure state `psi` on `keep`, computed without
/// forming the full projector.
inline ComplexMatrix reduced_from_vector(const ComplexVector& psi, const Dims& dims, std::span<const int> keep) {
  if (dims.total() != psi.size()) throw Error("partial_trace: dims do not match vector dimension");
  const auto k = detail::validated_keep(dims, keep);
  const auto kept = detail::subsystem_offsets(dims, k);
  const auto traced = detail::subsystem_offsets(dims, detail::complement(dims, k));
  ComplexMatrix coeffs(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(traced.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    for (std::size_t t = 0; t < traced.size(); ++t) {
      coeffs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = psi(kept[r] + traced[t]);
    }
  }
  return coeffs * coeffs.adjoint();
}

struct HermitianEigen {
  RealVector values;      // descending
  ComplexMatrix vectors;  // orthonormal columns, matching `values`
};

inline constexpr double kHermitianTol = 1e-10;

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized
/// before solving; deviations from Hermiticity above 1e-10 are rejected.
inline HermitianEigen herm_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error("herm_eig: matrix is not square");
  require_finite(m, "herm_eig");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw Error("herm_eig: matrix is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("herm_eig: eigensolver failed");
  const Eigen::Index n = h.rows();
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline constexpr double kNegativeEigenTol = 1e-8;
inline constexpr double kRelativeClamp = 1e-12;
inline constexpr double kDefaultRankTol = 1e-10;

namespace detail {

inline ComplexMatrix psd_function(const ComplexMatrix& m, const std::function<double(double)>& f,
                                  double zero_below) {
  const auto eig = herm_eig(m);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -kNegativeEigenTol) {
    throw Error("psd: matrix has a negative eigenvalue");
  }
  const double top = eig.values.size() > 0 ? std::max(eig.values.maxCoeff(), 0.0) : 0.0;
  const double cut = std::max(zero_below, kRelativeClamp * top);
  RealVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    mapped(i) = eig.values(i) <= cut ? 0.0 : f(eig.values(i));
  }
  return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace detail

/// Principal square root of a positive semidefinite matrix.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  return detail::psd_function(m, [](double x) { return std::sqrt(x); }, 0.0);
}

/// Pseudo-inverse square root; eigenvalues at or below `rank_tol` map to 0.
inline ComplexMatrix psd_pinv_sqrt(const ComplexMatrix& m, double rank_tol = kDefaultRankTol) {
  return detail::psd_function(m, [](double x) { return 1.0 / std::sqrt(x); }, rank_tol);
}

/// Descending singular values of a real 3x3 matrix.
inline Vector3 singular_values_3x3(const Matrix3& l) {
  if (!l.allFinite()) throw Error("singular_values_3x3: non-finite entries");
  Eigen::JacobiSVD<Matrix3> svd(l);
  return svd.singularValues();
}

/// Pauli matrices; index 0 is the identity.
inline ComplexMatrix pauli(int which) {
  ComplexMatrix p(2, 2);
  const Complex i{0.0, 1.0};
  switch (which) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i, i, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw Error("pauli: index must be 0..3");
  }
  return p;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

}  // namespace qmono
