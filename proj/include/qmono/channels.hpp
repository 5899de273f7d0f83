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
#include <cstdint>
#include <optional>
#include <vector>

#include "qmono/linalg.hpp"
#include "qmono/measures.hpp"
#include "qmono/sphere_search.hpp"
#include "qmono/states.hpp"

namespace qmono {

inline constexpr double kTracePreservingTol = 1e-10;
inline constexpr double kBlochBallSlack = 1e-8;

/// Qubit channel in affine Bloch form r -> L r + l, optionally carrying the
/// Kraus operators it was built from.
class QubitChannel {
 public:
  QubitChannel() : linear_(Matrix3::Zero()), offset_(Vector3::Zero()) {}
  QubitChannel(Matrix3 linear, Vector3 offset) : linear_(std::move(linear)), offset_(std::move(offset)) {
    if (!linear_.allFinite() || !offset_.allFinite()) throw Error("channel: non-finite Bloch parameters");
  }

  /// L_jk = tr(sigma_j K(sigma_k))/2, l_j = tr(sigma_j K(I))/2 with
  /// K(X) = sum_i K_i X K_i^dagger.
  static QubitChannel from_kraus(std::vector<ComplexMatrix> kraus) {
    if (kraus.empty()) throw Error("from_kraus: empty Kraus set");
    ComplexMatrix completeness = ComplexMatrix::Zero(2, 2);
    for (const auto& k : kraus) {
      if (k.rows() != 2 || k.cols() != 2) throw Error("from_kraus: Kraus operators must be 2x2");
      require_finite(k, "from_kraus");
      completeness += k.adjoint() * k;
    }
    if ((completeness - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kTracePreservingTol) {
      throw Error("from_kraus: Kraus set is not trace preserving");
    }
    auto act = [&](const ComplexMatrix& x) {
      ComplexMatrix out = ComplexMatrix::Zero(2, 2);
      for (const auto& k : kraus) out += k * x * k.adjoint();
      return out;
    };
    Matrix3 linear;
    Vector3 offset;
    const ComplexMatrix image_identity = act(pauli(0));
    for (int j = 1; j <= 3; ++j) {
      offset(j - 1) = 0.5 * (pauli(j) * image_identity).trace().real();
      for (int k = 1; k <= 3; ++k) linear(j - 1, k - 1) = 0.5 * (pauli(j) * act(pauli(k))).trace().real();
    }
    QubitChannel ch(linear, offset);
    ch.kraus_ = std::move(kraus);
    return ch;
  }

  [[nodiscard]] const Matrix3& linear() const { return linear_; }
  [[nodiscard]] const Vector3& offset() const { return offset_; }
  [[nodiscard]] const std::optional<std::vector<ComplexMatrix>>& kraus() const { return kraus_; }

  /// Linear extension to arbitrary 2x2 operators through the Pauli basis.
  [[nodiscard]] ComplexMatrix act(const ComplexMatrix& x) const {
    if (x.rows() != 2 || x.cols() != 2) throw Error("channel: operand must be 2x2");
    const Complex c0 = 0.5 * x.trace();
    ComplexMatrix out = c0 * pauli(0);
    for (int j = 1; j <= 3; ++j) out += c0 * offset_(j - 1) * pauli(j);
    for (int k = 1; k <= 3; ++k) {
      const Complex ck = 0.5 * (pauli(k) * x).trace();
      for (int j = 1; j <= 3; ++j) out += ck * linear_(j - 1, k - 1) * pauli(j);
    }
    return out;
  }

  /// For Kraus-backed channels: (L, l) reproduces the Kraus action on the
  /// six axis states within `tol`. Raw affine channels return true.
  [[nodiscard]] bool kraus_consistent(double tol = 1e-10) const {
    if (!kraus_) return true;
    for (int axis = 0; axis < 3; ++axis) {
      for (double sign : {1.0, -1.0}) {
        const ComplexMatrix rho = bloch_matrix(sign * Vector3::Unit(axis));
        ComplexMatrix direct = ComplexMatrix::Zero(2, 2);
        for (const auto& k : *kraus_) direct += k * rho * k.adjoint();
        if ((direct - act(rho)).cwiseAbs().maxCoeff() > tol) return false;
      }
    }
    return true;
  }

 private:
  Matrix3 linear_;
  Vector3 offset_;
  std::optional<std::vector<ComplexMatrix>> kraus_;
};

inline QubitChannel from_kraus(std::vector<ComplexMatrix> kraus) { return QubitChannel::from_kraus(std::move(kraus)); }

inline QubitChannel identity_channel() { return {Matrix3::Identity(), Vector3::Zero()}; }

inline QubitChannel depolarizing_channel(double p) {
  return from_kraus({std::sqrt(1.0 - 3.0 * p / 4.0) * pauli(0), std::sqrt(p / 4.0) * pauli(1),
                     std::sqrt(p / 4.0) * pauli(2), std::sqrt(p / 4.0) * pauli(3)});
}

inline QubitChannel amplitude_damping_channel(double gamma) {
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return from_kraus({k0, k1});
}

/// Kraus operators cut from a Haar-like random 2k x 2 isometry.
inline QubitChannel random_kraus_channel(int num_kraus, std::uint64_t seed) {
  if (num_kraus < 1) throw Error("random_kraus_channel: need at least one Kraus operator");
  Rng rng(seed);
  ComplexMatrix g(2 * num_kraus, 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix iso = qr.householderQ() * ComplexMatrix::Identity(g.rows(), 2);
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < num_kraus; ++i) kraus.emplace_back(iso.block(2 * i, 0, 2, 2));
  return from_kraus(std::move(kraus));
}

/// Bloch vector map r -> L r + l. Outputs beyond the Bloch ball by more than
/// 1e-8 signal a non-CP affine pair and are rejected; smaller excursions are
/// projected back onto the sphere.
inline DensityOperator apply(const QubitChannel& ch, const DensityOperator& rho) {
  Vector3 out = ch.linear() * bloch_vector(rho) + ch.offset();
  const double n = out.norm();
  if (n > 1.0 + kBlochBallSlack) throw Error("apply: output leaves the Bloch ball (affine pair is not CP)");
  if (n > 1.0) out /= n;
  return {bloch_matrix(out), Dims{2}};
}

/// Q(r) = S2(channel output) = 1 - |L r + l|^2.
inline double output_linear_entropy(const QubitChannel& ch, const Vector3& r) {
  return 1.0 - (ch.linear() * r + ch.offset()).squaredNorm();
}

/// chi_2 = lambda_max(L^T L) S2(rho) = s1(L)^2 S2(rho); independent of l.
inline double chi2_closed(const QubitChannel& ch, const DensityOperator& rho) {
  const double s1 = singular_values_3x3(ch.linear())(0);
  return s1 * s1 * linear_entropy(rho);
}

inline PureState pure_from_bloch(const Vector3& unit) {
  const Vector3 r = unit.normalized();
  const double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
  const double phi = std::atan2(r.y(), r.x());
  ComplexVector v(2);
  v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return PureState::normalized(std::move(v), Dims{2});
}

struct Chi2Search {
  double value = 0.0;
  Ensemble best;
};

namespace detail {

struct Chord {
  double p_plus, p_minus;
  Vector3 plus, minus;
};

// Two-point pure decomposition of Bloch point r along direction n.
inline Chord chord_through(const Vector3& r, const Vector3& n) {
  const double rn = r.dot(n);
  const double disc = std::sqrt(std::max(0.0, rn * rn + 1.0 - r.squaredNorm()));
  const double t_plus = -rn + disc;
  const double t_minus = -rn - disc;
  const double span = t_plus - t_minus;
  return {-t_minus / span, t_plus / span, r + t_plus * n, r + t_minus * n};
}

}  // namespace detail

/// Direct maximization of S2(channel(rho)) - sum p S2(channel(psi)) over
/// two-point pure decompositions of rho: chords through its Bloch point,
/// scanned over `grid` directions and refined locally. A lower bound on chi_2.
inline Chi2Search chi2_bruteforce(const QubitChannel& ch, const DensityOperator& rho, int grid = 4096,
                                  int refine_iters = 2000) {
  const Vector3 r = bloch_vector(rho);
  if (r.norm() >= 1.0 - 1e-12) {
    return {0.0, Ensemble({{1.0, pure_from_bloch(r.norm() > 0 ? r : Vector3::UnitZ())}})};
  }
  const double center = output_linear_entropy(ch, r);
  auto objective = [&](const Vector3& n, double) {
    const auto c = detail::chord_through(r, n);
    return center - c.p_plus * output_linear_entropy(ch, c.plus) - c.p_minus * output_linear_entropy(ch, c.minus);
  };
  const auto opt = maximize_on_sphere(objective, grid, refine_iters);
  const auto c = detail::chord_through(r, opt.direction);
  return {std::max(opt.value, 0.0),
          Ensemble({{c.p_plus, pure_from_bloch(c.plus)}, {c.p_minus, pure_from_bloch(c.minus)}})};
}

// ---------------------------------------------------------------------------
// Channel-state duality

struct DualChannel {
  QubitChannel channel;
  DensityOperator rho_b;
  /// |r> = sum_i sqrt(lambda_i)|e_i>|e_i> on B'B, in the eigenbasis used for the channel.
  PureState purification;
};

/// Channel L_rho from B' to A with rho_AB = (L_rho (x) id)(|r><r|). Built from
/// J = (I (x) rho_B^{-1/2}) rho_AB (I (x) rho_B^{-1/2}) (twice the Choi operator)
/// via L_rho(|e_i><e_j|) = (I (x) <e_i|) J (I (x) |e_j>). Off the support of
/// rho_B the channel is completed by repeating the output of a support
/// direction, which leaves every quantity weighted by S2(rho_B) untouched.
inline DualChannel dual_channel_of_state(const DensityOperator& rho_ab, double rank_tol = kDefaultRankTol) {
  require_two_qubit(rho_ab, "dual_channel_of_state");
  DensityOperator rho_b = rho_ab.marginal({1});
  const auto eig = herm_eig(rho_b.matrix());
  ComplexMatrix inv_root = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    if (eig.values(i) > rank_tol) {
      inv_root += (1.0 / std::sqrt(eig.values(i))) * eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    }
  }
  const ComplexMatrix side = kron(pauli(0), inv_root);
  const ComplexMatrix choi = side * rho_ab.matrix() * side;

  // images(i, j) = L_rho(|e_i><e_j|)
  auto image = [&](int i, int j) {
    ComplexMatrix out(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int ap = 0; ap < 2; ++ap) {
        Complex acc{0.0, 0.0};
        for (int b = 0; b < 2; ++b) {
          for (int bp = 0; bp < 2; ++bp) {
            acc += std::conj(eig.vectors(b, i)) * choi(2 * a + b, 2 * ap + bp) * eig.vectors(bp, j);
          }
        }
        out(a, ap) = acc;
      }
    }
    return out;
  };
  ComplexMatrix images[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) images[i][j] = image(i, j);
  }
  if (eig.values(1) <= rank_tol) {
    images[1][1] = images[0][0];
    images[0][1] = ComplexMatrix::Zero(2, 2);
    images[1][0] = ComplexMatrix::Zero(2, 2);
  }
  auto act = [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const Complex coeff = eig.vectors.col(i).dot(x * eig.vectors.col(j));
        out += coeff * images[i][j];
      }
    }
    return out;
  };
  Matrix3 linear;
  Vector3 offset;
  const ComplexMatrix image_identity = act(pauli(0));
  for (int j = 1; j <= 3; ++j) {
    offset(j - 1) = 0.5 * (pauli(j) * image_identity).trace().real();
    for (int k = 1; k <= 3; ++k) linear(j - 1, k - 1) = 0.5 * (pauli(j) * act(pauli(k))).trace().real();
  }
  PureState purification = symmetric_purification(rho_b);
  return {QubitChannel(linear, offset), std::move(rho_b), std::move(purification)};
}

/// (L (x) id)(X) for a 4x4 operator X on B'B.
inline ComplexMatrix apply_on_first(const QubitChannel& ch, const ComplexMatrix& x) {
  if (x.rows() != 4 || x.cols() != 4) throw Error("apply_on_first: operand must be 4x4");
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int b = 0; b < 2; ++b) {
    for (int bp = 0; bp < 2; ++bp) {
      ComplexMatrix block(2, 2);
      for (int a = 0; a < 2; ++a) {
        for (int ap = 0; ap < 2; ++ap) block(a, ap) = x(2 * a + b, 2 * ap + bp);
      }
      const ComplexMatrix mapped = ch.act(block);
      for (int a = 0; a < 2; ++a) {
        for (int ap = 0; ap < 2; ++ap) out(2 * a + b, 2 * ap + bp) = mapped(a, ap);
      }
    }
  }
  return out;
}

/// Frobenius norm of (L_rho (x) id)(|r><r|) - rho_AB.
inline double duality_residual(const DualChannel& dual, const DensityOperator& rho_ab) {
  return frobenius_distance(apply_on_first(dual.channel, dual.purification.projector()), rho_ab.matrix());
}

/// One-way measure I2<-(rho_AB) = lambda_max(L^T L) S2(rho_B) through the dual channel.
inline double i2_arrow(const DensityOperator& rho_ab) {
  const auto dual = dual_channel_of_state(rho_ab);
  return std::clamp(chi2_closed(dual.channel, dual.rho_b), 0.0, 1.0);
}

/// Direct maximization of S2(rho_A) - sum_x p_x S2(rho_x) over two-outcome
/// POVMs {M, I - M} on B with M = q P(m) + (1 - q) P(-m), P(m) = (I + m.sigma)/2,
/// q in [1/2, 1]. A lower bound on I2<-.
inline double i2_arrow_povm_oracle(const DensityOperator& rho_ab, int grid = 2048, int refine_iters = 2000) {
  require_two_qubit(rho_ab, "i2_arrow_povm_oracle");
  const double s2_a = linear_entropy(rho_ab.marginal({0}));
  const ComplexMatrix& rho = rho_ab.matrix();
  auto conditional = [&](const ComplexMatrix& m) {
    const ComplexMatrix weighted = rho * kron(pauli(0), m);
    return partial_trace(weighted, rho_ab.dims(), {0});
  };
  auto objective = [&](const Vector3& n, double q) {
    ComplexMatrix plus = 0.5 * pauli(0), minus = 0.5 * pauli(0);
    for (int j = 1; j <= 3; ++j) {
      plus += 0.5 * n(j - 1) * pauli(j);
      minus -= 0.5 * n(j - 1) * pauli(j);
    }
    const ComplexMatrix m = q * plus + (1.0 - q) * minus;
    const ComplexMatrix rest = pauli(0) - m;
    return s2_a - weighted_linear_entropy(conditional(m)) - weighted_linear_entropy(conditional(rest));
  };
  const auto opt = maximize_on_sphere(objective, grid, refine_iters, {1.0, 0.85, 0.7}, 0.5, 1.0);
  return std::max(opt.value, 0.0);
}

// ---------------------------------------------------------------------------
// Local filtering

struct Filtered {
  DensityOperator state;
  double norm;
};

/// (I (x) B) rho (I (x) B)^dagger / tr((I (x) B^dagger B) rho).
inline Filtered local_filter(const DensityOperator& rho_ab, const ComplexMatrix& filter) {
  require_two_qubit(rho_ab, "local_filter");
  if (filter.rows() != 2 || filter.cols() != 2) throw Error("local_filter: filter must be 2x2");
  const ComplexMatrix side = kron(pauli(0), filter);
  const ComplexMatrix raw = side * rho_ab.matrix() * side.adjoint();
  const double norm = raw.trace().real();
  if (!(norm > 1e-12)) throw Error("local_filter: vanishing normalization");
  return {DensityOperator(raw / norm, rho_ab.dims()), norm};
}

struct NormalForm {
  DensityOperator state;
  ComplexMatrix filter;
};

/// Filters B to the maximally mixed marginal with B = rho_B^{-1/2} scaled to
/// unit determinant.
inline NormalForm normal_form_filter(const DensityOperator& rho_ab, double rank_tol = kDefaultRankTol) {
  require_two_qubit(rho_ab, "normal_form_filter");
  const auto rho_b = rho_ab.marginal({1});
  const auto eig = herm_eig(rho_b.matrix());
  if (eig.values(1) <= rank_tol) throw Error("normal_form_filter: rho_B is rank deficient");
  const double scale = std::pow(eig.values(0) * eig.values(1), 0.25);
  const ComplexMatrix filter = scale * psd_pinv_sqrt(rho_b.matrix(), rank_tol);
  auto filtered = local_filter(rho_ab, filter);
  return {std::move(filtered.state), filter};
}

}  // namespace qmono
