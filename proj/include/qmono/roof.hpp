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
#include <limits>
#include <optional>
#include <vector>

#include "qmono/measures.hpp"

namespace qmono {

struct RoofOptions {
  int restarts = 20;
  /// 0 selects rank^2.
  int max_members = 0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  int max_sweeps = 4000;
};

/// Upper bound on the tangle of a 2 x D state from an explicit decomposition.
struct RoofResult {
  double value = 0.0;
  Ensemble ensemble;
  int restarts_used = 0;
  bool converged = false;
};

/// Roof average sum_x p_x S2(tr_B psi_x) of a decomposition whose first
/// factor is a qubit.
inline double roof_average(const Ensemble& ensemble) {
  double total = 0.0;
  for (const auto& m : ensemble.members()) {
    if (m.probability == 0.0) continue;
    total += m.probability * tangle_pure_split(m.state, 0);
  }
  return std::max(total, 0.0);
}

namespace detail {

using MemberBlock = Eigen::Matrix<Complex, 2, Eigen::Dynamic, Eigen::RowMajor, 2, 32>;

// Members are kept as unnormalized 2 x D blocks psi~_x = sum_k U_xk w_k with
// w_k = sqrt(lambda_k) v_k from the spectral purification and U an isometry.
// Two-row rotations of U keep it an isometry, so every iterate is an exact
// decomposition of rho.
class RoofSearch {
 public:
  RoofSearch(std::vector<MemberBlock> blocks, int members) : blocks_(std::move(blocks)), members_(members) {}

  [[nodiscard]] int rank() const { return static_cast<int>(blocks_.size()); }

  // Members from an isometry (rows = members, cols = rank).
  [[nodiscard]] std::vector<MemberBlock> expand(const ComplexMatrix& iso) const {
    std::vector<MemberBlock> out(static_cast<std::size_t>(iso.rows()));
    for (Eigen::Index x = 0; x < iso.rows(); ++x) {
      MemberBlock acc = MemberBlock::Zero(2, blocks_.front().cols());
      for (int k = 0; k < rank(); ++k) acc += iso(x, k) * blocks_[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(x)] = std::move(acc);
    }
    return out;
  }

  static double cost(const MemberBlock& m) {
    const double a = m.row(0).squaredNorm();
    const double b = m.row(1).squaredNorm();
    const double p = a + b;
    if (!(p > 0.0)) return 0.0;
    const double overlap = std::norm(m.row(0).dot(m.row(1)));
    return std::max(0.0, 4.0 * (a * b - overlap) / p);
  }

  static double total(const std::vector<MemberBlock>& ms) {
    double t = 0.0;
    for (const auto& m : ms) t += cost(m);
    return t;
  }

  // exp of the anti-Hermitian generator [[0, z], [-conj z, 0]] acting on rows i, j.
  static void rotate(const MemberBlock& a, const MemberBlock& b, double x, double y, MemberBlock& out_a,
                     MemberBlock& out_b) {
    const double theta = std::hypot(x, y);
    if (theta == 0.0) {
      out_a = a;
      out_b = b;
      return;
    }
    const Complex phase(x / theta, y / theta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    out_a = c * a + (s * phase) * b;
    out_b = (-s * std::conj(phase)) * a + c * b;
  }

  // Coordinate descent over two-row rotations. Each pair update fits a
  // quadratic model from finite differences and takes a bounded Newton step,
  // falling back to the best probe when the model step does not improve.
  double descend(std::vector<MemberBlock>& ms, int max_sweeps, double stop) const {
    const auto n = static_cast<int>(ms.size());
    double current = total(ms);
    if (n < 2) return current;
    MemberBlock ta, tb;
    const double h = 1e-3;
    const double max_step = 0.6;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = current;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          auto& a = ms[static_cast<std::size_t>(i)];
          auto& b = ms[static_cast<std::size_t>(j)];
          const double f0 = cost(a) + cost(b);
          auto eval = [&](double x, double y) {
            rotate(a, b, x, y, ta, tb);
            return cost(ta) + cost(tb);
          };
          const double fxp = eval(h, 0), fxm = eval(-h, 0);
          const double fyp = eval(0, h), fym = eval(0, -h);
          const double fxy = eval(h, h);
          const double gx = (fxp - fxm) / (2 * h);
          const double gy = (fyp - fym) / (2 * h);
          const double hxx = (fxp - 2 * f0 + fxm) / (h * h);
          const double hyy = (fyp - 2 * f0 + fym) / (h * h);
          const double hxy = (fxy - fxp - fyp + f0) / (h * h);
          double sx = -gx, sy = -gy;
          const double det = hxx * hyy - hxy * hxy;
          if (hxx > 0 && det > 0) {
            sx = -(hyy * gx - hxy * gy) / det;
            sy = -(hxx * gy - hxy * gx) / det;
          }
          const double len = std::hypot(sx, sy);
          if (len > max_step) {
            sx *= max_step / len;
            sy *= max_step / len;
          }
          double best = f0, bx = 0, by = 0;
          auto consider = [&](double x, double y, double v) {
            if (v < best) {
              best = v;
              bx = x;
              by = y;
            }
          };
          consider(h, 0, fxp);
          consider(-h, 0, fxm);
          consider(0, h, fyp);
          consider(0, -h, fym);
          consider(h, h, fxy);
          if (len > 0) {
            double scale = 1.0;
            for (int tries = 0; tries < 4; ++tries, scale *= 0.25) {
              const double v = eval(scale * sx, scale * sy);
              if (v < best) {
                consider(scale * sx, scale * sy, v);
                break;
              }
            }
          }
          if (best < f0) {
            rotate(a, b, bx, by, ta, tb);
            a = ta;
            b = tb;
          }
        }
      }
      current = total(ms);
      if (before - current <= stop) break;
    }
    return current;
  }

 private:
  std::vector<MemberBlock> blocks_;
  int members_;
};

}  // namespace detail

// Stop a restart once a full sweep improves the objective by less than this.
inline constexpr double kRoofSweepStop = 1e-13;

inline void require_qubit_first(const DensityOperator& rho, const char* what) {
  if (rho.dims().count() < 2 || rho.dims()[0] != 2) {
    throw Error(std::string(what) + ": first factor must be a qubit");
  }
}

/// Numerical convex roof of the linear entropy for a 2 x D state. Every
/// decomposition with m members arises from an m x rank isometry applied to
/// the spectral purification; the search runs coordinate descent over
/// two-row rotations of that isometry from `restarts` Haar-random starts
/// (plus `start`, if given). The returned value is exactly the roof average
/// of the returned ensemble, hence a certified upper bound on the tangle.
inline RoofResult tangle_roof_upper(const DensityOperator& rho, const RoofOptions& opts = {},
                                    const std::optional<Ensemble>& start = std::nullopt) {
  require_qubit_first(rho, "tangle_roof_upper");
  if (opts.restarts < 1) throw Error("tangle_roof_upper: need at least one restart");
  const Eigen::Index dim = rho.dim();
  const Eigen::Index partner = dim / 2;
  const auto eig = herm_eig(rho.matrix());
  const double cut = std::max(1e-14, kRelativeClamp * eig.values(0));
  if (partner > 32) throw Error("tangle_roof_upper: partner dimension exceeds 32");
  std::vector<detail::MemberBlock> blocks;
  std::vector<ComplexVector> support;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (eig.values(k) <= cut) continue;
    const ComplexVector w = std::sqrt(eig.values(k)) * eig.vectors.col(k);
    blocks.push_back(w.reshaped(partner, 2).transpose());
    support.push_back(eig.vectors.col(k));
  }
  const int rank = static_cast<int>(blocks.size());
  int members = opts.max_members > 0 ? opts.max_members : rank * rank;
  members = std::max(members, rank);

  ComplexMatrix warm;
  if (start) {
    // U_xk = <v_k | psi~_x> / sqrt(lambda_k)
    members = std::max(members, static_cast<int>(start->size()));
    warm = ComplexMatrix::Zero(members, rank);
    for (std::size_t x = 0; x < start->size(); ++x) {
      const auto& m = start->members()[x];
      if (m.state.amplitudes().size() != dim) throw Error("tangle_roof_upper: start ensemble has wrong dimension");
      const ComplexVector tilde = std::sqrt(m.probability) * m.state.amplitudes();
      for (int k = 0; k < rank; ++k) {
        warm(static_cast<Eigen::Index>(x), k) =
            support[static_cast<std::size_t>(k)].dot(tilde) / std::sqrt(eig.values(k));
      }
    }
  }

  detail::RoofSearch search(blocks, members);
  std::vector<double> finals;
  std::vector<detail::MemberBlock> best_members;
  double best = std::numeric_limits<double>::infinity();
  const int runs = opts.restarts + (start ? 1 : 0);
  for (int run = 0; run < runs; ++run) {
    ComplexMatrix iso;
    if (start && run == 0) {
      iso = warm;
    } else {
      const int r = run - (start ? 1 : 0);
      iso = random_unitary(members, mix_seed(opts.seed, static_cast<std::uint64_t>(r))).leftCols(rank);
    }
    auto ms = search.expand(iso);
    const double v = search.descend(ms, rank == 1 ? 0 : opts.max_sweeps, kRoofSweepStop);
    finals.push_back(v);
    if (v < best) {
      best = v;
      best_members = std::move(ms);
    }
  }

  std::vector<Ensemble::Member> out;
  double mass = 0.0;
  for (const auto& m : best_members) {
    const double p = m.squaredNorm();
    if (p <= 1e-15) continue;
    mass += p;
    ComplexVector v = m.transpose().reshaped();
    out.push_back({p, PureState::normalized(std::move(v), rho.dims())});
  }
  for (auto& m : out) m.probability /= mass;

  RoofResult result;
  result.ensemble = Ensemble(std::move(out));
  result.value = roof_average(result.ensemble);
  result.restarts_used = runs;
  std::sort(finals.begin(), finals.end());
  result.converged = finals.size() < 2 || finals[1] - finals[0] <= opts.tol;
  return result;
}

}  // namespace qmono
