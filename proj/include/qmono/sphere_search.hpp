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
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "qmono/linalg.hpp"

namespace qmono {

/// Roughly uniform directions on the unit sphere (Fibonacci lattice).
inline std::vector<Vector3> fibonacci_sphere(int count) {
  std::vector<Vector3> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  return out;
}

/// Orthonormal pair spanning the plane orthogonal to unit `n`.
inline std::pair<Vector3, Vector3> tangent_frame(const Vector3& n) {
  const Vector3 helper = std::abs(n.x()) < 0.9 ? Vector3::UnitX() : Vector3::UnitY();
  const Vector3 e1 = n.cross(helper).normalized();
  return {e1, n.cross(e1)};
}

struct SphereOptimum {
  double value;
  Vector3 direction;
  double weight;  // extra bounded coordinate, unused when the objective ignores it
};

/// Maximizes f(direction, weight) with weight confined to [lo, hi]: exhaustive
/// scan over `grid` lattice directions and the `weights` seeds, then
/// compass search in tangent-plane coordinates around the incumbent,
/// re-centering after every accepted move.
inline SphereOptimum maximize_on_sphere(const std::function<double(const Vector3&, double)>& f, int grid,
                                        int refine_iters, std::vector<double> weights = {0.0}, double lo = 0.0,
                                        double hi = 0.0) {
  SphereOptimum best{-std::numeric_limits<double>::infinity(), Vector3::UnitZ(), weights.front()};
  for (const auto& d : fibonacci_sphere(std::max(grid, 1))) {
    for (double w : weights) {
      const double v = f(d, w);
      if (v > best.value) best = {v, d, w};
    }
  }
  const bool use_weight = hi > lo;
  double step = 2.0 / std::sqrt(static_cast<double>(std::max(grid, 1)));
  for (int it = 0; it < refine_iters && step > 1e-10; ++it) {
    const auto [e1, e2] = tangent_frame(best.direction);
    bool moved = false;
    const Vector3 probes[] = {e1, -e1, e2, -e2};
    for (const auto& p : probes) {
      const Vector3 d = (best.direction + step * p).normalized();
      const double v = f(d, best.weight);
      if (v > best.value) {
        best = {v, d, best.weight};
        moved = true;
        break;
      }
    }
    if (!moved && use_weight) {
      for (double dw : {step, -step}) {
        const double w = std::clamp(best.weight + dw, lo, hi);
        const double v = f(best.direction, w);
        if (v > best.value) {
          best = {v, best.direction, w};
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace qmono
