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

#include "qmono/roof.hpp"

#include <gtest/gtest.h>

#include "qmono/channels.hpp"
#include "test_support.hpp"

namespace qmono {
namespace {

RoofOptions quick(std::uint64_t seed, int restarts = 8) {
  RoofOptions o;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

TEST(Roof, PureInputIsExact) {
  const auto psi = random_pure(Dims{2, 3}, 4);
  const auto r = tangle_roof_upper(psi.density(), quick(1));
  EXPECT_EQ(r.ensemble.size(), 1u);
  EXPECT_NEAR(r.value, tangle_pure_split(psi, 0), 1e-12);
}

TEST(Roof, SeparableWarmStartGivesZero) {
  std::vector<Ensemble::Member> members;
  const double weights[] = {0.5, 0.3, 0.2};
  for (int i = 0; i < 3; ++i) {
    const auto a = random_pure(Dims{2}, 10 + i), b = random_pure(Dims{3}, 20 + i);
    members.push_back({weights[i], PureState(kron(a.amplitudes(), b.amplitudes()), Dims{2, 3})});
  }
  const Ensemble start(members);
  const DensityOperator rho(start.mixture(), Dims{2, 3});
  const auto r = tangle_roof_upper(rho, quick(2, 2), start);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_TRUE(r.ensemble.decomposes(rho));
}

TEST(Roof, UpperBoundsWoottersOnTwoQubits) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_mixed(Dims{2, 2}, 2 + static_cast<int>(seed % 3), seed);
    const auto r = tangle_roof_upper(rho, quick(seed, 20));
    const double exact = tangle_two_qubit(rho);
    EXPECT_GE(r.value, exact - 1e-9);
    EXPECT_LE(r.value, exact + 1e-4);
  }
}

TEST(Roof, ValueIsRoofAverageOfADecomposition) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto rho = random_mixed(Dims{2, 3}, 3, seed);
    const auto r = tangle_roof_upper(rho, quick(seed));
    EXPECT_TRUE(r.ensemble.decomposes(rho));
    EXPECT_NEAR(r.value, roof_average(r.ensemble), 1e-15);
    EXPECT_LE(r.ensemble.size(), 9u);
    EXPECT_EQ(r.restarts_used, 8);
  }
}

TEST(Roof, DeterministicForFixedSeed) {
  const auto rho = random_mixed(Dims{2, 2}, 3, 9);
  EXPECT_EQ(tangle_roof_upper(rho, quick(3)).value, tangle_roof_upper(rho, quick(3)).value);
}

TEST(Roof, MatchesKoashiWinterIdentityOnQuquartPartner) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto psi = random_pure(Dims{2, 2, 4}, 100 + seed);
    const double identity = tangle_pure_split(psi, 0) - i2_arrow(psi.marginal({0, 1}));
    const auto r = tangle_roof_upper(psi.marginal({0, 2}), quick(seed, 20));
    EXPECT_GE(r.value, identity - 1e-9);
    EXPECT_LE(r.value, identity + 1e-4);
  }
}

TEST(Roof, RejectsBadInput) {
  EXPECT_THROW(tangle_roof_upper(random_mixed(Dims{3, 2}, 2, 0)), Error);
  EXPECT_THROW(tangle_roof_upper(random_mixed(Dims{2, 33}, 1, 0)), Error);
  RoofOptions none;
  none.restarts = 0;
  EXPECT_THROW(tangle_roof_upper(random_mixed(Dims{2, 2}, 2, 0), none), Error);
}

}  // namespace
}  // namespace qmono
