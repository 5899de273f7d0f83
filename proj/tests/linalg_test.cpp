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

#include "qmono/linalg.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qmono {
namespace {

ComplexMatrix random_psd(int dim, int rank, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g(dim, rank);
  for (int c = 0; c < rank; ++c) {
    for (int r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
  }
  return g * g.adjoint();
}

TEST(Kron, IdentityTimesIdentity) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  EXPECT_TRUE(kron(id, id).isApprox(ComplexMatrix::Identity(4, 4)));
}

TEST(Kron, SigmaZTimesIdentity) {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  EXPECT_EQ(kron(pauli(3), pauli(0)), expected);
}

TEST(Kron, EntryLayout) {
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  const auto k = kron(a, b);
  EXPECT_EQ(k(1, 0), a(0, 0) * b(1, 0));
  EXPECT_EQ(k(3, 2), a(1, 1) * b(1, 0));
  EXPECT_EQ(k(0, 3), a(0, 1) * b(0, 1));
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = phi * phi.adjoint();
  EXPECT_LT((partial_trace(rho, Dims{2, 2}, {0}) - 0.5 * ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(PartialTrace, ProductStateReturnsFactor) {
  ComplexMatrix a = random_psd(2, 2, 1), b = random_psd(3, 3, 2);
  a /= a.trace();
  b /= b.trace();
  EXPECT_LT((partial_trace(kron(a, b), Dims{2, 3}, {1}) - b).norm(), 1e-14);
  EXPECT_LT((partial_trace(kron(a, b), Dims{2, 3}, {0}) - a).norm(), 1e-14);
}

TEST(PartialTrace, PreservesTraceForEveryKeepSet) {
  const Dims dims{2, 3, 2};
  const ComplexMatrix m = random_psd(12, 12, 3);
  for (const auto& keep : std::vector<std::vector<int>>{{}, {0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    EXPECT_NEAR(std::abs(partial_trace(m, dims, keep).trace() - m.trace()), 0.0, 1e-12);
  }
}

TEST(PartialTrace, MiddleFactorMatchesExplicitSum) {
  const Dims dims{2, 2, 2};
  const ComplexMatrix m = random_psd(8, 8, 4);
  const auto reduced = partial_trace(m, dims, {1});
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      Complex acc = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int z = 0; z < 2; ++z) acc += m(4 * a + 2 * r + z, 4 * a + 2 * c + z);
      }
      EXPECT_NEAR(std::abs(reduced(r, c) - acc), 0.0, 1e-14);
    }
  }
}

TEST(PartialTrace, VectorRouteMatchesMatrixRoute) {
  Rng rng(5);
  ComplexVector v(24);
  for (auto& z : v) z = rng.complex_normal();
  const Dims dims{2, 3, 4};
  const std::vector<int> keep{0, 2};
  EXPECT_LT((reduced_from_vector(v, dims, keep) - partial_trace(v * v.adjoint(), dims, keep)).norm(), 1e-12);
}

TEST(PartialTrace, RejectsMismatchedDims) {
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(4, 4), Dims{2, 3}, {0}), Error);
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(4, 4), Dims{2, 2}, {2}), Error);
  EXPECT_THROW(partial_trace(ComplexMatrix::Identity(4, 2), Dims{2, 2}, {0}), Error);
}

TEST(PartialTrace, SchmidtSpectraAgreeOnComplementaryCuts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    ComplexVector v(2 * 2 * 3);
    for (auto& z : v) z = rng.complex_normal();
    v.normalize();
    const Dims dims{2, 2, 3};
    const auto left = herm_eig(reduced_from_vector(v, dims, std::vector<int>{0})).values;
    const auto right = herm_eig(reduced_from_vector(v, dims, std::vector<int>{1, 2})).values;
    for (Eigen::Index i = 0; i < left.size(); ++i) EXPECT_NEAR(left(i), right(i), 1e-10);
    for (Eigen::Index i = left.size(); i < right.size(); ++i) EXPECT_NEAR(right(i), 0.0, 1e-10);
  }
}

TEST(HermEig, PauliZ) {
  const auto e = herm_eig(pauli(3));
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), -1.0, 1e-15);
}

TEST(HermEig, MaximallyMixed) {
  const auto e = herm_eig(0.5 * ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(e.values(0), 0.5, 1e-15);
  EXPECT_NEAR(e.values(1), 0.5, 1e-15);
}

TEST(HermEig, ReconstructsAndIsOrthonormalAndDescending) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ComplexMatrix m = random_psd(6, 6, seed) - ComplexMatrix::Identity(6, 6);
    const auto e = herm_eig(m);
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((rebuilt - m).norm(), 1e-10);
    EXPECT_LE((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(6, 6)).norm(), 1e-12);
    for (Eigen::Index i = 1; i < 6; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(HermEig, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 1;
  EXPECT_THROW(herm_eig(m), Error);
}

TEST(HermEig, ToleratesRoundoffAsymmetry) {
  ComplexMatrix m = pauli(1);
  m(0, 1) += 1e-13;
  EXPECT_NO_THROW(herm_eig(m));
}

TEST(PsdSqrt, Identity) { EXPECT_LT((psd_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15); }

TEST(PsdSqrt, RankDeficientDiagonal) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 4.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 2.0;
  EXPECT_LT((psd_sqrt(m) - expected).norm(), 1e-15);
  expected(0, 0) = 0.5;
  EXPECT_LT((psd_pinv_sqrt(m) - expected).norm(), 1e-15);
}

TEST(PsdSqrt, SquaresBackOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix m = random_psd(5, 1 + static_cast<int>(seed % 5), seed);
    const ComplexMatrix root = psd_sqrt(m);
    EXPECT_LE((root * root - m).norm(), 1e-9);
  }
}

TEST(PsdSqrt, PseudoInverseRootOnSupport) {
  const ComplexMatrix m = random_psd(4, 2, 7);
  const ComplexMatrix s = psd_pinv_sqrt(m);
  const ComplexMatrix projector = s * m * s;
  EXPECT_LE((projector * projector - projector).norm(), 1e-9);
  EXPECT_NEAR(projector.trace().real(), 2.0, 1e-9);
}

TEST(PsdSqrt, RejectsNegativeEigenvalue) {
  EXPECT_THROW(psd_sqrt(-1e-6 * ComplexMatrix::Identity(2, 2)), Error);
  EXPECT_NO_THROW(psd_sqrt(-1e-12 * ComplexMatrix::Identity(2, 2)));
}

TEST(SingularValues, KnownCases) {
  EXPECT_LT((singular_values_3x3(Matrix3::Identity()) - Vector3(1, 1, 1)).norm(), 1e-15);
  EXPECT_LT((singular_values_3x3(Vector3(3, -2, 1).asDiagonal().toDenseMatrix()) - Vector3(3, 2, 1)).norm(), 1e-14);
  const Vector3 u = Vector3(1, 2, 2).normalized();
  const Vector3 v = Vector3(0, 3, 4).normalized();
  EXPECT_LT((singular_values_3x3(u * v.transpose()) - Vector3(1, 0, 0)).norm(), 1e-14);
}

TEST(SingularValues, RotationInvariantAndMatchesGramEigenvalue) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix3 l;
    for (int i = 0; i < 9; ++i) l(i / 3, i % 3) = rng.normal();
    const Vector3 s = singular_values_3x3(l);
    const Matrix3 rotated = testing::random_rotation(rng) * l * testing::random_rotation(rng);
    EXPECT_LE((singular_values_3x3(rotated) - s).norm(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix3> gram(l.transpose() * l);
    EXPECT_NEAR(s(0) * s(0), gram.eigenvalues()(2), 1e-10);
    EXPECT_GE(s(0), s(1));
    EXPECT_GE(s(1), s(2));
    EXPECT_GE(s(2), 0.0);
  }
}

}  // namespace
}  // namespace qmono
