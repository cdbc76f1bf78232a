// Copyright 2026 The sparse_ctrb Authors
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

#include "sparse_ctrb/matcore.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/exact.h"
#include "test_util.h"

namespace sparse_ctrb {
namespace {

using testing::Mat;

const Tolerance kTol;

TEST(ToleranceTest, RejectsNonPositiveThresholds) {
  Tolerance t;
  EXPECT_NO_THROW(t.Validate());
  t.rank_rel = 0.0;
  EXPECT_THROW(t.Validate(), InputError);
  t = Tolerance{};
  t.eig_cluster = -1.0;
  EXPECT_THROW(t.Validate(), InputError);
  t = Tolerance{};
  t.residual_abs = 0.0;
  EXPECT_THROW(t.Validate(), InputError);
}

TEST(RankTest, KnownMatrices) {
  EXPECT_EQ(Rank(Matrix::Identity(3, 3), kTol), 3);
  EXPECT_EQ(Rank(Mat(3, 2, {1, 1, 1, 0, 0, 1}), kTol), 2);
  EXPECT_EQ(Rank(Matrix::Zero(4, 2), kTol), 0);
}

TEST(RankTest, LowRankProducts) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = testing::RandomGaussian(rng, 5, 2) *
                     testing::RandomGaussian(rng, 2, 5);
    EXPECT_EQ(Rank(m, kTol), 2);
    EXPECT_EQ(Rank(Matrix(m.transpose()), kTol), 2);
  }
}

TEST(RequireFiniteTest, RejectsNanAndInf) {
  Matrix m = Matrix::Zero(2, 2);
  EXPECT_NO_THROW(RequireFinite(m, "m"));
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(RequireFinite(m, "m"), InputError);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(RequireFinite(m, "m"), InputError);
}

TEST(EigenvaluesTest, SortedWithMultiplicity) {
  const auto e1 = Eigenvalues(Mat(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, 0}));
  ASSERT_EQ(e1.size(), 3u);
  EXPECT_NEAR(e1[0].real(), 0.0, 1e-12);
  EXPECT_NEAR(e1[1].real(), 0.0, 1e-12);
  EXPECT_NEAR(e1[2].real(), 1.0, 1e-12);

  const auto e2 = Eigenvalues(Mat(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, -1}));
  EXPECT_NEAR(e2[0].real(), -1.0, 1e-12);
  EXPECT_NEAR(e2[1].real(), 0.0, 1e-12);
  EXPECT_NEAR(e2[2].real(), 1.0, 1e-12);

  for (const Complex& z : Eigenvalues(testing::ShiftChain().D())) {
    EXPECT_NEAR(std::abs(z), 0.0, 1e-12);
  }
  EXPECT_THROW(Eigenvalues(Matrix::Zero(2, 3)), InputError);
}

TEST(EigenvaluesTest, ComplexPairOrderedByImaginaryPart) {
  const auto e = Eigenvalues(Mat(2, 2, {0, -1, 1, 0}));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0].imag(), -1.0, 1e-12);
  EXPECT_NEAR(e[1].imag(), 1.0, 1e-12);
}

TEST(EigenvaluesTest, EigenpairResiduals) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix d = testing::RandomGaussian(rng, 4, 4);
    for (const Complex& lambda : Eigenvalues(d)) {
      const ComplexMatrix shifted =
          lambda * ComplexMatrix::Identity(4, 4) - d.cast<Complex>();
      Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
      const ComplexVector v = svd.matrixV().col(3);
      EXPECT_LE((shifted * v).norm(), kTol.residual_abs * SpectralNorm(d));
    }
  }
}

TEST(ClusterTest, MergesNearbyEigenvalues) {
  const std::vector<Complex> eigs{{0.0, 0.0}, {1e-10, 0.0}, {1.0, 0.0}};
  const auto clusters = ClusterEigenvalues(eigs, 1e-8);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0].multiplicity, 2);
  EXPECT_EQ(clusters[1].multiplicity, 1);
}

TEST(MinPolyDegreeTest, KnownMatrices) {
  EXPECT_EQ(MinPolyDegree(Matrix::Identity(3, 3), kTol), 1);
  EXPECT_EQ(MinPolyDegree(Matrix::Zero(3, 3), kTol), 1);
  EXPECT_EQ(MinPolyDegree(testing::ShiftChain().D(), kTol), 3);
  EXPECT_EQ(MinPolyDegree(testing::DiagonalPair().D(), kTol), 2);
  EXPECT_EQ(MinPolyDegree(testing::PermutationInputs().D(), kTol), 3);
}

TEST(MinPolyDegreeTest, MatchesBruteForceAndExactMode) {
  std::mt19937_64 rng(3);
  Tolerance exact_tol;
  exact_tol.exact_rational = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const Matrix d = testing::RandomTernary(rng, n, n);
    int expected = n;
    for (int q = 1; q <= n; ++q) {
      Matrix stacked(n * n, q + 1);
      for (int i = 0; i <= q; ++i) {
        stacked.col(i) = testing::RefPower(d, i).reshaped();
      }
      if (testing::RefRank(stacked) < q + 1) {
        expected = q;
        break;
      }
    }
    EXPECT_EQ(MinPolyDegree(d, kTol), expected) << d;
    EXPECT_EQ(MinPolyDegree(d, exact_tol), expected) << d;
  }
}

TEST(GeometricMultiplicityTest, KnownMatrices) {
  EXPECT_EQ(MaxGeometricMultiplicity(testing::DiagonalPair().D(), kTol), 2);
  EXPECT_EQ(MaxGeometricMultiplicity(Matrix::Identity(3, 3), kTol), 3);
  EXPECT_EQ(MaxGeometricMultiplicity(testing::PermutationInputs().D(), kTol),
            1);
  EXPECT_EQ(MaxGeometricMultiplicity(testing::ShiftChain().D(), kTol), 1);
}

TEST(ControllabilityMatrixTest, BlockLayout) {
  const SystemModel ex3 = testing::ShiftChain();
  EXPECT_TRUE(ControllabilityMatrix(ex3.D(), ex3.H(), 1).isApprox(ex3.H()));
  const Matrix k3 = ControllabilityMatrix(ex3.D(), ex3.H(), 3);
  ASSERT_EQ(k3.cols(), 6);
  EXPECT_TRUE(k3.col(0).isApprox(Vector::Unit(3, 0)));
  EXPECT_TRUE(k3.col(2).isApprox(Mat(3, 1, {1, 1, 0})));
  EXPECT_TRUE(k3.col(4).isApprox(Mat(3, 1, {1, 1, 1})));
  EXPECT_THROW(ControllabilityMatrix(ex3.D(), Matrix::Zero(2, 1), 2),
               InputError);
  EXPECT_THROW(ControllabilityMatrix(ex3.D(), ex3.H(), 0), InputError);
}

TEST(ControllabilityMatrixTest, FourStateExampleHasRankThree) {
  const SystemModel ex = testing::FourStateExample();
  EXPECT_EQ(Rank(ControllabilityMatrix(ex.D(), ex.H(), 4), kTol), 3);
}

TEST(ControllabilityMatrixTest, RankMonotoneAndStableBeyondMinPoly) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const Matrix d = testing::RandomTernary(rng, n, n);
    const Matrix h = testing::RandomTernary(rng, n, 1 + trial % 2);
    const int q = MinPolyDegree(d, kTol);
    int prev = 0;
    for (int k = 1; k <= 2 * n; ++k) {
      const int r = Rank(ControllabilityMatrix(d, h, k), kTol);
      EXPECT_GE(r, prev);
      if (k > q) EXPECT_EQ(r, prev);
      prev = r;
    }
  }
}

TEST(ExtendToBasisTest, SpansAndCompletes) {
  const Matrix u = ExtendToBasis(Matrix::Identity(3, 3), kTol);
  EXPECT_EQ(Rank(u, kTol), 3);

  const Matrix e1 = Vector::Unit(3, 0);
  const Matrix u1 = ExtendToBasis(e1, kTol);
  EXPECT_EQ(Rank(u1, kTol), 3);
  EXPECT_NEAR(std::abs(u1(0, 0)), 1.0, 1e-12);

  const SystemModel ex = testing::FourStateExample();
  const Matrix k4 = ControllabilityMatrix(ex.D(), ex.H(), 4);
  const Matrix u4 = ExtendToBasis(k4, kTol);
  EXPECT_EQ(Rank(u4, kTol), 4);
  Matrix joined(4, k4.cols() + 3);
  joined << k4, u4.leftCols(3);
  EXPECT_EQ(Rank(joined, kTol), 3);
}

TEST(CoreNilpotentTest, KnownSplits) {
  const CoreNilpotentSplit inv = CoreNilpotent(Matrix::Identity(3, 3), kTol);
  EXPECT_EQ(inv.core_dim, 3);
  EXPECT_FALSE(inv.rank_mismatch);

  const CoreNilpotentSplit zero = CoreNilpotent(Matrix::Zero(3, 3), kTol);
  EXPECT_EQ(zero.core_dim, 0);

  const CoreNilpotentSplit diag =
      CoreNilpotent(Mat(3, 3, {0.2, 0, 0, 0, 0, 0, 0, 0, 0}), kTol);
  EXPECT_EQ(diag.core_dim, 1);
  EXPECT_EQ(diag.rank, 1);
  EXPECT_FALSE(diag.rank_mismatch);

  const CoreNilpotentSplit shift =
      CoreNilpotent(testing::ShiftChain().D(), kTol);
  EXPECT_EQ(shift.core_dim, 0);
  EXPECT_EQ(shift.rank, 2);
  EXPECT_TRUE(shift.rank_mismatch);
}

TEST(CoreNilpotentTest, SimilarityResidualsOnRandomMatrices) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 3;
    // Invertible part plus a nilpotent Jordan block, hidden by a similarity.
    const int core = 1 + trial % (n - 1);
    Matrix block = Matrix::Zero(n, n);
    block.topLeftCorner(core, core) =
        testing::RandomWellConditioned(rng, core, 10.0);
    for (int i = core; i + 1 < n; ++i) block(i, i + 1) = trial % 2;
    const Matrix t = testing::RandomWellConditioned(rng, n, 20.0);
    const Matrix m = t * block * t.inverse();

    const CoreNilpotentSplit split = CoreNilpotent(m, kTol);
    ASSERT_EQ(split.core_dim, core) << m;
    const Matrix form = split.v.lu().solve(m * split.v);
    Matrix expected = Matrix::Zero(n, n);
    expected.topLeftCorner(core, core) = split.core;
    expected.bottomRightCorner(n - core, n - core) = split.nilpotent;
    EXPECT_LE((form - expected).norm(),
              kTol.residual_abs * std::max(1.0, SpectralNorm(m)));
    EXPECT_EQ(Rank(split.core, kTol), core);
    Matrix power = split.nilpotent;
    for (int i = 1; i < n - core; ++i) power = power * split.nilpotent;
    EXPECT_LE(power.norm(), kTol.residual_abs);
  }
}

TEST(PencilProbeTest, FindsDefectiveRankDrop) {
  // The eigenvalue 0 is defective; computed eigenvalues are perturbed by
  // about sqrt(eps) yet the pencil must still lose rank.
  const Matrix d = Mat(2, 2, {1, 1, -1, -1});
  const Matrix h = Mat(2, 1, {1, -1});
  const Matrix no_premul(0, 0);
  bool found = false;
  for (const Complex& lambda : Eigenvalues(d)) {
    found |= ProbePencil(d, h, no_premul, lambda, kTol).deficient();
  }
  EXPECT_TRUE(found);
  EXPECT_FALSE(
      ProbePencil(d, Mat(2, 1, {1, 0}), no_premul, Complex(0, 0), kTol)
          .deficient());
}

TEST(ExactTest, RationalRankAndNullSpace) {
  using exact::RationalMatrix;
  const RationalMatrix m =
      RationalMatrix::FromDouble(Mat(3, 3, {1, 2, 3, 2, 4, 6, 1, 0, 1}));
  EXPECT_EQ(exact::Rank(m), 2);
  const RationalMatrix null = exact::NullSpace(m);
  ASSERT_EQ(null.cols(), 1);
  const Matrix product = (m * null).ToDouble();
  EXPECT_EQ(product.norm(), 0.0);
  EXPECT_EQ(exact::FromDouble(0.5), exact::Rational(1, 2));
  EXPECT_NE(exact::FromDouble(0.1), exact::Rational(1, 10));
}

}  // namespace
}  // namespace sparse_ctrb
