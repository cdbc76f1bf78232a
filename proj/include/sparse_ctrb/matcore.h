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

#ifndef SPARSE_CTRB_MATCORE_H_
#define SPARSE_CTRB_MATCORE_H_

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sparse_ctrb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Numerical policy shared by every operation in the library.
//
// `rank_rel` is the relative singular-value cutoff: a singular value counts
// toward the rank when it exceeds rank_rel * sigma_max * max(rows, cols).
// `eig_cluster` groups eigenvalues closer than this absolute radius.
// `residual_abs` bounds residuals of verification identities.
//
// When `exact_rational` is set, rank decisions on the system's own matrices
// (and exact products of them) are made in rational arithmetic. Operations
// that need eigenvalues switch to an equivalent Krylov formulation; the
// decomposition and steering stay in floating point.
struct Tolerance {
  double rank_rel = 1e-10;
  double eig_cluster = 1e-8;
  double residual_abs = 1e-8;
  bool exact_rational = false;

  // Throws InputError unless all three thresholds are strictly positive.
  void Validate() const;

  // Copy with exact_rational cleared.
  Tolerance Floating() const;
};

// Throws InputError when `m` holds NaN or Inf.
void RequireFinite(const Matrix& m, std::string_view what);

double SpectralNorm(const Matrix& m);

int Rank(const Matrix& m, const Tolerance& tol);
int Rank(const ComplexMatrix& m, const Tolerance& tol);

// Evaluates expressions (products, blocks) before ranking them.
template <typename Derived>
int Rank(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol) {
  if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
    return Rank(ComplexMatrix(m), tol);
  } else {
    return Rank(Matrix(m), tol);
  }
}

// Rank of left * right with the cutoff scaled by ||left|| * ||right||, so a
// product that vanishes in exact arithmetic is not ranked by its roundoff.
int ProductRank(const Matrix& left, const Matrix& right, const Tolerance& tol);

// Rank of an input matrix, in rational arithmetic when tol.exact_rational is
// set. Only meaningful for matrices taken verbatim from the system.
int DecisionRank(const Matrix& m, const Tolerance& tol);

// Eigenvalues with algebraic multiplicity, sorted by real part then
// imaginary part.
std::vector<Complex> Eigenvalues(const Matrix& d);

struct EigenCluster {
  Complex center;  // mean of the members
  int multiplicity = 0;
};

// Single-linkage grouping of sorted eigenvalues with the given radius. The
// result keeps the ordering of the input.
std::vector<EigenCluster> ClusterEigenvalues(const std::vector<Complex>& eigs,
                                             double radius);

// Degree of the minimal polynomial of a square matrix.
int MinPolyDegree(const Matrix& d, const Tolerance& tol);

// Largest N - rank(lambda I - D) over the clustered eigenvalues of D.
int MaxGeometricMultiplicity(const Matrix& d, const Tolerance& tol);

// [D^{K-1} H, D^{K-2} H, ..., H]; block j (1-indexed) is D^{K-j} H.
Matrix ControllabilityMatrix(const Matrix& d, const Matrix& h, int k);

// Orthonormal basis (columns) of the column space of `m`.
Matrix OrthonormalColumnBasis(const Matrix& m, const Tolerance& tol);

// Invertible N x N matrix whose first rank(B) columns are an orthonormal basis
// of CS{B}. The remaining columns are canonical vectors e_i, taken in index
// order whenever they raise the rank.
Matrix ExtendToBasis(const Matrix& b, const Tolerance& tol);

// Fitting (core-nilpotent) similarity V^{-1} M V = blockdiag(core, nilpotent).
struct CoreNilpotentSplit {
  Matrix v;
  Matrix core;       // core_dim x core_dim, invertible
  Matrix nilpotent;  // (R - core_dim) square, nilpotent
  int core_dim = 0;  // rank(M^R)
  int rank = 0;      // rank(M)
  // rank(M) != rank(M^R): the zero eigenvalue is not semisimple and the
  // nilpotent block is nonzero.
  bool rank_mismatch = false;
};

CoreNilpotentSplit CoreNilpotent(const Matrix& m, const Tolerance& tol);

// Smallest singular triplet of the pencil  P [lambda I - D, H]  where P is
// `premul` (identity when it has zero rows). H may have zero columns.
struct PencilProbe {
  Complex lambda;
  int rank = 0;
  int rows = 0;
  double sigma_min = 0.0;
  // z with z^T P [lambda I - D, H] ~ 0, unit norm.
  ComplexVector z;

  bool deficient() const { return rank < rows; }
};

PencilProbe EvaluatePencil(const Matrix& d, const Matrix& h,
                           const Matrix& premul, Complex lambda,
                           const Tolerance& tol);

// Like EvaluatePencil, but when the pencil has full rank at `lambda` it moves
// lambda by left Rayleigh-quotient steps toward a nearby rank drop. Computed
// eigenvalues of defective matrices are off by O(eps^(1/k)); the exact
// eigenvalue where the rank drops is recovered this way.
PencilProbe ProbePencil(const Matrix& d, const Matrix& h, const Matrix& premul,
                        Complex lambda, const Tolerance& tol);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_MATCORE_H_
