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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/exact.h"

namespace sparse_ctrb {

namespace {

template <typename Derived>
int CountAbove(const Eigen::MatrixBase<Derived>& singular_values,
               double threshold) {
  int count = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > threshold) ++count;
  }
  return count;
}

// `reference` replaces sigma_max of `m` in the cutoff when positive.
template <typename MatrixType>
int RankImpl(const MatrixType& m, const Tolerance& tol,
             double reference = 0.0) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixType> svd(m);
  const auto& sv = svd.singularValues();
  const double scale = reference > 0.0 ? reference : sv(0);
  if (scale == 0.0) return 0;
  const double threshold = tol.rank_rel * scale *
                           static_cast<double>(std::max(m.rows(), m.cols()));
  return CountAbove(sv, threshold);
}

// Flips the sign of each column so that its largest-magnitude entry (first one
// on ties) is positive.
void NormalizeColumnSigns(Matrix* basis) {
  for (Eigen::Index j = 0; j < basis->cols(); ++j) {
    Eigen::Index arg = 0;
    basis->col(j).cwiseAbs().maxCoeff(&arg);
    if ((*basis)(arg, j) < 0.0) basis->col(j) *= -1.0;
  }
}

// Right singular vectors of `m` whose singular values are <= abs_threshold.
Matrix NullBasisAbs(const Matrix& m, double abs_threshold) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int kept = CountAbove(sv, abs_threshold);
  Matrix basis = svd.matrixV().rightCols(n - kept);
  NormalizeColumnSigns(&basis);
  return basis;
}

// Leading `min_keep` or more left singular vectors of `m`: all whose singular
// values exceed abs_threshold, but never fewer than min_keep.
Matrix RangeBasisAbs(const Matrix& m, double abs_threshold, int min_keep) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  int kept = std::max(CountAbove(svd.singularValues(), abs_threshold),
                      min_keep);
  kept = std::min<int>(kept, static_cast<int>(svd.matrixU().cols()));
  Matrix basis = svd.matrixU().leftCols(kept);
  NormalizeColumnSigns(&basis);
  return basis;
}

void NormalizePhase(ComplexVector* z) {
  if (z->size() == 0) return;
  Eigen::Index arg = 0;
  z->cwiseAbs().maxCoeff(&arg);
  const Complex pivot = (*z)(arg);
  if (std::abs(pivot) > 0.0) *z *= std::conj(pivot) / std::abs(pivot);
  const double norm = z->norm();
  if (norm > 0.0) *z /= norm;
}

}  // namespace

void Tolerance::Validate() const {
  if (!(rank_rel > 0.0) || !(eig_cluster > 0.0) || !(residual_abs > 0.0) ||
      !std::isfinite(rank_rel) || !std::isfinite(eig_cluster) ||
      !std::isfinite(residual_abs)) {
    throw InputError("tolerance thresholds must be finite and positive");
  }
}

Tolerance Tolerance::Floating() const {
  Tolerance copy = *this;
  copy.exact_rational = false;
  return copy;
}

void RequireFinite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

double SpectralNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

int Rank(const Matrix& m, const Tolerance& tol) { return RankImpl(m, tol); }

int Rank(const ComplexMatrix& m, const Tolerance& tol) {
  return RankImpl(m, tol);
}

int ProductRank(const Matrix& left, const Matrix& right,
                const Tolerance& tol) {
  const Matrix product = left * right;
  return RankImpl(product, tol, SpectralNorm(left) * SpectralNorm(right));
}

int DecisionRank(const Matrix& m, const Tolerance& tol) {
  if (tol.exact_rational) {
    return exact::Rank(exact::RationalMatrix::FromDouble(m));
  }
  return Rank(m, tol);
}

std::vector<Complex> Eigenvalues(const Matrix& d) {
  if (d.rows() != d.cols()) {
    throw InputError("eigenvalues require a square matrix");
  }
  std::vector<Complex> eigs;
  if (d.rows() == 0) return eigs;
  Eigen::EigenSolver<Matrix> solver(d, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue iteration did not converge");
  }
  const auto& values = solver.eigenvalues();
  eigs.assign(values.data(), values.data() + values.size());
  std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return eigs;
}

std::vector<EigenCluster> ClusterEigenvalues(const std::vector<Complex>& eigs,
                                             double radius) {
  const int n = static_cast<int>(eigs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(eigs[i] - eigs[j]) <= radius) {
        const int a = find(i);
        const int b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<EigenCluster> clusters;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    EigenCluster& c = clusters[slot[root]];
    c.center += eigs[i];
    ++c.multiplicity;
  }
  for (EigenCluster& c : clusters) {
    c.center /= static_cast<double>(c.multiplicity);
  }
  return clusters;
}

int MinPolyDegree(const Matrix& d, const Tolerance& tol) {
  if (d.rows() != d.cols()) {
    throw InputError("minimal polynomial requires a square matrix");
  }
  const int n = static_cast<int>(d.rows());
  if (n == 0) return 1;
  if (tol.exact_rational) {
    return exact::MinPolyDegree(exact::RationalMatrix::FromDouble(d));
  }
  const double scale = SpectralNorm(d);
  if (scale == 0.0) return 1;
  // Scaling D does not change the degree; it keeps the powers comparable to I.
  const Matrix dn = d / scale;
  Matrix powers(n * n, n + 1);
  Matrix current = Matrix::Identity(n, n);
  powers.col(0) = current.reshaped();
  for (int q = 1; q <= n; ++q) {
    current = current * dn;
    powers.col(q) = current.reshaped();
    if (Rank(powers.leftCols(q + 1), tol) < q + 1) return q;
  }
  return n;
}

int MaxGeometricMultiplicity(const Matrix& d, const Tolerance& tol) {
  const int n = static_cast<int>(d.rows());
  if (n == 0) return 0;
  const Tolerance ftol = tol.Floating();
  const Matrix no_inputs(n, 0);
  const Matrix identity_premul(0, 0);
  int best = 0;
  for (const EigenCluster& c :
       ClusterEigenvalues(Eigenvalues(d), tol.eig_cluster)) {
    const PencilProbe probe =
        ProbePencil(d, no_inputs, identity_premul, c.center, ftol);
    best = std::max(best, n - probe.rank);
  }
  return std::max(best, 1);
}

Matrix ControllabilityMatrix(const Matrix& d, const Matrix& h, int k) {
  if (d.rows() != d.cols()) throw InputError("D must be square");
  if (h.rows() != d.rows()) throw InputError("H must have N rows");
  if (k < 1) throw InputError("K must be positive");
  const Eigen::Index l = h.cols();
  Matrix out(d.rows(), k * l);
  Matrix block = h;
  for (int j = k; j >= 1; --j) {
    out.middleCols((j - 1) * l, l) = block;
    if (j > 1) block = d * block;
  }
  return out;
}

Matrix OrthonormalColumnBasis(const Matrix& m, const Tolerance& tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  const int r = Rank(m, tol.Floating());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  Matrix basis = svd.matrixU().leftCols(r);
  NormalizeColumnSigns(&basis);
  return basis;
}

Matrix ExtendToBasis(const Matrix& b, const Tolerance& tol) {
  const Tolerance ftol = tol.Floating();
  const Eigen::Index n = b.rows();
  Matrix basis = OrthonormalColumnBasis(b, ftol);
  for (Eigen::Index i = 0; i < n && basis.cols() < n; ++i) {
    Matrix candidate(n, basis.cols() + 1);
    candidate << basis, Matrix::Identity(n, n).col(i);
    if (Rank(candidate, ftol) > basis.cols()) basis = std::move(candidate);
  }
  return basis;
}

CoreNilpotentSplit CoreNilpotent(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) {
    throw InputError("core-nilpotent split requires a square matrix");
  }
  const Tolerance ftol = tol.Floating();
  const int n = static_cast<int>(m.rows());
  CoreNilpotentSplit out;
  out.rank = Rank(m, ftol);
  if (n == 0) return out;

  const double norm = SpectralNorm(m);
  const double abs_threshold =
      ftol.rank_rel * std::max(norm, 1e-300) * static_cast<double>(n);

  // Kernel chain null(M) subset null(M^2) subset ... ; its limit is the
  // nilpotent subspace null(M^n).
  Matrix kernel = NullBasisAbs(m, abs_threshold);
  for (int step = 1; step < n; ++step) {
    const Matrix complement_projector =
        Matrix::Identity(n, n) - kernel * kernel.transpose();
    Matrix next = NullBasisAbs(complement_projector * m, abs_threshold);
    if (next.cols() == kernel.cols()) break;
    kernel = std::move(next);
  }
  out.core_dim = n - static_cast<int>(kernel.cols());
  out.rank_mismatch = out.rank != out.core_dim;

  if (out.core_dim == n || out.core_dim == 0) {
    out.v = Matrix::Identity(n, n);
    out.core = out.core_dim == n ? m : Matrix(0, 0);
    out.nilpotent = out.core_dim == n ? Matrix(0, 0) : m;
    return out;
  }

  // Range chain range(M) superset range(M^2) superset ... ; its limit is the
  // core subspace range(M^n).
  Matrix range = RangeBasisAbs(m, abs_threshold, out.core_dim);
  for (int step = 1; step < n; ++step) {
    range = RangeBasisAbs(m * range, abs_threshold, out.core_dim);
  }
  if (range.cols() != out.core_dim) {
    range = range.leftCols(out.core_dim).eval();
  }

  out.v.resize(n, n);
  out.v << range, kernel;
  const Matrix transformed = out.v.partialPivLu().solve(m * out.v);
  out.core = transformed.topLeftCorner(out.core_dim, out.core_dim);
  out.nilpotent =
      transformed.bottomRightCorner(n - out.core_dim, n - out.core_dim);
  return out;
}

PencilProbe EvaluatePencil(const Matrix& d, const Matrix& h,
                           const Matrix& premul, Complex lambda,
                           const Tolerance& tol) {
  const Eigen::Index n = d.rows();
  ComplexMatrix pencil(n, n + h.cols());
  pencil.leftCols(n) = lambda * ComplexMatrix::Identity(n, n) -
                       d.cast<Complex>();
  pencil.rightCols(h.cols()) = h.cast<Complex>();
  double sigma_ref = 0.0;
  if (premul.rows() > 0) {
    // Rank the product against its factors, not against its own roundoff.
    sigma_ref = SpectralNorm(premul) *
                Eigen::JacobiSVD<ComplexMatrix>(pencil).singularValues()(0);
    pencil = premul.cast<Complex>() * pencil;
  }

  PencilProbe probe;
  probe.lambda = lambda;
  probe.rows = static_cast<int>(pencil.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(pencil, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double sigma_max =
      sigma_ref > 0.0 ? sigma_ref : (sv.size() > 0 ? sv(0) : 0.0);
  if (sigma_max > 0.0) {
    const double threshold =
        tol.rank_rel * sigma_max *
        static_cast<double>(std::max(pencil.rows(), pencil.cols()));
    probe.rank = CountAbove(sv, threshold);
  }
  probe.sigma_min =
      pencil.rows() <= pencil.cols() && sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  probe.z = svd.matrixU().col(pencil.rows() - 1).conjugate();
  NormalizePhase(&probe.z);
  return probe;
}

PencilProbe ProbePencil(const Matrix& d, const Matrix& h, const Matrix& premul,
                        Complex lambda, const Tolerance& tol) {
  constexpr int kMaxSteps = 16;
  const PencilProbe start = EvaluatePencil(d, h, premul, lambda, tol);
  if (start.deficient()) return start;
  const ComplexMatrix dc = d.cast<Complex>();
  PencilProbe current = start;
  for (int step = 0; step < kMaxSteps; ++step) {
    // Row vector w = z^T P; a left eigenvector of D satisfies w D = lambda w.
    ComplexVector w = premul.rows() > 0
                          ? ComplexVector(premul.cast<Complex>().transpose() *
                                          current.z)
                          : current.z;
    const double weight = w.squaredNorm();
    if (weight == 0.0) break;
    const Complex next =
        (w.transpose() * dc * w.conjugate())(0, 0) / weight;
    if (std::abs(next - current.lambda) <=
        1e-15 * (1.0 + std::abs(current.lambda))) {
      break;
    }
    current = EvaluatePencil(d, h, premul, next, tol);
    if (current.deficient()) return current;
  }
  return start;
}

}  // namespace sparse_ctrb
