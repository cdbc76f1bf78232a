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

#include "sparse_ctrb/ctrb.h"

#include <algorithm>
#include <cmath>

#include "sparse_ctrb/combinations.h"
#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/exact.h"

namespace sparse_ctrb {

namespace {

using exact::RationalMatrix;

Matrix Normalized(const Matrix& m) {
  const double norm = SpectralNorm(m);
  return norm > 0.0 ? Matrix(m / norm) : m;
}

int ExactRank(const Matrix& m) {
  return exact::Rank(RationalMatrix::FromDouble(m));
}

int KrylovRank(const Matrix& d, const Matrix& h, const Matrix* premul,
               const Tolerance& tol) {
  const int n = static_cast<int>(d.rows());
  if (tol.exact_rational) {
    RationalMatrix krylov = exact::ControllabilityMatrix(
        RationalMatrix::FromDouble(d), RationalMatrix::FromDouble(h), n);
    if (premul) krylov = RationalMatrix::FromDouble(*premul) * krylov;
    return exact::Rank(std::move(krylov));
  }
  // Column scaling of the blocks leaves the rank unchanged.
  const Matrix krylov = ControllabilityMatrix(Normalized(d), Normalized(h), n);
  return premul ? ProductRank(*premul, krylov, tol) : Rank(krylov, tol);
}

// True when some nonzero w in rowspace(A) with w^T H = 0 spans a
// D^T-invariant subspace, i.e. A [lambda I - D, H] loses rank at an
// eigenvalue. Assumes rank(A) = m.
bool ExactOutputPencilDrops(const Matrix& d, const Matrix& h,
                            const Matrix& a) {
  const RationalMatrix dq = RationalMatrix::FromDouble(d);
  const RationalMatrix hq = RationalMatrix::FromDouble(h);
  const RationalMatrix aq = RationalMatrix::FromDouble(a);
  const RationalMatrix z = exact::NullSpace((aq * hq).Transpose());
  if (z.cols() == 0) return false;
  RationalMatrix basis = exact::IndependentColumns(aq.Transpose() * z);
  const RationalMatrix dt = dq.Transpose();
  while (basis.cols() > 0) {
    // Largest subspace of span(basis) mapped into span(basis) by D^T.
    RationalMatrix negated = basis;
    for (int i = 0; i < negated.rows(); ++i) {
      for (int j = 0; j < negated.cols(); ++j) negated(i, j) = -negated(i, j);
    }
    const RationalMatrix kernel =
        exact::NullSpace(RationalMatrix::HConcat(dt * basis, negated));
    RationalMatrix next =
        exact::IndependentColumns(basis * kernel.TopRows(basis.cols()));
    if (next.cols() == basis.cols()) return true;
    basis = std::move(next);
  }
  return false;
}

}  // namespace

ControllabilityReport PbhTest(const SystemModel& sys, const Tolerance& tol) {
  tol.Validate();
  ControllabilityReport report;
  report.tolerance_used = tol;
  report.rank_d = tol.exact_rational ? ExactRank(sys.D()) : Rank(sys.D(), tol);
  if (tol.exact_rational) {
    report.rank_condition_holds = KrylovRank(sys.D(), sys.H(), nullptr, tol) ==
                                  sys.N();
    report.verdict = report.rank_condition_holds;
    return report;
  }
  // Off the spectrum lambda I - D alone has rank N.
  const Matrix identity(0, 0);
  report.rank_condition_holds = true;
  for (const EigenCluster& cluster :
       ClusterEigenvalues(Eigenvalues(sys.D()), tol.eig_cluster)) {
    const PencilProbe probe =
        ProbePencil(sys.D(), sys.H(), identity, cluster.center, tol);
    if (probe.deficient()) {
      report.rank_condition_holds = false;
      report.witness_lambda = probe.lambda;
      report.witness_z = probe.z;
      break;
    }
  }
  report.verdict = report.rank_condition_holds;
  return report;
}

bool KalmanTest(const SystemModel& sys, const Tolerance& tol) {
  tol.Validate();
  return KrylovRank(sys.D(), sys.H(), nullptr, tol) == sys.N();
}

ControllabilityReport SparsePbhTest(const SystemModel& sys, int s,
                                    const Tolerance& tol) {
  sys.RequireSparsity(s);
  ControllabilityReport report = PbhTest(sys, tol);
  report.sparsity = s;
  report.slack = s + report.rank_d - sys.N();
  report.inequality_holds = *report.slack >= 0;
  report.verdict = report.rank_condition_holds && report.inequality_holds;
  return report;
}

CommonSupportResult CommonSupportTest(const SystemModel& sys, int s,
                                      const Tolerance& tol) {
  sys.RequireSparsity(s);
  tol.Validate();
  CommonSupportResult result;
  if (!tol.exact_rational) {
    result.screen_evaluated = true;
    const int rank_h = Rank(sys.H(), tol);
    const int rank_d = Rank(sys.D(), tol);
    result.max_geometric_multiplicity = MaxGeometricMultiplicity(sys.D(), tol);
    result.screen_passed =
        std::min(rank_h, s) >= result.max_geometric_multiplicity &&
        result.max_geometric_multiplicity >= sys.N() - rank_d;
    if (!result.screen_passed) return result;
  }
  ForEachCombination(sys.L(), s, [&](const std::vector<int>& support) {
    const SystemModel reduced = sys.WithInputColumns(support);
    const bool controllable = tol.exact_rational
                                  ? KalmanTest(reduced, tol)
                                  : PbhTest(reduced, tol).rank_condition_holds;
    if (!controllable) return true;
    result.verdict = true;
    result.witness_support = support;
    return false;
  });
  return result;
}

bool OutputKalmanTest(const SystemModel& sys, const Tolerance& tol) {
  tol.Validate();
  const Matrix& a = sys.A();
  return KrylovRank(sys.D(), sys.H(), &a, tol) == sys.m();
}

bool OutputPbhNecessary(const SystemModel& sys, const Tolerance& tol) {
  tol.Validate();
  const Matrix& a = sys.A();
  const int rank_a = tol.exact_rational ? ExactRank(a) : Rank(a, tol);
  if (rank_a < sys.m()) return false;
  if (tol.exact_rational) {
    return !ExactOutputPencilDrops(sys.D(), sys.H(), a);
  }
  const std::vector<Complex> eigs = Eigenvalues(sys.D());
  std::vector<Complex> probes;
  for (const EigenCluster& c : ClusterEigenvalues(eigs, tol.eig_cluster)) {
    probes.push_back(c.center);
  }
  double radius = 0.0;
  for (const Complex& e : eigs) radius = std::max(radius, std::abs(e));
  probes.emplace_back(1.0 + radius, 0.0);
  for (const Complex& lambda : probes) {
    if (ProbePencil(sys.D(), sys.H(), a, lambda, tol).deficient()) {
      return false;
    }
  }
  return true;
}

bool OutputSparseNecessary(const SystemModel& sys, int s,
                           const Tolerance& tol) {
  sys.RequireSparsity(s);
  const Matrix& a = sys.A();
  const int rank_ad =
      tol.exact_rational
          ? exact::Rank(RationalMatrix::FromDouble(a) *
                        RationalMatrix::FromDouble(sys.D()))
          : ProductRank(a, sys.D(), tol);
  if (s < sys.m() - rank_ad) return false;
  return OutputPbhNecessary(sys, tol);
}

}  // namespace sparse_ctrb
