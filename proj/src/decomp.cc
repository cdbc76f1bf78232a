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

#include "sparse_ctrb/decomp.h"

#include <algorithm>
#include <cmath>

#include "sparse_ctrb/ctrb.h"
#include "sparse_ctrb/errors.h"

namespace sparse_ctrb {

namespace {

Matrix Normalized(const Matrix& m) {
  const double norm = SpectralNorm(m);
  return norm > 0.0 ? Matrix(m / norm) : m;
}

double MaxAbs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

std::string_view CoordinateClassName(CoordinateClass c) {
  switch (c) {
    case CoordinateClass::kSparseControllable:
      return "sparse_controllable";
    case CoordinateClass::kSparseUncontrollable:
      return "sparse_uncontrollable";
    case CoordinateClass::kUncontrollable:
      return "uncontrollable";
  }
  return "unknown";
}

DecompositionResult StandardForm(const SystemModel& sys, int s,
                                 const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  const Tolerance ftol = tol.Floating();
  const int n = sys.N();

  DecompositionResult res;
  res.s = s;
  if (tol.exact_rational) {
    res.warnings.push_back(
        "decomposition is computed in floating point; exact mode ignored");
  }

  // Normalizing D and H rescales Krylov columns only; the span is unchanged.
  const Matrix krylov =
      ControllabilityMatrix(Normalized(sys.D()), Normalized(sys.H()), n);
  res.controllable_dim = Rank(krylov, ftol);
  res.u = ExtendToBasis(krylov, ftol);
  const int big_r = res.controllable_dim;

  const auto u_lu = res.u.partialPivLu();
  const Matrix d_check = u_lu.solve(sys.D() * res.u);
  const CoreNilpotentSplit split =
      CoreNilpotent(d_check.topLeftCorner(big_r, big_r), ftol);
  res.core_dim = split.core_dim;
  res.core_rank_mismatch = split.rank_mismatch;
  if (split.rank_mismatch) {
    res.warnings.push_back(
        "zero eigenvalue of the controllable block is not semisimple");
  }

  res.w = Matrix::Identity(n, n);
  if (big_r > 0) res.w.topLeftCorner(big_r, big_r) = split.v;
  const Matrix t = res.u * res.w;
  const auto t_lu = t.partialPivLu();
  res.d_bar = t_lu.solve(sys.D() * t);
  res.h_bar = t_lu.solve(sys.H());

  res.sparse_dim = res.core_dim + std::min(s, big_r - res.core_dim);
  res.classification.assign(n, CoordinateClass::kUncontrollable);
  for (int i = 0; i < big_r; ++i) {
    res.classification[i] = i < res.sparse_dim
                                ? CoordinateClass::kSparseControllable
                                : CoordinateClass::kSparseUncontrollable;
  }
  return res;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerificationCheck& c) { return c.passed; });
}

VerificationReport VerifyStandardForm(const SystemModel& sys,
                                      const DecompositionResult& res,
                                      const Tolerance& tol) {
  tol.Validate();
  const int n = sys.N();
  const int l = sys.L();
  if (res.u.rows() != n || res.u.cols() != n || res.w.rows() != n ||
      res.w.cols() != n || res.d_bar.rows() != n || res.d_bar.cols() != n ||
      res.h_bar.rows() != n || res.h_bar.cols() != l) {
    throw InputError("decomposition does not match the system dimensions");
  }
  const int big_r = res.controllable_dim;
  const int r = res.core_dim;
  const int rs = res.sparse_dim;
  if (big_r < 0 || big_r > n || r < 0 || r > big_r || rs < r || rs > big_r) {
    throw InputError("decomposition dimensions are inconsistent");
  }
  const Tolerance ftol = tol.Floating();
  const double eps = tol.residual_abs;
  VerificationReport report;
  auto add = [&report, eps](std::string name, double residual) {
    report.checks.push_back({std::move(name), residual <= eps, residual});
  };

  const Matrix t = res.u * res.w;
  const double t_norm = std::max(SpectralNorm(t), 1e-300);
  const double d_scale = std::max(1.0, SpectralNorm(sys.D()));
  const double h_scale = std::max(1.0, SpectralNorm(sys.H()));
  add("similarity_d",
      (t * res.d_bar - sys.D() * t).norm() / (t_norm * d_scale));
  add("similarity_h", (t * res.h_bar - sys.H()).norm() / (t_norm * h_scale));

  const double bar_scale = std::max(1.0, SpectralNorm(res.d_bar));
  const int nil = big_r - r;
  const int unc = n - big_r;
  double zero_blocks = 0.0;
  zero_blocks = std::max(zero_blocks, MaxAbs(res.d_bar.block(0, r, r, nil)));
  zero_blocks = std::max(zero_blocks, MaxAbs(res.d_bar.block(r, 0, nil, r)));
  zero_blocks =
      std::max(zero_blocks, MaxAbs(res.d_bar.block(big_r, 0, unc, big_r)));
  add("zero_blocks", zero_blocks / bar_scale);

  double nilpotency = 0.0;
  if (nil > 0) {
    const Matrix block = res.d_bar.block(r, r, nil, nil) / bar_scale;
    Matrix power = block;
    for (int i = 1; i < nil; ++i) power = power * block;
    nilpotency = MaxAbs(power);
  }
  add("nilpotent_block", nilpotency);

  bool sub_ok = true;
  if (rs > 0) {
    const SystemModel leading(res.d_bar.topLeftCorner(rs, rs),
                              res.h_bar.topRows(rs));
    sub_ok = SparsePbhTest(leading, res.s, ftol).verdict;
  }
  report.checks.push_back({"sparse_subsystem", sub_ok, 0.0});

  add("input_free_uncontrollable",
      MaxAbs(res.h_bar.bottomRows(unc)) / h_scale);
  return report;
}

SystemModel TransformSystem(const SystemModel& sys, const Matrix& t) {
  const int n = sys.N();
  if (t.rows() != n || t.cols() != n) {
    throw InputError("transform must be N x N");
  }
  RequireFinite(t, "transform");
  const Eigen::FullPivLU<Matrix> lu(t);
  if (!lu.isInvertible()) throw InputError("transform is singular");
  Matrix d = lu.solve(sys.D() * t);
  Matrix h = lu.solve(sys.H());
  std::optional<Matrix> a;
  if (sys.has_output()) a = sys.A() * t;
  return SystemModel(std::move(d), std::move(h), std::move(a), sys.name());
}

}  // namespace sparse_ctrb
