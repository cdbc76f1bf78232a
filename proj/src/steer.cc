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

#include "sparse_ctrb/steer.h"

#include <algorithm>
#include <string>

#include "sparse_ctrb/errors.h"

namespace sparse_ctrb {

namespace {

Matrix Normalized(const Matrix& m) {
  const double norm = SpectralNorm(m);
  return norm > 0.0 ? Matrix(m / norm) : m;
}

void RequireLength(const Vector& v, int n, const char* what) {
  if (v.size() != n) {
    throw InputError(std::string(what) + " must have " + std::to_string(n) +
                     " entries");
  }
  RequireFinite(v, what);
}

Vector MinNormSolve(const Matrix& m, const Vector& rhs, const Tolerance& tol) {
  if (m.cols() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0
                            ? tol.rank_rel * sigma(0) *
                                  static_cast<double>(std::max(m.rows(),
                                                               m.cols()))
                            : 0.0;
  Vector coeffs = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    coeffs(i) = sigma(i) > cutoff && sigma(i) > 0.0 ? coeffs(i) / sigma(i)
                                                    : 0.0;
  }
  return svd.matrixV() * coeffs;
}

std::vector<Vector> ScatterInputs(const SupportSchedule& sched, int l,
                                  const Vector& coeffs) {
  std::vector<Vector> inputs;
  int pos = 0;
  for (const auto& support : sched.supports) {
    Vector h = Vector::Zero(l);
    for (int idx : support) h(idx) = coeffs(pos++);
    inputs.push_back(std::move(h));
  }
  return inputs;
}

Matrix MatrixPower(const Matrix& d, int k) {
  Matrix out = Matrix::Identity(d.rows(), d.cols());
  for (int i = 0; i < k; ++i) out = d * out;
  return out;
}

// Shared body of the state and output solvers; `premul` is null for state
// targets.
SteeringPlan Solve(const SystemModel& sys, const SupportSchedule& sched,
                   const Vector& x_init, const Vector& target,
                   const Matrix* premul, const Tolerance& tol) {
  tol.Validate();
  sched.Validate(sys.L());
  RequireLength(x_init, sys.N(), "x_init");
  const int k = sched.length();
  SteeringPlan plan;
  plan.schedule = sched;
  Matrix m = ScheduleSubmatrix(sys, sched);
  Vector rhs = target - (premul ? Vector(*premul * MatrixPower(sys.D(), k) *
                                         x_init)
                                : Vector(MatrixPower(sys.D(), k) * x_init));
  if (premul) m = *premul * m;
  const Vector coeffs = MinNormSolve(m, rhs, tol.Floating());
  plan.inputs = ScatterInputs(sched, sys.L(), coeffs);
  plan.trajectory = Rollout(sys, plan.inputs, x_init);
  const Vector& reached = plan.trajectory.back();
  plan.residual = premul ? (*premul * reached - target).norm()
                         : (reached - target).norm();
  return plan;
}

}  // namespace

SupportSchedule GreedySupportSchedule(const SystemModel& sys, int s, int k,
                                      const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  if (k < 0) throw InputError("K must be nonnegative");
  const Tolerance ftol = tol.Floating();
  const int n = sys.N();
  const Matrix dn = Normalized(sys.D());
  SupportSchedule sched;
  sched.s = s;
  sched.supports.assign(k, {});
  Matrix accumulated(n, 0);
  int rank = 0;
  Matrix block = Normalized(sys.H());
  for (int i = k - 1; i >= 0 && rank < n; --i) {
    std::vector<int>& support = sched.supports[i];
    std::vector<bool> used(sys.L(), false);
    while (static_cast<int>(support.size()) < s && rank < n) {
      // Smallest index raising the rank, else the smallest unused index.
      int pick = -1;
      Matrix picked;
      for (int col = 0; col < sys.L(); ++col) {
        if (used[col]) continue;
        Matrix candidate(n, accumulated.cols() + 1);
        candidate << accumulated, block.col(col);
        if (Rank(candidate, ftol) > rank) {
          pick = col;
          picked = std::move(candidate);
          break;
        }
        if (pick < 0) {
          pick = col;
          picked = std::move(candidate);
        }
      }
      used[pick] = true;
      support.push_back(pick);
      accumulated = std::move(picked);
      rank = Rank(accumulated, ftol);
    }
    std::sort(support.begin(), support.end());
    block = dn * block;
  }
  return sched;
}

SteeringPlan SolveInputs(const SystemModel& sys, const SupportSchedule& sched,
                         const Vector& x_init, const Vector& x_final,
                         const Tolerance& tol) {
  RequireLength(x_final, sys.N(), "x_final");
  return Solve(sys, sched, x_init, x_final, nullptr, tol);
}

SteeringPlan SolveOutputInputs(const SystemModel& sys,
                               const SupportSchedule& sched,
                               const Vector& x_init, const Vector& y_final,
                               const Tolerance& tol) {
  const Matrix& a = sys.A();
  RequireLength(y_final, sys.m(), "y_final");
  return Solve(sys, sched, x_init, y_final, &a, tol);
}

std::vector<Vector> Rollout(const SystemModel& sys,
                            const std::vector<Vector>& inputs,
                            const Vector& x_init) {
  RequireLength(x_init, sys.N(), "x_init");
  std::vector<Vector> trajectory{x_init};
  for (const Vector& h : inputs) {
    RequireLength(h, sys.L(), "input vector");
    trajectory.push_back(sys.D() * trajectory.back() + sys.H() * h);
  }
  return trajectory;
}

}  // namespace sparse_ctrb
