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

#ifndef SPARSE_CTRB_DECOMP_H_
#define SPARSE_CTRB_DECOMP_H_

#include <string>
#include <string_view>
#include <vector>

#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/system.h"

// Standard form separating the state into s-sparse-controllable,
// controllable but not s-sparse-controllable, and uncontrollable coordinates.
namespace sparse_ctrb {

enum class CoordinateClass {
  kSparseControllable,
  kSparseUncontrollable,
  kUncontrollable,
};

std::string_view CoordinateClassName(CoordinateClass c);

struct DecompositionResult {
  // Completed basis of the controllable subspace.
  Matrix u;
  // blockdiag(V, I): V splits the controllable block into core and
  // nilpotent parts.
  Matrix w;
  // (UW)^{-1} D (UW) and (UW)^{-1} H.
  Matrix d_bar;
  Matrix h_bar;
  int controllable_dim = 0;  // R
  int core_dim = 0;          // r
  int sparse_dim = 0;        // R_s = r + min(s, R - r)
  int s = 0;
  std::vector<CoordinateClass> classification;
  // The zero eigenvalue of the controllable block is not semisimple; the
  // nilpotent block is then nonzero.
  bool core_rank_mismatch = false;
  std::vector<std::string> warnings;
};

// Always computed in floating point; exact_rational only adds a warning.
DecompositionResult StandardForm(const SystemModel& sys, int s,
                                 const Tolerance& tol);

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;

  bool passed() const;
};

// Checks similarity residuals, the zero-block pattern of D_bar, that the
// leading R_s coordinates form an s-sparse-controllable subsystem, and that
// inputs never reach the uncontrollable coordinates. Throws InputError when
// `res` does not match the dimensions of `sys`.
VerificationReport VerifyStandardForm(const SystemModel& sys,
                                      const DecompositionResult& res,
                                      const Tolerance& tol);

// (T^{-1} D T, T^{-1} H, A T). Throws InputError for a singular or
// misshapen T.
SystemModel TransformSystem(const SystemModel& sys, const Matrix& t);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_DECOMP_H_
