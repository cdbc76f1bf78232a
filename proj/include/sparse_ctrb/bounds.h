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

#ifndef SPARSE_CTRB_BOUNDS_H_
#define SPARSE_CTRB_BOUNDS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/system.h"

// Lower and upper bounds on K*, the least number of (s-sparse) input vectors
// that steer the system between arbitrary states or outputs.
namespace sparse_ctrb {

enum class BoundsVariant {
  kUnconstrained,
  kSparse,
  kSparseRelaxed,
  kOutput,
  kCommonSupport,
};

std::string_view BoundsVariantName(BoundsVariant v);

struct KStarBounds {
  int lower = 0;
  int upper = 0;
  // Degree of the minimal polynomial of D.
  int q = 0;
  std::optional<int> s_star;
  // min{rank(H), s}, or min{rank(AH), s} for the output variant; rank(H)
  // for the unconstrained variant.
  int r_star = 0;
  // lower = ceil(lower_num / lower_den).
  int lower_num = 0;
  int lower_den = 1;
  std::optional<int> sparsity;
  BoundsVariant variant = BoundsVariant::kUnconstrained;
};

struct SStarOptions {
  // Largest subset size to try; 0 means L.
  int size_cap = 0;
  std::optional<double> deadline_seconds;
};

struct SStarResult {
  int s_star = 0;
  // Lexicographically first support of size s_star.
  std::vector<int> support;
};

// Smallest |S| with (D, H_S) controllable. Throws PreconditionError when the
// system is uncontrollable ("S* undefined") and BudgetExceededError when the
// size cap or deadline is hit first.
SStarResult SStar(const SystemModel& sys, const Tolerance& tol,
                  const SStarOptions& options = {});

// Every bounds operation throws PreconditionError when its controllability
// precondition fails.
KStarBounds KStarBoundsUnconstrained(const SystemModel& sys,
                                     const Tolerance& tol);

KStarBounds KStarBoundsSparse(const SystemModel& sys, int s,
                              const Tolerance& tol,
                              const SStarOptions& options = {});

// Avoids S* by using S* <= rank(H).
KStarBounds KStarBoundsRelaxed(const SystemModel& sys, int s,
                               const Tolerance& tol);

// Requires an output matrix. Output s-sparse controllability has no complete
// test, so only the necessary conditions are enforced.
KStarBounds OutputKStarBounds(const SystemModel& sys, int s,
                              const Tolerance& tol);

KStarBounds CommonSupportKStarBounds(const SystemModel& sys, int s,
                                     const Tolerance& tol);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_BOUNDS_H_
