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

#include "sparse_ctrb/bounds.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "sparse_ctrb/combinations.h"
#include "sparse_ctrb/ctrb.h"
#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/exact.h"

namespace sparse_ctrb {

namespace {

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

KStarBounds Make(BoundsVariant variant, int target, int r_star, int q,
                 int upper) {
  KStarBounds b;
  b.variant = variant;
  b.q = q;
  b.r_star = r_star;
  b.lower_num = target;
  b.lower_den = r_star;
  b.lower = CeilDiv(target, r_star);
  b.upper = upper;
  return b;
}

void RequireControllable(const SystemModel& sys, const Tolerance& tol) {
  if (!PbhTest(sys, tol).verdict) {
    throw PreconditionError("system is not controllable");
  }
}

void RequireSparseControllable(const SystemModel& sys, int s,
                               const Tolerance& tol) {
  if (!SparsePbhTest(sys, s, tol).verdict) {
    throw PreconditionError("system is not " + std::to_string(s) +
                            "-sparse-controllable");
  }
}

int OutputInputRank(const SystemModel& sys, const Tolerance& tol) {
  if (tol.exact_rational) {
    using exact::RationalMatrix;
    return exact::Rank(RationalMatrix::FromDouble(sys.A()) *
                       RationalMatrix::FromDouble(sys.H()));
  }
  return ProductRank(sys.A(), sys.H(), tol);
}

}  // namespace

std::string_view BoundsVariantName(BoundsVariant v) {
  switch (v) {
    case BoundsVariant::kUnconstrained:
      return "unconstrained";
    case BoundsVariant::kSparse:
      return "sparse";
    case BoundsVariant::kSparseRelaxed:
      return "sparse_relaxed";
    case BoundsVariant::kOutput:
      return "output";
    case BoundsVariant::kCommonSupport:
      return "common_support";
  }
  return "unknown";
}

SStarResult SStar(const SystemModel& sys, const Tolerance& tol,
                  const SStarOptions& options) {
  tol.Validate();
  if (!PbhTest(sys, tol).verdict) {
    throw PreconditionError("S* undefined: system is not controllable");
  }
  const int cap = options.size_cap > 0 ? std::min(options.size_cap, sys.L())
                                       : sys.L();
  const auto start = std::chrono::steady_clock::now();
  auto expired = [&] {
    if (!options.deadline_seconds) return false;
    const std::chrono::duration<double> spent =
        std::chrono::steady_clock::now() - start;
    return spent.count() > *options.deadline_seconds;
  };
  bool out_of_time = false;
  for (int size = 1; size <= cap; ++size) {
    std::optional<std::vector<int>> found;
    ForEachCombination(sys.L(), size, [&](const std::vector<int>& subset) {
      if (expired()) {
        out_of_time = true;
        return false;
      }
      if (PbhTest(sys.WithInputColumns(subset), tol).verdict) {
        found = subset;
        return false;
      }
      return true;
    });
    if (found) return {size, *found};
    if (out_of_time) break;
  }
  throw BudgetExceededError(out_of_time ? "S* search exceeded its deadline"
                                        : "S* exceeds the size cap " +
                                              std::to_string(cap));
}

KStarBounds KStarBoundsUnconstrained(const SystemModel& sys,
                                     const Tolerance& tol) {
  tol.Validate();
  RequireControllable(sys, tol);
  const int n = sys.N();
  const int r_h = DecisionRank(sys.H(), tol);
  const int q = MinPolyDegree(sys.D(), tol);
  return Make(BoundsVariant::kUnconstrained, n, r_h, q,
              std::min(q, n - r_h + 1));
}

KStarBounds KStarBoundsSparse(const SystemModel& sys, int s,
                              const Tolerance& tol,
                              const SStarOptions& options) {
  tol.Validate();
  if (!PbhTest(sys, tol).verdict) {
    throw PreconditionError("S* undefined: system is not controllable");
  }
  RequireSparseControllable(sys, s, tol);
  const int n = sys.N();
  const int r_star = std::min(DecisionRank(sys.H(), tol), s);
  const int q = MinPolyDegree(sys.D(), tol);
  const int s_star = SStar(sys, tol, options).s_star;
  KStarBounds b = Make(BoundsVariant::kSparse, n, r_star, q,
                       std::min(q * CeilDiv(s_star, s), n - r_star + 1));
  b.s_star = s_star;
  b.sparsity = s;
  return b;
}

KStarBounds KStarBoundsRelaxed(const SystemModel& sys, int s,
                               const Tolerance& tol) {
  tol.Validate();
  RequireSparseControllable(sys, s, tol);
  const int n = sys.N();
  const int r_h = DecisionRank(sys.H(), tol);
  const int r_d = DecisionRank(sys.D(), tol);
  const int q = MinPolyDegree(sys.D(), tol);
  const int r_star = std::min(r_h, s);
  KStarBounds b = Make(BoundsVariant::kSparseRelaxed, n, r_star, q,
                       std::min({q * CeilDiv(r_h, s), r_d + 1, n}));
  b.sparsity = s;
  return b;
}

KStarBounds OutputKStarBounds(const SystemModel& sys, int s,
                              const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  const int m = sys.A().rows();
  if (!OutputSparseNecessary(sys, s, tol)) {
    throw PreconditionError("system is not output " + std::to_string(s) +
                            "-sparse-controllable");
  }
  const int r_ah = OutputInputRank(sys, tol);
  if (r_ah == 0) {
    throw PreconditionError("output bounds undefined: rank(AH) = 0");
  }
  const int r_h = DecisionRank(sys.H(), tol);
  const int q = MinPolyDegree(sys.D(), tol);
  const int r_star = std::min(r_ah, s);
  KStarBounds b = Make(BoundsVariant::kOutput, m, r_star, q,
                       std::min(q * CeilDiv(r_h, s), m - r_star + 1));
  b.sparsity = s;
  if (b.lower > b.upper) {
    throw PreconditionError("output bounds are inconsistent for this system");
  }
  return b;
}

KStarBounds CommonSupportKStarBounds(const SystemModel& sys, int s,
                                     const Tolerance& tol) {
  tol.Validate();
  if (!CommonSupportTest(sys, s, tol).verdict) {
    throw PreconditionError("no common support of size " + std::to_string(s) +
                            " makes the system controllable");
  }
  const int n = sys.N();
  const int r_star = std::min(DecisionRank(sys.H(), tol), s);
  const int q = MinPolyDegree(sys.D(), tol);
  KStarBounds b = Make(BoundsVariant::kCommonSupport, n, r_star, q,
                       std::min(q, n - r_star + 1));
  b.sparsity = s;
  return b;
}

}  // namespace sparse_ctrb
