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

#ifndef SPARSE_CTRB_CTRB_H_
#define SPARSE_CTRB_CTRB_H_

#include <optional>
#include <vector>

#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/system.h"

namespace sparse_ctrb {

struct ControllabilityReport {
  // rank_condition_holds && inequality_holds.
  bool verdict = false;
  // rank([lambda I - D, H]) = N for every lambda.
  bool rank_condition_holds = false;
  // N <= s + rank(D). Always true for the unconstrained test.
  bool inequality_holds = true;
  // First failing eigenvalue and z with z^T [lambda I - D, H] ~ 0. Absent in
  // exact mode, where the rank condition is decided on the Krylov matrix.
  std::optional<Complex> witness_lambda;
  std::optional<ComplexVector> witness_z;
  // s + rank(D) - N; only set by the sparse test.
  std::optional<int> slack;
  std::optional<int> sparsity;
  int rank_d = 0;
  Tolerance tolerance_used;
};

// Classical PBH test, evaluated at the clustered eigenvalues of D.
ControllabilityReport PbhTest(const SystemModel& sys, const Tolerance& tol);

// rank([D^{N-1} H, ..., H]) = N.
bool KalmanTest(const SystemModel& sys, const Tolerance& tol);

// s-sparse controllability: the PBH rank condition plus N <= s + rank(D).
// Throws InputError unless 1 <= s <= L.
ControllabilityReport SparsePbhTest(const SystemModel& sys, int s,
                                    const Tolerance& tol);

struct CommonSupportResult {
  bool verdict = false;
  // Lexicographically first support S (0-based, |S| = s) with (D, H_S)
  // controllable.
  std::optional<std::vector<int>> witness_support;
  // Necessary screen min{rank(H), s} >= g_D >= N - rank(D). Skipped in
  // exact mode (it needs eigenvalues).
  bool screen_evaluated = false;
  bool screen_passed = true;
  int max_geometric_multiplicity = 0;
};

CommonSupportResult CommonSupportTest(const SystemModel& sys, int s,
                                      const Tolerance& tol);

// rank(A [D^{N-1} H, ..., H]) = m. Throws InputError without A.
bool OutputKalmanTest(const SystemModel& sys, const Tolerance& tol);

// Necessary condition for output controllability: rank(A [lambda I - D, H])
// = m for every lambda. Throws InputError without A.
bool OutputPbhNecessary(const SystemModel& sys, const Tolerance& tol);

// Necessary condition for output s-sparse controllability: s >= m - rank(AD)
// together with OutputPbhNecessary. false disproves output
// s-sparse-controllability; true is inconclusive.
bool OutputSparseNecessary(const SystemModel& sys, int s,
                           const Tolerance& tol);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_CTRB_H_
