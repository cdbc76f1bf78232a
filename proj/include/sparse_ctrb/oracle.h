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

#ifndef SPARSE_CTRB_ORACLE_H_
#define SPARSE_CTRB_ORACLE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/system.h"

// Brute-force ground truth for sparse controllability: exhaustive search over
// support schedules of the Kalman-type submatrix
//   [D^{K-1} H_{S_1}, D^{K-2} H_{S_2}, ..., H_{S_K}].
// Cost is exponential in K; intended for small systems only.
namespace sparse_ctrb {

/// Ordered supports S_1..S_K, 0-based and sorted, each of size at most s.
struct SupportSchedule {
  std::vector<std::vector<int>> supports;
  int s = 0;

  int length() const { return static_cast<int>(supports.size()); }
  /// Throws InputError on unsorted, duplicate or out-of-range indices, or on
  /// a support larger than s.
  void Validate(int num_inputs) const;

  friend bool operator==(const SupportSchedule&,
                         const SupportSchedule&) = default;
};

struct OracleBudget {
  // Largest schedule length to consider; 0 selects the operation's default.
  int max_k = 0;
  // Rank evaluations allowed per call.
  std::int64_t max_enumerations = 20'000'000;
  std::optional<double> deadline_seconds;
  // Disable to enumerate every full-length schedule (for cross-checking).
  bool prune = true;
};

enum class OracleOutcome { kFalse, kTrue, kInconclusive };

struct ScheduleSearchResult {
  OracleOutcome outcome = OracleOutcome::kFalse;
  std::optional<SupportSchedule> witness;
  std::int64_t enumerations = 0;
};

struct MinKResult {
  // kTrue: `k` holds the minimum; kFalse: no schedule up to max_k.
  OracleOutcome outcome = OracleOutcome::kFalse;
  std::optional<int> k;
  std::optional<SupportSchedule> witness;
  int max_k = 0;
  std::int64_t enumerations = 0;
};

struct RStarResult {
  // kTrue when every requested value was computed.
  OracleOutcome outcome = OracleOutcome::kTrue;
  std::vector<int> values;
  std::int64_t enumerations = 0;
};

// N x (sum |S_i|) matrix whose block i is D^{K-i} H_{S_i}.
Matrix ScheduleSubmatrix(const SystemModel& sys, const SupportSchedule& sched);

// Some schedule of length K with |S_i| = s gives rank N. The witness is the
// lexicographically first such schedule.
ScheduleSearchResult KalmanTypeRankTest(const SystemModel& sys, int s, int k,
                                        const OracleBudget& budget,
                                        const Tolerance& tol);

// Same with the A-premultiplied submatrix and target rank m.
ScheduleSearchResult OutputKalmanTypeRankTest(const SystemModel& sys, int s,
                                              int k,
                                              const OracleBudget& budget,
                                              const Tolerance& tol);

// Default search length: the sparse upper bound on K* when the fast test
// passes, otherwise N * ceil(L / s).
int DefaultOracleMaxK(const SystemModel& sys, int s, const Tolerance& tol);

// Smallest K <= max_k passing KalmanTypeRankTest.
MinKResult ExactMinK(const SystemModel& sys, int s, const OracleBudget& budget,
                     const Tolerance& tol);

// Output analogue; default max_k is N * ceil(L / s).
MinKResult ExactMinKOutput(const SystemModel& sys, int s,
                           const OracleBudget& budget, const Tolerance& tol);

// Smallest K reachable with a constant support S (|S| = s) at every step.
// The witness repeats the winning support. Default max_k is N.
MinKResult ExactMinKCommonSupport(const SystemModel& sys, int s,
                                  const OracleBudget& budget,
                                  const Tolerance& tol);

// R*_(K) = max rank over length-K schedules, for K = 1..k_max.
RStarResult RStarSequence(const SystemModel& sys, int s, int k_max,
                          const OracleBudget& budget, const Tolerance& tol);

// ceil(L / s) consecutive supports of size s covering {0..L-1}; the last one
// is padded from the tail.
SupportSchedule PartitionSchedule(int num_inputs, int s);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_ORACLE_H_
