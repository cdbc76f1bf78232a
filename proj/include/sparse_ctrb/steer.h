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

#ifndef SPARSE_CTRB_STEER_H_
#define SPARSE_CTRB_STEER_H_

#include <vector>

#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/oracle.h"
#include "sparse_ctrb/system.h"

// Sparse input synthesis: pick supports, solve for minimum-norm inputs on
// them, and simulate x_k = D x_{k-1} + H h_k.
namespace sparse_ctrb {

struct SteeringPlan {
  SupportSchedule schedule;
  // h_1..h_K, each in R^L and zero outside its support.
  std::vector<Vector> inputs;
  // x_0..x_K.
  std::vector<Vector> trajectory;
  // Distance between the reached and the requested state (or output).
  double residual = 0.0;
};

// Walks from step K back to step 1 and, at each step, picks s columns of
// D^{K-i} H one at a time: the smallest index that raises the rank of the
// accumulated submatrix, or the smallest unused index when none does. Once
// the rank reaches N the remaining supports are left empty.
SupportSchedule GreedySupportSchedule(const SystemModel& sys, int s, int k,
                                      const Tolerance& tol);

// Minimum-norm least-squares inputs on the schedule's columns. An
// unreachable target is reported through the residual.
SteeringPlan SolveInputs(const SystemModel& sys, const SupportSchedule& sched,
                         const Vector& x_init, const Vector& x_final,
                         const Tolerance& tol);

// Same for an output target y_final = A x_K. Throws InputError without A.
SteeringPlan SolveOutputInputs(const SystemModel& sys,
                               const SupportSchedule& sched,
                               const Vector& x_init, const Vector& y_final,
                               const Tolerance& tol);

// x_0..x_K under the plan's inputs.
std::vector<Vector> Rollout(const SystemModel& sys,
                            const std::vector<Vector>& inputs,
                            const Vector& x_init);

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_STEER_H_
