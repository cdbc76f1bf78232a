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

#ifndef SPARSE_CTRB_ERRORS_H_
#define SPARSE_CTRB_ERRORS_H_

#include <stdexcept>

namespace sparse_ctrb {

// Malformed or inconsistent input: bad dimensions, non-finite entries,
// parameters out of range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is well formed but the requested quantity is undefined for it,
// e.g. S* of an uncontrollable system.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// A combinatorial search ran out of its enumeration or time budget. This is
// never a negative answer.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_ERRORS_H_
