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

#ifndef SPARSE_CTRB_SYSTEM_H_
#define SPARSE_CTRB_SYSTEM_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparse_ctrb/matcore.h"

namespace sparse_ctrb {

/// Discrete-time linear system x_k = D x_{k-1} + H h_k with optional output
/// y_k = A x_k. Immutable once constructed.
class SystemModel {
 public:
  /// Throws InputError on empty, non-finite or inconsistently sized matrices.
  /// An output matrix with m >= N is accepted with a warning.
  SystemModel(Matrix d, Matrix h, std::optional<Matrix> a = std::nullopt,
              std::string name = {});

  const Matrix& D() const { return d_; }
  const Matrix& H() const { return h_; }
  bool has_output() const { return a_.has_value(); }
  /// Throws InputError when the system has no output matrix.
  const Matrix& A() const;

  int N() const { return static_cast<int>(d_.rows()); }
  int L() const { return static_cast<int>(h_.cols()); }
  /// Output dimension, 0 without an output matrix.
  int m() const { return a_ ? static_cast<int>(a_->rows()) : 0; }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Same D and A with the input matrix restricted to `columns`.
  SystemModel WithInputColumns(std::span<const int> columns) const;
  SystemModel WithInputMatrix(Matrix h) const;

  /// Throws InputError unless 1 <= s <= L.
  void RequireSparsity(int s) const;

 private:
  Matrix d_;
  Matrix h_;
  std::optional<Matrix> a_;
  std::string name_;
  std::vector<std::string> warnings_;
};

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_SYSTEM_H_
