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

#include "sparse_ctrb/system.h"

#include <utility>

#include "sparse_ctrb/errors.h"

namespace sparse_ctrb {

SystemModel::SystemModel(Matrix d, Matrix h, std::optional<Matrix> a,
                         std::string name)
    : d_(std::move(d)), h_(std::move(h)), a_(std::move(a)),
      name_(std::move(name)) {
  if (d_.rows() == 0 || d_.rows() != d_.cols()) {
    throw InputError("D must be a non-empty square matrix");
  }
  if (h_.rows() != d_.rows()) {
    throw InputError("H must have the same number of rows as D");
  }
  if (h_.cols() == 0) throw InputError("H must have at least one column");
  RequireFinite(d_, "D");
  RequireFinite(h_, "H");
  if (a_) {
    if (a_->rows() == 0) throw InputError("A must have at least one row");
    if (a_->cols() != d_.rows()) {
      throw InputError("A must have the same number of columns as D");
    }
    RequireFinite(*a_, "A");
    if (a_->rows() >= d_.rows()) {
      warnings_.push_back("output dimension m >= N; output tests assume m < N");
    }
  }
}

const Matrix& SystemModel::A() const {
  if (!a_) throw InputError("system has no output matrix A");
  return *a_;
}

SystemModel SystemModel::WithInputColumns(std::span<const int> columns) const {
  Matrix h(h_.rows(), static_cast<Eigen::Index>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] < 0 || columns[j] >= L()) {
      throw InputError("input column index out of range");
    }
    h.col(static_cast<Eigen::Index>(j)) = h_.col(columns[j]);
  }
  return WithInputMatrix(std::move(h));
}

SystemModel SystemModel::WithInputMatrix(Matrix h) const {
  return SystemModel(d_, std::move(h), a_, name_);
}

void SystemModel::RequireSparsity(int s) const {
  if (s < 1 || s > L()) {
    throw InputError("sparsity s must satisfy 1 <= s <= L (L = " +
                     std::to_string(L()) + ", s = " + std::to_string(s) + ")");
  }
}

}  // namespace sparse_ctrb
