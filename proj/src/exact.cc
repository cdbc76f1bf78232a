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

#include "sparse_ctrb/exact.h"

#include <cmath>
#include <cstdint>
#include <utility>

#include "sparse_ctrb/errors.h"

namespace sparse_ctrb::exact {

using boost::multiprecision::cpp_int;

Rational FromDouble(double x) {
  if (!std::isfinite(x)) throw InputError("cannot convert non-finite value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  cpp_int numerator = scaled;
  if (exponent >= 0) {
    numerator <<= exponent;
    return Rational(numerator);
  }
  cpp_int denominator = 1;
  denominator <<= -exponent;
  return Rational(numerator, denominator);
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

RationalMatrix RationalMatrix::FromDouble(const Eigen::MatrixXd& m) {
  RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < out.rows_; ++i) {
    for (int j = 0; j < out.cols_; ++j) out(i, j) = exact::FromDouble(m(i, j));
  }
  return out;
}

RationalMatrix RationalMatrix::Identity(int n) {
  RationalMatrix out(n, n);
  for (int i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InputError("rational product shape mismatch");
  RationalMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) {
        if (rhs(k, j) != 0) out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::Transpose() const {
  RationalMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

RationalMatrix RationalMatrix::SelectCols(std::span<const int> cols) const {
  RationalMatrix out(rows_, static_cast<int>(cols.size()));
  for (int i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(i, cols[j]);
  }
  return out;
}

RationalMatrix RationalMatrix::LeftCols(int n) const {
  RationalMatrix out(rows_, n);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = (*this)(i, j);
  }
  return out;
}

RationalMatrix RationalMatrix::TopRows(int n) const {
  RationalMatrix out(n, cols_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  }
  return out;
}

RationalMatrix RationalMatrix::HConcat(const RationalMatrix& a,
                                       const RationalMatrix& b) {
  if (a.rows_ != b.rows_) throw InputError("rational concat row mismatch");
  RationalMatrix out(a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
    for (int j = 0; j < b.cols_; ++j) out(i, a.cols_ + j) = b(i, j);
  }
  return out;
}

Eigen::MatrixXd RationalMatrix::ToDouble() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      out(i, j) = static_cast<double>((*this)(i, j));
    }
  }
  return out;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> ReduceRowEchelon(RationalMatrix* m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m->cols() && row < m->rows(); ++col) {
    int pivot = -1;
    for (int i = row; i < m->rows(); ++i) {
      if ((*m)(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int j = 0; j < m->cols(); ++j) {
        std::swap((*m)(pivot, j), (*m)(row, j));
      }
    }
    const Rational inv = 1 / (*m)(row, col);
    for (int j = col; j < m->cols(); ++j) (*m)(row, j) *= inv;
    for (int i = 0; i < m->rows(); ++i) {
      if (i == row || (*m)(i, col) == 0) continue;
      const Rational factor = (*m)(i, col);
      for (int j = col; j < m->cols(); ++j) {
        (*m)(i, j) -= factor * (*m)(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int Rank(RationalMatrix m) {
  return static_cast<int>(ReduceRowEchelon(&m).size());
}

RationalMatrix NullSpace(const RationalMatrix& m) {
  RationalMatrix reduced = m;
  const std::vector<int> pivots = ReduceRowEchelon(&reduced);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : pivots) is_pivot[p] = true;
  const int free_count = m.cols() - static_cast<int>(pivots.size());
  RationalMatrix basis(m.cols(), free_count);
  int k = 0;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(free, k) = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      basis(pivots[r], k) = -reduced(static_cast<int>(r), free);
    }
    ++k;
  }
  return basis;
}

RationalMatrix IndependentColumns(const RationalMatrix& m) {
  RationalMatrix reduced = m;
  const std::vector<int> pivots = ReduceRowEchelon(&reduced);
  return m.SelectCols(pivots);
}

RationalMatrix ControllabilityMatrix(const RationalMatrix& d,
                                     const RationalMatrix& h, int k) {
  if (d.rows() != d.cols() || h.rows() != d.rows() || k < 1) {
    throw InputError("invalid controllability matrix arguments");
  }
  RationalMatrix out = h;
  RationalMatrix block = h;
  for (int j = 1; j < k; ++j) {
    block = d * block;
    out = RationalMatrix::HConcat(block, out);
  }
  return out;
}

int MinPolyDegree(const RationalMatrix& d) {
  const int n = d.rows();
  if (n == 0) return 1;
  RationalMatrix powers(n * n, n + 1);
  RationalMatrix current = RationalMatrix::Identity(n);
  auto store = [&](int col) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) powers(i * n + j, col) = current(i, j);
    }
  };
  store(0);
  for (int q = 1; q <= n; ++q) {
    current = current * d;
    store(q);
    if (Rank(powers.LeftCols(q + 1)) < q + 1) return q;
  }
  return n;
}

}  // namespace sparse_ctrb::exact
