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

#ifndef SPARSE_CTRB_EXACT_H_
#define SPARSE_CTRB_EXACT_H_

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

// Exact rational linear algebra for small matrices. Every finite double is a
// dyadic rational, so conversion from floating point is lossless; integer
// inputs therefore get tolerance-free rank decisions.
namespace sparse_ctrb::exact {

using Rational = boost::multiprecision::cpp_rational;

Rational FromDouble(double x);

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);

  static RationalMatrix FromDouble(const Eigen::MatrixXd& m);
  static RationalMatrix Identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const Rational& operator()(int i, int j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix Transpose() const;
  RationalMatrix SelectCols(std::span<const int> cols) const;
  RationalMatrix LeftCols(int n) const;
  RationalMatrix TopRows(int n) const;

  // [a, b]; row counts must match.
  static RationalMatrix HConcat(const RationalMatrix& a,
                                const RationalMatrix& b);

  Eigen::MatrixXd ToDouble() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

int Rank(RationalMatrix m);

// Columns form a basis of the right null space.
RationalMatrix NullSpace(const RationalMatrix& m);

// Maximal linearly independent subset of the columns, in index order.
RationalMatrix IndependentColumns(const RationalMatrix& m);

// [D^{K-1} H, ..., H].
RationalMatrix ControllabilityMatrix(const RationalMatrix& d,
                                     const RationalMatrix& h, int k);

int MinPolyDegree(const RationalMatrix& d);

}  // namespace sparse_ctrb::exact

#endif  // SPARSE_CTRB_EXACT_H_
