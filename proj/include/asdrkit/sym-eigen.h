// asdrkit/sym-eigen.h

// Copyright 2026  The asdrkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ASDRKIT_SYM_EIGEN_H_
#define ASDRKIT_SYM_EIGEN_H_

#include <cstddef>
#include <vector>

namespace asdrkit {

/// Dense row-major square matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * n_ + c];
  }
  double &operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }

  bool operator==(const Matrix &) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

/// Householder tridiagonalization followed by implicit QL iterations.
/// Only the lower triangle is read. Throws std::runtime_error if QL fails to
/// converge.
SymmetricEigen symmetric_eigen(const Matrix &a);

}  // namespace asdrkit

#endif  // ASDRKIT_SYM_EIGEN_H_
