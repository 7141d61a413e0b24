// asdrkit/assignment.h

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

#ifndef ASDRKIT_ASSIGNMENT_H_
#define ASDRKIT_ASSIGNMENT_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace asdrkit {

/// Dense row-major n x m cost matrix.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws std::invalid_argument on ragged input or an empty matrix.
  static CostMatrix from_rows(const std::vector<std::vector<double>> &rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double &operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  CostMatrix transposed() const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// A partial matching of size min(rows, cols); pairs sorted by row.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost = 0.0;
};

/// Minimum-cost matching of size min(n, m) (Kuhn-Munkres with potentials,
/// O(n^2 m)). Throws std::invalid_argument on NaN or infinite costs.
Assignment solve_min_cost(const CostMatrix &c);

/// Exhaustive minimum over all matchings of size min(n, m); limited to
/// min(n, m) <= 10.
Assignment brute_force(const CostMatrix &c);

}  // namespace asdrkit

#endif  // ASDRKIT_ASSIGNMENT_H_
