// asdrkit/assignment.cc

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

#include "asdrkit/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace asdrkit {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("cost matrix must be at least 1x1");
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>> &rows) {
  if (rows.empty() || rows[0].empty()) {
    throw std::invalid_argument("cost matrix must be at least 1x1");
  }
  CostMatrix c(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c.cols()) {
      throw std::invalid_argument("ragged cost matrix");
    }
    for (std::size_t col = 0; col < c.cols(); ++col) c(r, col) = rows[r][col];
  }
  return c;
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

namespace {

void check_finite(const CostMatrix &c) {
  for (std::size_t r = 0; r < c.rows(); ++r)
    for (std::size_t col = 0; col < c.cols(); ++col)
      if (!std::isfinite(c(r, col)))
        throw std::invalid_argument("cost matrix contains NaN or infinity");
}

Assignment finish(const CostMatrix &c,
                  std::vector<std::pair<std::size_t, std::size_t>> pairs,
                  bool transposed) {
  Assignment a;
  for (auto &p : pairs) {
    if (transposed) std::swap(p.first, p.second);
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto &[r, col] : pairs) a.total_cost += c(r, col);
  a.pairs = std::move(pairs);
  return a;
}

// Rows <= cols. Shortest augmenting paths with row/column potentials; every
// row is matched, which equals padding with zero-cost dummy rows.
std::vector<std::pair<std::size_t, std::size_t>> hungarian(const CostMatrix &a) {
  const std::size_t n = a.rows(), m = a.cols();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);  // 1-based rows
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = match[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) pairs.emplace_back(match[j] - 1, j - 1);
  }
  return pairs;
}

void enumerate(const CostMatrix &a, std::size_t row, double cost,
               std::vector<std::size_t> &cols_of_row, std::vector<char> &used,
               double &best, std::vector<std::size_t> &best_cols) {
  if (row == a.rows()) {
    if (cost < best) {
      best = cost;
      best_cols = cols_of_row;
    }
    return;
  }
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (used[c]) continue;
    used[c] = 1;
    cols_of_row[row] = c;
    enumerate(a, row + 1, cost + a(row, c), cols_of_row, used, best, best_cols);
    used[c] = 0;
  }
}

}  // namespace

Assignment solve_min_cost(const CostMatrix &c) {
  check_finite(c);
  if (c.rows() <= c.cols()) return finish(c, hungarian(c), false);
  return finish(c, hungarian(c.transposed()), true);
}

Assignment brute_force(const CostMatrix &c) {
  check_finite(c);
  const bool transpose = c.rows() > c.cols();
  const CostMatrix a = transpose ? c.transposed() : c;
  if (a.rows() > 10) {
    throw std::invalid_argument("brute_force supports min(n, m) <= 10");
  }
  std::vector<std::size_t> cols_of_row(a.rows()), best_cols;
  std::vector<char> used(a.cols(), 0);
  double best = std::numeric_limits<double>::infinity();
  enumerate(a, 0, 0.0, cols_of_row, used, best, best_cols);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < a.rows(); ++r) pairs.emplace_back(r, best_cols[r]);
  return finish(c, std::move(pairs), transpose);
}

}  // namespace asdrkit
