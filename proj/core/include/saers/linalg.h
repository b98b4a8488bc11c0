// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAERS_LINALG_H_
#define SAERS_LINALG_H_

#include <cstddef>
#include <span>
#include <vector>

namespace saers {

using Vec = std::vector<double>;

// Row-major dense matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// out = W[:, col_begin : col_begin + x.size()] * x
inline void MatVecCols(const Matrix& w, int col_begin, std::span<const double> x, std::span<double> out) {
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols + col_begin;
    double s = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) s += wr[c] * x[c];
    out[static_cast<std::size_t>(r)] = s;
  }
}

inline void MatVec(const Matrix& w, std::span<const double> x, std::span<double> out) { MatVecCols(w, 0, x, out); }

// out += W[:, col_begin : col_begin + out.size()]^T * y
inline void AddMatTVecCols(const Matrix& w, int col_begin, std::span<const double> y, std::span<double> out) {
  for (int r = 0; r < w.rows; ++r) {
    const double yr = y[static_cast<std::size_t>(r)];
    if (yr == 0.0) continue;
    const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols + col_begin;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += wr[c] * yr;
  }
}

// W[:, col_begin : col_begin + b.size()] += scale * a b^T
inline void AddOuterCols(Matrix& w, int col_begin, double scale, std::span<const double> a, std::span<const double> b) {
  for (int r = 0; r < w.rows; ++r) {
    const double ar = scale * a[static_cast<std::size_t>(r)];
    if (ar == 0.0) continue;
    double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols + col_begin;
    for (std::size_t c = 0; c < b.size(); ++c) wr[c] += ar * b[c];
  }
}

inline void AddOuter(Matrix& w, double scale, std::span<const double> a, std::span<const double> b) {
  AddOuterCols(w, 0, scale, a, b);
}

inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline double SquaredNorm(std::span<const double> x) { return Dot(x, x); }

}  // namespace saers

#endif  // SAERS_LINALG_H_
