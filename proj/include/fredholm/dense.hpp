/*
 * Copyright 2026 The fredholm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "fredholm/types.hpp"

namespace fredholm {

/// Determinant as sign * exp(log_abs).
struct SignedLogDet {
  double sign = 1.0;
  double log_abs = 0.0;

  double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Determinant by LU with partial pivoting. Independent of the Cholesky path.
inline SignedLogDet lu_log_determinant(Matrix a) {
  const Eigen::Index n = a.rows();
  SignedLogDet out;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    if (best == 0.0) return {0.0, -INFINITY};
    if (p != k) {
      a.row(p).swap(a.row(k));
      out.sign = -out.sign;
    }
    const double pivot = a(k, k);
    if (pivot < 0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(pivot));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      if (f == 0.0) continue;
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return out;
}

/// Determinant of a square row-major array by LU with partial pivoting,
/// overwriting it. Meant for the small minors of the series expansion.
inline double lu_determinant_inplace(double* a, std::size_t n) {
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i * n + k]) > best) {
        best = std::abs(a[i * n + k]);
        p = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[k * n + j]);
      det = -det;
    }
    const double pivot = a[k * n + k];
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

inline double lu_determinant(const Matrix& a) {
  RowMatrix copy = a;
  return lu_determinant_inplace(copy.data(), static_cast<std::size_t>(a.rows()));
}

}  // namespace fredholm
