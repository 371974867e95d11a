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
#include <optional>
#include <string_view>

#include "fredholm/cholesky.hpp"
#include "fredholm/errors.hpp"

namespace fredholm {

enum class Method { diagonal_integral, matrix_logdet, fredholm_series };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::diagonal_integral:
      return "diagonal_integral";
    case Method::matrix_logdet:
      return "matrix_logdet";
    case Method::fredholm_series:
      return "fredholm_series";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
  if (name == "diagonal_integral") return Method::diagonal_integral;
  if (name == "matrix_logdet") return Method::matrix_logdet;
  if (name == "fredholm_series") return Method::fredholm_series;
  return std::nullopt;
}

/// An estimate of log det(I + A).
struct DeterminantEstimate {
  double log_det = 0.0;
  Method method = Method::matrix_logdet;
  std::size_t n = 0;
  /// Set for fredholm_series only.
  std::optional<int> series_order;
  std::optional<double> err_estimate;
};

/// log det M = 2 sum log L_ii.
inline DeterminantEstimate logdet_matrix(const CholeskyFactor& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::log(f(i, i));
  return {.log_det = 2.0 * sum, .method = Method::matrix_logdet, .n = f.size()};
}

/// Quadrature of the recovered diagonal, sum_i w_i T(x_i, x_i), estimating
/// the integral of T(t, t) over the grid's interval.
///
/// err_estimate is the gap to the discrete identity sum_i log(1 + w_i t_i),
/// which for squared-pivot traces equals 2 sum log L_ii exactly.
inline DeterminantEstimate logdet_via_diagonal(const DiagonalTrace& trace) {
  if (trace.size() == 0) {
    throw InvalidArgument("logdet_via_diagonal: trace is empty");
  }
  double quad = 0.0, discrete = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double wt = trace.weights[i] * trace.t_diag[i];
    quad += wt;
    discrete += std::log1p(wt);
  }
  return {.log_det = quad,
          .method = Method::diagonal_integral,
          .n = trace.size(),
          .err_estimate = std::abs(quad - discrete)};
}

}  // namespace fredholm
