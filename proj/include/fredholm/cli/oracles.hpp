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
#include <numbers>
#include <optional>

#include "fredholm/cli/kernel_spec.hpp"
#include "fredholm/kernels.hpp"
#include "fredholm/quadrature.hpp"

namespace fredholm::cli {

/// Integral of T(t, t) over [0, 1] by 64-point Gauss-Legendre.
inline double diagonal_integral(const Kernel& t) {
  return make_rule(RuleFamily::gauss_legendre, 64)
      .integrate([&](double x) { return t(x, x); });
}

/// Closed-form log det(I + A) for kernels that have one.
///
///   zero            0
///   constant c      log(1 + c)
///   rank_one u v    log(1 + int u v)
///   min             log cosh(sqrt z) for scale z > 0, log cos(sqrt(-z)) for z < 0
///   synthesized T   int T(t, t) dt
///
/// Scaled kernels are covered where the formula allows it.
inline std::optional<double> analytic_log_det(const KernelSpec& spec) {
  const double z = spec.scale();
  if (spec.grid) return std::nullopt;
  if (spec.name == "zero") return 0.0;
  if (spec.name == "constant") {
    const double arg = 1.0 + z * spec.param("c", 1.0);
    if (arg > 0.0) return std::log(arg);
    return std::nullopt;
  }
  if (spec.name == "rank_one") {
    const double arg = 1.0 + z * inner_product(detail::polynomial_param(spec, 'u'),
                                               detail::polynomial_param(spec, 'v'));
    if (arg > 0.0) return std::log(arg);
    return std::nullopt;
  }
  if (spec.name == "min") {
    if (z == 0.0) return 0.0;
    if (z > 0.0) return std::log(std::cosh(std::sqrt(z)));
    const double r = std::sqrt(-z);
    if (r < std::numbers::pi / 2) return std::log(std::cos(r));
    return std::nullopt;
  }
  if (spec.name == "synthesized" && z == 1.0) {
    // The factor itself does not depend on the grid.
    const QuadratureRule any = make_rule(RuleFamily::midpoint, 1);
    return diagonal_integral(build_kernel(*spec.factor, any));
  }
  return std::nullopt;
}

}  // namespace fredholm::cli
