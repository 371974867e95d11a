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
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "fredholm/errors.hpp"
#include "fredholm/kernels.hpp"
#include "fredholm/parallel.hpp"
#include "fredholm/quadrature.hpp"
#include "fredholm/types.hpp"

namespace fredholm {

enum class Scaling {
  /// matrix(i, j) = K(x_i, x_j)
  raw_kernel,
  /// matrix(i, j) = sqrt(w_i) K(x_i, x_j) sqrt(w_j)
  symmetric_nystrom,
};

inline std::string_view to_string(Scaling s) {
  return s == Scaling::raw_kernel ? "raw_kernel" : "symmetric_nystrom";
}

/// A kernel sampled on a quadrature rule. The identity is never part of the
/// matrix; callers add it exactly.
class DiscreteOperator {
 public:
  DiscreteOperator(QuadratureRule rule, Matrix matrix, Scaling scaling,
                   std::string source_name = {})
      : rule_(std::move(rule)),
        matrix_(std::move(matrix)),
        scaling_(scaling),
        source_name_(std::move(source_name)) {
    const auto n = static_cast<Eigen::Index>(rule_.size());
    if (matrix_.rows() != n || matrix_.cols() != n) {
      throw InvalidArgument("discrete operator: matrix does not match rule size");
    }
  }

  const QuadratureRule& rule() const { return rule_; }
  const Matrix& matrix() const { return matrix_; }
  Scaling scaling() const { return scaling_; }
  const std::string& source_name() const { return source_name_; }
  std::size_t size() const { return rule_.size(); }

  /// I + matrix.
  Matrix identity_plus() const {
    Matrix m = matrix_;
    m.diagonal().array() += 1.0;
    return m;
  }

 private:
  QuadratureRule rule_;
  Matrix matrix_;
  Scaling scaling_;
  std::string source_name_;
};

/// Nystrom discretisation of K on the rule's nodes.
///
/// Symmetric kernels are sampled on the lower triangle and mirrored, so the
/// result is exactly symmetric.
inline DiscreteOperator assemble(const Kernel& k, const QuadratureRule& rule,
                                 Scaling scaling = Scaling::symmetric_nystrom) {
  const std::size_t n = rule.size();
  Matrix m(n, n);
  Vector root_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    root_w[i] = scaling == Scaling::symmetric_nystrom ? std::sqrt(rule.weight(i))
                                                      : 1.0;
  }
  const bool sym = k.is_symmetric();
  parallel_for(0, n, [&](std::size_t i) {
    const double xi = rule.node(i);
    const std::size_t jend = sym ? i + 1 : n;
    for (std::size_t j = 0; j < jend; ++j) {
      const double v = k(xi, rule.node(j));
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "assemble: kernel '" << k.name() << "' is not finite at node pair ("
            << i << ", " << j << ") = (" << xi << ", " << rule.node(j) << ")";
        throw NumericError(msg.str());
      }
      m(i, j) = root_w[i] * v * root_w[j];
    }
  });
  if (sym) m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return DiscreteOperator(rule, std::move(m), scaling, k.name());
}

}  // namespace fredholm
