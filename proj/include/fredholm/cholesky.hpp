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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fredholm/discretize.hpp"
#include "fredholm/errors.hpp"
#include "fredholm/quadrature.hpp"
#include "fredholm/types.hpp"

namespace fredholm {

/// Lower-triangular L with L L^T = M, for a symmetric positive definite M.
class CholeskyFactor {
 public:
  CholeskyFactor(RowMatrix lower, std::optional<QuadratureRule> rule,
                 std::string source_name)
      : lower_(std::move(lower)),
        rule_(std::move(rule)),
        source_name_(std::move(source_name)) {}

  const RowMatrix& lower() const { return lower_; }
  std::size_t size() const { return static_cast<std::size_t>(lower_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return lower_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  /// Grid the factored matrix was assembled on, if any.
  const std::optional<QuadratureRule>& rule() const { return rule_; }
  const std::string& source_name() const { return source_name_; }

  Matrix reconstruct() const { return lower_ * lower_.transpose(); }

 private:
  RowMatrix lower_;
  std::optional<QuadratureRule> rule_;
  std::string source_name_;
};

namespace detail {

inline constexpr Eigen::Index kCholeskyBlock = 96;

// Right-looking blocked factorisation in natural order (no pivoting). Works on
// the lower triangle of `a` and leaves L there.
inline void factor_in_place(RowMatrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; k += kCholeskyBlock) {
    const Eigen::Index kb = std::min(kCholeskyBlock, n - k);
    for (Eigen::Index j = k; j < k + kb; ++j) {
      double d = a(j, j);
      for (Eigen::Index p = k; p < j; ++p) d -= a(j, p) * a(j, p);
      if (!(d > 0.0)) throw NotPositiveDefinite(static_cast<std::size_t>(j), d);
      const double ljj = std::sqrt(d);
      a(j, j) = ljj;
      for (Eigen::Index i = j + 1; i < k + kb; ++i) {
        double s = a(i, j);
        for (Eigen::Index p = k; p < j; ++p) s -= a(i, p) * a(j, p);
        a(i, j) = s / ljj;
      }
    }
    const Eigen::Index rest = n - k - kb;
    if (rest == 0) break;
    const Matrix l11 = a.block(k, k, kb, kb).triangularView<Eigen::Lower>();
    auto panel = a.block(k + kb, k, rest, kb);
    l11.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(
        panel);
    a.block(k + kb, k + kb, rest, rest)
        .selfadjointView<Eigen::Lower>()
        .rankUpdate(panel, -1.0);
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
}

}  // namespace detail

/// Cholesky factor of a symmetric positive definite matrix.
///
/// Pivots are taken in natural order; a non-positive pivot raises
/// NotPositiveDefinite with its index rather than being regularised.
inline CholeskyFactor factor(const Matrix& m,
                             std::optional<QuadratureRule> rule = std::nullopt,
                             std::string source_name = {}) {
  if (m.rows() != m.cols()) throw InvalidArgument("factor: matrix is not square");
  if (m.rows() == 0) throw InvalidArgument("factor: matrix is empty");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("factor: matrix is not symmetric");
  }
  if (rule && rule->size() != static_cast<std::size_t>(m.rows())) {
    throw InvalidArgument("factor: rule size does not match the matrix");
  }
  RowMatrix a = m;
  detail::factor_in_place(a);
  return CholeskyFactor(std::move(a), std::move(rule), std::move(source_name));
}

/// Factor of I + op.matrix(), keeping the op's grid.
inline CholeskyFactor factor_identity_plus(const DiscreteOperator& op) {
  return factor(op.identity_plus(), op.rule(), op.source_name());
}

/// Solves L x = b by forward substitution.
inline Vector solve_lower(const CholeskyFactor& f, const Vector& b) {
  const auto n = static_cast<Eigen::Index>(f.size());
  if (b.size() != n) {
    throw InvalidArgument("solve_lower: expected a vector of length " +
                          std::to_string(n) + ", got " + std::to_string(b.size()));
  }
  const RowMatrix& l = f.lower();
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = i == 0 ? 0.0 : l.row(i).head(i).dot(x.head(i));
    x[i] = (b[i] - s) / l(i, i);
  }
  return x;
}

/// Solves L^T x = b by back substitution.
inline Vector solve_upper(const CholeskyFactor& f, const Vector& b) {
  const auto n = static_cast<Eigen::Index>(f.size());
  if (b.size() != n) {
    throw InvalidArgument("solve_upper: expected a vector of length " +
                          std::to_string(n) + ", got " + std::to_string(b.size()));
  }
  const RowMatrix& l = f.lower();
  Vector x = b;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    x[i] /= l(i, i);
    // Column i of L^T above the diagonal is row i of L left of it.
    x.head(i) -= x[i] * l.row(i).head(i).transpose();
  }
  return x;
}

/// M^{-1} b = L^{-T} (L^{-1} b).
inline Vector solve(const CholeskyFactor& f, const Vector& b) {
  return solve_upper(f, solve_lower(f, b));
}

/// f^T M^{-1} f = ||L^{-1} f||^2.
inline double quad_form_inverse(const CholeskyFactor& f, const Vector& v) {
  return solve_lower(f, v).squaredNorm();
}

/// y^T M y = ||L^T y||^2.
inline double quad_form(const CholeskyFactor& f, const Vector& y) {
  if (y.size() != static_cast<Eigen::Index>(f.size())) {
    throw InvalidArgument("quad_form: dimension mismatch");
  }
  return (f.lower().transpose() * y).squaredNorm();
}

/// M^{-1} = L^{-T} L^{-1}.
inline Matrix inverse(const CholeskyFactor& f) {
  const auto n = static_cast<Eigen::Index>(f.size());
  Matrix l_inv = Matrix::Identity(n, n);
  f.lower().triangularView<Eigen::Lower>().solveInPlace(l_inv);
  return l_inv.transpose() * l_inv;
}

/// How a Cholesky pivot is mapped back to a sample of T(t, t).
enum class DiagonalRecovery {
  /// (L_ii^2 - 1) / w_i
  squared_pivot,
  /// 2 log(L_ii) / w_i
  log_pivot,
};

/// Continuum samples of the triangular factor's diagonal on the factor's grid.
struct DiagonalTrace {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> t_diag;
  DiagonalRecovery recovery = DiagonalRecovery::squared_pivot;

  std::size_t size() const { return nodes.size(); }
};

/// Rescales the pivots of a factor of I + sqrt(W) A sqrt(W) to samples of
/// T(x_i, x_i), where I + A = (I + T)(I + T*).
inline DiagonalTrace extract_T_diagonal(
    const CholeskyFactor& f,
    DiagonalRecovery recovery = DiagonalRecovery::squared_pivot) {
  if (!f.rule()) {
    throw InvalidArgument("extract_T_diagonal: factor carries no quadrature grid");
  }
  const QuadratureRule& rule = *f.rule();
  DiagonalTrace trace;
  trace.recovery = recovery;
  trace.nodes.assign(rule.nodes().begin(), rule.nodes().end());
  trace.weights.assign(rule.weights().begin(), rule.weights().end());
  trace.t_diag.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double w = rule.weight(i);
    if (!(w > 0.0)) {
      throw InvalidArgument("extract_T_diagonal: zero weight at node " +
                            std::to_string(i));
    }
    const double lii = f(i, i);
    trace.t_diag[i] = recovery == DiagonalRecovery::squared_pivot
                          ? (lii * lii - 1.0) / w
                          : 2.0 * std::log(lii) / w;
    if (!std::isfinite(trace.t_diag[i])) {
      throw NumericError("extract_T_diagonal: non-finite value at node " +
                         std::to_string(i));
    }
  }
  return trace;
}

}  // namespace fredholm
