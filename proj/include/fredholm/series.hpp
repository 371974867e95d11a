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

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fredholm/dense.hpp"
#include "fredholm/determinant.hpp"
#include "fredholm/discretize.hpp"
#include "fredholm/errors.hpp"
#include "fredholm/kernels.hpp"
#include "fredholm/parallel.hpp"
#include "fredholm/quadrature.hpp"

namespace fredholm {

inline constexpr int kMaxSeriesOrder = 6;

/// How the k-fold tensor-quadrature terms are evaluated.
///
/// With B = sqrt(W) K sqrt(W) on the rule's nodes, the k-fold tensor sum
/// (1/k!) sum_{tuples} w_1..w_k det[K(x_p, x_q)] drops every tuple with a
/// repeated node (two equal rows) and counts each node set k! times, so it
/// equals the sum of the k x k principal minors of B.
enum class SeriesEvaluation {
  /// Enumerate node subsets and evaluate each k x k determinant.
  minors,
  /// Same sum via Newton's identities on p_j = tr(B^j).
  power_sums,
  /// minors while the subset count stays under the budget, else power_sums.
  automatic,
};

struct SeriesOptions {
  /// Lifts the order <= 6 cost guard.
  bool allow_high_order = false;
  SeriesEvaluation evaluation = SeriesEvaluation::automatic;
  double minor_budget = 2e7;
};

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

// Sum of all k x k principal minors of b.
inline double principal_minor_sum(const Matrix& b, std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(b.rows());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  std::vector<double> partial(n, 0.0);
  parallel_for(0, n - k + 1, [&](std::size_t first) {
    std::array<std::size_t, 16> idx{};
    std::vector<double> work(k * k);
    idx[0] = first;
    for (std::size_t p = 1; p < k; ++p) idx[p] = first + p;
    double sum = 0.0;
    while (true) {
      for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
          work[p * k + q] = b(static_cast<Eigen::Index>(idx[p]),
                              static_cast<Eigen::Index>(idx[q]));
        }
      }
      const double det = lu_determinant_inplace(work.data(), k);
      if (!std::isfinite(det)) {
        throw NumericError("fredholm_series: non-finite minor determinant");
      }
      sum += det;
      // Next combination with idx[0] fixed.
      std::size_t p = k - 1;
      while (p >= 1 && idx[p] == n - k + p) --p;
      if (p == 0) break;
      ++idx[p];
      for (std::size_t q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    partial[first] = sum;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

// e_0..e_order of the eigenvalues of b from power sums p_j = tr(b^j).
inline std::vector<double> elementary_from_power_sums(const Matrix& b, int order) {
  std::vector<double> p(static_cast<std::size_t>(order) + 1, 0.0);
  // p_{2m} = <B^m, (B^m)^T>, p_{2m+1} = <B^{m+1}, (B^m)^T>.
  std::vector<Matrix> powers;
  powers.push_back(Matrix::Identity(b.rows(), b.cols()));
  const int needed = (order + 1) / 2;
  for (int m = 1; m <= needed; ++m) {
    if (m == 1) {
      powers.push_back(b);
    } else {
      Matrix next(b.rows(), b.cols());
      next.noalias() = powers.back() * b;
      powers.push_back(std::move(next));
    }
  }
  for (int j = 1; j <= order; ++j) {
    const int m = j / 2;
    const Matrix& lhs = powers[static_cast<std::size_t>(j - m)];
    const Matrix& rhs = powers[static_cast<std::size_t>(m)];
    p[static_cast<std::size_t>(j)] = lhs.cwiseProduct(rhs.transpose()).sum();
  }
  std::vector<double> e(static_cast<std::size_t>(order) + 1, 0.0);
  e[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      acc += sign * e[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i)];
    }
    e[static_cast<std::size_t>(k)] = acc / k;
  }
  return e;
}

inline void check_series_order(int order, const SeriesOptions& options) {
  if (order < 0) throw InvalidArgument("fredholm_series: order must be >= 0");
  if (order > kMaxSeriesOrder && !options.allow_high_order) {
    throw CostGuardError("fredholm_series: order " + std::to_string(order) +
                         " exceeds the cost guard of " +
                         std::to_string(kMaxSeriesOrder));
  }
}

}  // namespace detail

/// Terms c_0..c_order of the truncated series
///   c_k = (1/k!) int...int det[K(x_p, x_q)]_{p,q<=k} dx_1..dx_k,
/// each k-fold integral by tensor quadrature on the operator's rule in every
/// axis. The operator must carry the symmetric Nystrom scaling.
inline std::vector<double> fredholm_series_terms(const DiscreteOperator& op,
                                                 int order,
                                                 const SeriesOptions& options = {}) {
  detail::check_series_order(order, options);
  if (op.scaling() != Scaling::symmetric_nystrom) {
    throw InvalidArgument("fredholm_series: operator must use symmetric_nystrom scaling");
  }
  const Matrix& b = op.matrix();
  const std::size_t n = op.size();

  SeriesEvaluation how = options.evaluation;
  if (how == SeriesEvaluation::automatic) {
    double count = 0.0;
    for (int j = 1; j <= order; ++j) {
      count += detail::binomial(n, static_cast<std::size_t>(j));
    }
    how = count <= options.minor_budget ? SeriesEvaluation::minors
                                        : SeriesEvaluation::power_sums;
  }
  if (how == SeriesEvaluation::minors && order > 16) {
    throw InvalidArgument("fredholm_series: minor enumeration supports order <= 16");
  }

  std::vector<double> terms;
  if (how == SeriesEvaluation::minors) {
    terms.resize(static_cast<std::size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) {
      terms[static_cast<std::size_t>(j)] =
          detail::principal_minor_sum(b, static_cast<std::size_t>(j));
    }
  } else {
    terms = detail::elementary_from_power_sums(b, order);
  }
  for (double t : terms) {
    if (!std::isfinite(t)) throw NumericError("fredholm_series: non-finite term");
  }
  return terms;
}

inline std::vector<double> fredholm_series_terms(const Kernel& k,
                                                 const QuadratureRule& rule,
                                                 int order,
                                                 const SeriesOptions& options = {}) {
  detail::check_series_order(order, options);
  return fredholm_series_terms(assemble(k, rule), order, options);
}

namespace detail {

inline DeterminantEstimate series_estimate(const std::vector<double>& terms,
                                           std::size_t n, int order) {
  double total = 0.0;
  for (double t : terms) total += t;
  if (!(total > 0.0)) {
    throw NumericError("fredholm_series: truncated series is not positive (" +
                       std::to_string(total) + "), log is undefined");
  }
  return {.log_det = std::log(total),
          .method = Method::fredholm_series,
          .n = n,
          .series_order = order,
          .err_estimate = std::abs(terms.back())};
}

}  // namespace detail

/// log of the truncated series. err_estimate is |c_order|, the size of the
/// last retained term.
inline DeterminantEstimate fredholm_series(const Kernel& k,
                                           const QuadratureRule& rule, int order,
                                           const SeriesOptions& options = {}) {
  return detail::series_estimate(fredholm_series_terms(k, rule, order, options),
                                 rule.size(), order);
}

inline DeterminantEstimate fredholm_series(const DiscreteOperator& op, int order,
                                           const SeriesOptions& options = {}) {
  return detail::series_estimate(fredholm_series_terms(op, order, options),
                                 op.size(), order);
}

}  // namespace fredholm
