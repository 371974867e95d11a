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
#include <span>
#include <string>
#include <vector>

#include "fredholm/cholesky.hpp"
#include "fredholm/dense.hpp"
#include "fredholm/discretize.hpp"
#include "fredholm/errors.hpp"
#include "fredholm/kernels.hpp"
#include "fredholm/quadrature.hpp"

namespace fredholm {

inline constexpr double kIdentityTolerance = 1e-9;

namespace detail {

// |d1 / d2 - 1| computed through log-determinants; 2 when the signs differ.
inline double relative_gap(const SignedLogDet& d1, const SignedLogDet& d2) {
  if (d1.sign != d2.sign) return 2.0;
  if (d1.sign == 0.0) return 0.0;
  return std::abs(std::expm1(d1.log_abs - d2.log_abs));
}

inline SignedLogDet product(const SignedLogDet& a, const SignedLogDet& b) {
  return {a.sign * b.sign, a.log_abs + b.log_abs};
}

inline Matrix identity_plus(const Matrix& m) {
  Matrix out = m;
  out.diagonal().array() += 1.0;
  return out;
}

}  // namespace detail

struct BlockPropertyResult {
  bool pass = false;
  /// Relative residual of det[[I+U, 0], [V, I+X]] against det(I+U) det(I+X).
  double residual_lower = 0.0;
  /// Same for det[[I+U, V^T], [0, I+X]].
  double residual_upper = 0.0;
};

/// Checks the block-triangular determinant factorisation for U (p x p),
/// V (q x p) and X (q x q) with dense LU determinants.
inline BlockPropertyResult block_property_check(const Matrix& u, const Matrix& v,
                                                const Matrix& x,
                                                double tol = kIdentityTolerance) {
  const Eigen::Index p = u.rows(), q = x.rows();
  if (u.cols() != p || x.cols() != q || v.rows() != q || v.cols() != p) {
    throw InvalidArgument("block_property_check: blocks are not conformable");
  }
  const Matrix ipu = detail::identity_plus(u);
  const Matrix ipx = detail::identity_plus(x);
  Matrix lower = Matrix::Zero(p + q, p + q);
  lower.topLeftCorner(p, p) = ipu;
  lower.bottomLeftCorner(q, p) = v;
  lower.bottomRightCorner(q, q) = ipx;
  Matrix upper = Matrix::Zero(p + q, p + q);
  upper.topLeftCorner(p, p) = ipu;
  upper.topRightCorner(p, q) = v.transpose();
  upper.bottomRightCorner(q, q) = ipx;

  const SignedLogDet expected =
      detail::product(lu_log_determinant(ipu), lu_log_determinant(ipx));
  BlockPropertyResult r;
  r.residual_lower = detail::relative_gap(lu_log_determinant(lower), expected);
  r.residual_upper = detail::relative_gap(lu_log_determinant(upper), expected);
  r.pass = r.residual_lower < tol && r.residual_upper < tol;
  return r;
}

struct SchurIdentityResult {
  bool pass = false;
  /// det(I + A_{t+s}) against det(I + A_t) det(I + C_s - B_s (I + A_t)^{-1} B_s^T).
  double residual_schur = 0.0;
  /// det(I + A_{t+s}) against det(I + A_t) det((I + X_s)(I + X_s^T)), with
  /// I + X_s the trailing block of the Cholesky factor of I + A_{t+s}.
  double residual_cholesky = 0.0;
  /// max |(I + X_s)(I + X_s^T) - Schur complement|.
  double complement_mismatch = 0.0;
};

/// Verifies the Schur-complement factorisation of
/// I + A_{t+s} = [[I + A_t, B_s^T], [B_s, I + C_s]].
inline SchurIdentityResult schur_identity_check(const Matrix& a_t,
                                                const Matrix& b_s,
                                                const Matrix& c_s,
                                                double tol = kIdentityTolerance) {
  const Eigen::Index p = a_t.rows(), q = c_s.rows();
  if (a_t.cols() != p || c_s.cols() != q || b_s.rows() != q || b_s.cols() != p) {
    throw InvalidArgument("schur_identity_check: blocks are not conformable");
  }
  const Matrix lead = detail::identity_plus(a_t);
  const CholeskyFactor lead_factor = factor(lead);  // throws if not SPD

  Matrix full(p + q, p + q);
  full.topLeftCorner(p, p) = lead;
  full.topRightCorner(p, q) = b_s.transpose();
  full.bottomLeftCorner(q, p) = b_s;
  full.bottomRightCorner(q, q) = detail::identity_plus(c_s);

  // B_s (I + A_t)^{-1} B_s^T = (L^{-1} B_s^T)^T (L^{-1} B_s^T).
  Matrix w = b_s.transpose();
  lead_factor.lower().triangularView<Eigen::Lower>().solveInPlace(w);
  Matrix complement = detail::identity_plus(c_s);
  complement.noalias() -= w.transpose() * w;

  const SignedLogDet det_full = lu_log_determinant(full);
  const SignedLogDet det_lead = lu_log_determinant(lead);
  SchurIdentityResult r;
  r.residual_schur = detail::relative_gap(
      det_full, detail::product(det_lead, lu_log_determinant(complement)));

  const CholeskyFactor whole = factor(full);
  const Matrix trailing = whole.lower().bottomRightCorner(q, q);
  double log_trailing = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) log_trailing += std::log(trailing(i, i));
  r.residual_cholesky = detail::relative_gap(
      det_full, detail::product(det_lead, {1.0, 2.0 * log_trailing}));
  r.complement_mismatch =
      (trailing * trailing.transpose() - complement).cwiseAbs().maxCoeff();
  r.pass = r.residual_schur < tol && r.residual_cholesky < tol;
  return r;
}

struct LemmaOptions {
  RuleFamily family = RuleFamily::midpoint;
  /// Grid density on [0, t + s]; each piece gets round(length * density) nodes.
  double nodes_per_unit = 1600.0;
  std::size_t min_strip_nodes = 4;
};

struct LemmaTrace {
  std::vector<double> s;
  /// d(s) = (det(I + Y_s) - 1) / s.
  std::vector<double> d;
  /// T(t, t) when a reference factor was supplied.
  std::optional<double> target;
};

/// Difference quotients (det(I + Y_s) - 1) / s where
/// I + Y_s = (I + X_s)(I + X_s^*) and I + X_s is the trailing block of the
/// Cholesky factor of I + A restricted to [0, t + s], split at t.
inline LemmaTrace lemma_limit_check(const Kernel& a,
                                    const std::optional<Kernel>& t_ref, double t,
                                    std::span<const double> s_sequence,
                                    const LemmaOptions& options = {}) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("lemma_limit_check: t must lie in (0, 1)");
  }
  if (options.family == RuleFamily::trapezoid) {
    throw InvalidArgument(
        "lemma_limit_check: needs an open rule (midpoint or gauss_legendre)");
  }
  LemmaTrace out;
  if (t_ref) out.target = (*t_ref)(t, t);
  const auto nodes_for = [&](double len, std::size_t floor) {
    const auto m = static_cast<std::size_t>(std::llround(len * options.nodes_per_unit));
    return std::max(m, floor);
  };
  const QuadratureRule head =
      make_rule(options.family, nodes_for(t, 1), {0.0, t});
  for (std::size_t k = 0; k < s_sequence.size(); ++k) {
    const double s = s_sequence[k];
    if (!(s > 0.0 && t + s < 1.0)) {
      throw DomainError("lemma_limit_check: every s must lie in (0, 1 - t)");
    }
    if (k > 0 && !(s < s_sequence[k - 1])) {
      throw InvalidArgument("lemma_limit_check: s sequence must be decreasing");
    }
    const QuadratureRule strip = make_rule(
        options.family, nodes_for(s, options.min_strip_nodes), {t, t + s});
    const QuadratureRule rule = join(head, strip);
    const CholeskyFactor f =
        factor_identity_plus(assemble(restrict(a, t + s), rule));
    double log_det_y = 0.0;
    for (std::size_t i = head.size(); i < f.size(); ++i) {
      log_det_y += 2.0 * std::log(f(i, i));
    }
    out.s.push_back(s);
    out.d.push_back(std::expm1(log_det_y) / s);
  }
  return out;
}

}  // namespace fredholm
