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
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fredholm/errors.hpp"

namespace fredholm {

enum class RuleFamily { midpoint, trapezoid, gauss_legendre };

inline std::string_view to_string(RuleFamily family) {
  switch (family) {
    case RuleFamily::midpoint:
      return "midpoint";
    case RuleFamily::trapezoid:
      return "trapezoid";
    case RuleFamily::gauss_legendre:
      return "gauss_legendre";
  }
  return "unknown";
}

inline std::optional<RuleFamily> parse_rule_family(std::string_view name) {
  if (name == "midpoint") return RuleFamily::midpoint;
  if (name == "trapezoid") return RuleFamily::trapezoid;
  if (name == "gauss_legendre" || name == "gauss") {
    return RuleFamily::gauss_legendre;
  }
  return std::nullopt;
}

/// Closed sub-interval [a, b] of [0, 1].
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  bool contains(double x) const { return a <= x && x <= b; }
  bool contains(const Interval& other) const {
    return a <= other.a && other.b <= b;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Nodes and positive weights on an interval. Immutable; construct with
/// make_rule() or join().
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights,
                 RuleFamily family, Interval interval)
      : nodes_(std::move(nodes)),
        weights_(std::move(weights)),
        family_(family),
        interval_(interval) {
    validate();
  }

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  RuleFamily family() const { return family_; }
  const Interval& interval() const { return interval_; }

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weights_[i] * f(nodes_[i]);
    }
    return sum;
  }

  /// The same rule mapped affinely onto another interval.
  QuadratureRule mapped_to(Interval target) const {
    const double scale = target.length() / interval_.length();
    std::vector<double> x(nodes_.size()), w(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      x[i] = target.a + (nodes_[i] - interval_.a) * scale;
      w[i] = weights_[i] * scale;
    }
    if (!x.empty()) {
      x.front() = std::max(x.front(), target.a);
      x.back() = std::min(x.back(), target.b);
    }
    return QuadratureRule(std::move(x), std::move(w), family_, target);
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw InvalidArgument("quadrature rule has no nodes");
    if (nodes_.size() != weights_.size()) {
      throw InvalidArgument("quadrature rule: nodes and weights differ in size");
    }
    if (!(0.0 <= interval_.a && interval_.a < interval_.b &&
          interval_.b <= 1.0)) {
      throw InvalidArgument("quadrature rule interval must satisfy 0 <= a < b <= 1");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!interval_.contains(nodes_[i])) {
        throw InvalidArgument("quadrature node outside its interval");
      }
      if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
        throw InvalidArgument("quadrature nodes must be strictly increasing");
      }
      if (!(weights_[i] > 0.0)) {
        throw InvalidArgument("quadrature weights must be positive");
      }
    }
  }

  std::vector<double> nodes_;
  std::vector<double> weights_;
  RuleFamily family_;
  Interval interval_;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], ascending, by Newton iteration on
// the three-term recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(
    std::size_t n) {
  std::vector<double> x(n), w(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // p1 = P_n(z), p0 = P_{n-1}(z)
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {std::move(x), std::move(w)};
}

}  // namespace detail

/// Builds an n-point rule of the given family on [a, b].
///
/// midpoint and trapezoid are composite rules on n equal cells
/// (trapezoid: n nodes, n - 1 cells, needs n >= 2). gauss_legendre is exact
/// for polynomials up to degree 2n - 1.
inline QuadratureRule make_rule(RuleFamily family, std::size_t n,
                                Interval interval = {}) {
  if (n == 0) throw InvalidArgument("make_rule: n must be positive");
  if (!(0.0 <= interval.a && interval.a < interval.b && interval.b <= 1.0)) {
    throw InvalidArgument("make_rule: interval must satisfy 0 <= a < b <= 1");
  }
  const double a = interval.a, len = interval.length();
  std::vector<double> x(n), w(n);
  switch (family) {
    case RuleFamily::midpoint: {
      const double h = len / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = a + (static_cast<double>(i) + 0.5) * h;
        w[i] = h;
      }
      break;
    }
    case RuleFamily::trapezoid: {
      if (n < 2) throw InvalidArgument("make_rule: trapezoid needs n >= 2");
      const double h = len / static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = a + static_cast<double>(i) * h;
        w[i] = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      }
      x.back() = interval.b;
      break;
    }
    case RuleFamily::gauss_legendre: {
      auto [ux, uw] = detail::gauss_legendre_unit(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = a + 0.5 * len * (ux[i] + 1.0);
        w[i] = 0.5 * len * uw[i];
      }
      break;
    }
  }
  return QuadratureRule(std::move(x), std::move(w), family, interval);
}

/// Concatenates rules on adjacent intervals [a, m] and [m, b]. A node shared
/// at m (closed rules) is merged and its weights summed.
inline QuadratureRule join(const QuadratureRule& left,
                           const QuadratureRule& right) {
  if (left.interval().b != right.interval().a) {
    throw InvalidArgument("join: intervals are not adjacent");
  }
  if (left.family() != right.family()) {
    throw InvalidArgument("join: rule families differ");
  }
  std::vector<double> x(left.nodes().begin(), left.nodes().end());
  std::vector<double> w(left.weights().begin(), left.weights().end());
  std::size_t start = 0;
  if (x.back() == right.node(0)) {
    w.back() += right.weight(0);
    start = 1;
  }
  for (std::size_t i = start; i < right.size(); ++i) {
    x.push_back(right.node(i));
    w.push_back(right.weight(i));
  }
  return QuadratureRule(std::move(x), std::move(w), left.family(),
                        {left.interval().a, right.interval().b});
}

}  // namespace fredholm
