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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fredholm/errors.hpp"
#include "fredholm/parallel.hpp"
#include "fredholm/quadrature.hpp"
#include "fredholm/types.hpp"

namespace fredholm {

/// Region on which a kernel is known to be continuous.
enum class Continuity { global, lower_triangle, upper_triangle, none };

inline std::string_view to_string(Continuity c) {
  switch (c) {
    case Continuity::global:
      return "global";
    case Continuity::lower_triangle:
      return "lower_triangle";
    case Continuity::upper_triangle:
      return "upper_triangle";
    case Continuity::none:
      return "none";
  }
  return "unknown";
}

/// Structural metadata carried alongside a kernel function.
struct KernelTraits {
  bool symmetric = false;
  /// K(x, y) == 0 whenever y > x. The diagonal belongs to the lower part.
  bool lower_triangular = false;
  /// K(x, y) == 0 whenever y < x.
  bool upper_triangular = false;
  Continuity continuity = Continuity::global;
};

/// A real kernel K(x, y) on domain()^2, extended by zero outside it.
///
/// Kernels are immutable values; copies share the underlying function, so
/// evaluation is safe from concurrent threads.
class Kernel {
 public:
  using Function = std::function<double(double, double)>;

  Kernel(std::string name, Function f, KernelTraits traits = {},
         Interval domain = {})
      : name_(std::move(name)),
        eval_(std::make_shared<const Function>(std::move(f))),
        traits_(traits),
        domain_(domain) {}

  double operator()(double x, double y) const {
    if (!domain_.contains(x) || !domain_.contains(y)) return 0.0;
    return (*eval_)(x, y);
  }

  const std::string& name() const { return name_; }
  const KernelTraits& traits() const { return traits_; }
  bool is_symmetric() const { return traits_.symmetric; }
  bool is_lower_triangular() const { return traits_.lower_triangular; }
  bool is_upper_triangular() const { return traits_.upper_triangular; }
  bool is_triangular() const {
    return traits_.lower_triangular || traits_.upper_triangular;
  }
  Continuity continuity() const { return traits_.continuity; }
  const Interval& domain() const { return domain_; }

  Kernel with_domain(Interval domain) const {
    Kernel k = *this;
    k.domain_ = domain;
    return k;
  }
  Kernel with_name(std::string name) const {
    Kernel k = *this;
    k.name_ = std::move(name);
    return k;
  }

 private:
  std::string name_;
  std::shared_ptr<const Function> eval_;
  KernelTraits traits_;
  Interval domain_;
};

/// Dense polynomial c0 + c1 x + c2 x^2 + ...
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// Exact value of the integral of u(x) v(x) over [0, 1].
inline double inner_product(const Polynomial& u, const Polynomial& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < v.coeffs.size(); ++j) {
      total += u.coeffs[i] * v.coeffs[j] / static_cast<double>(i + j + 1);
    }
  }
  return total;
}

// Built-in kernels. Each has an independent closed-form or terminating-series
// determinant, see cli/oracles.hpp.
namespace catalog {

inline Kernel zero() {
  return Kernel("zero", [](double, double) { return 0.0; },
                {.symmetric = true, .lower_triangular = true,
                 .upper_triangular = true});
}

inline Kernel constant(double c) {
  return Kernel("constant", [c](double, double) { return c; },
                {.symmetric = true});
}

/// u(x) v(y).
inline Kernel rank_one(Polynomial u, Polynomial v) {
  const bool sym = u == v;
  return Kernel("rank_one",
                [u = std::move(u), v = std::move(v)](double x, double y) {
                  return u(x) * v(y);
                },
                {.symmetric = sym});
}

/// Brownian covariance min(x, y).
inline Kernel brownian() {
  return Kernel("min", [](double x, double y) { return std::min(x, y); },
                {.symmetric = true});
}

/// z * K.
inline Kernel scaled(double z, const Kernel& k) {
  return Kernel(k.name(), [z, k](double x, double y) { return z * k(x, y); },
                k.traits(), k.domain());
}

/// alpha * 1{y <= x}. The diagonal carries the value alpha.
inline Kernel constant_volterra(double alpha) {
  return Kernel("constant_volterra",
                [alpha](double x, double y) { return y <= x ? alpha : 0.0; },
                {.lower_triangular = true,
                 .continuity = Continuity::lower_triangle});
}

/// beta * (x - y) * 1{y <= x}. Vanishes on the diagonal.
inline Kernel smooth_volterra(double beta = 1.0) {
  return Kernel("smooth_volterra",
                [beta](double x, double y) {
                  return y <= x ? beta * (x - y) : 0.0;
                },
                {.lower_triangular = true, .continuity = Continuity::global});
}

}  // namespace catalog

/// K restricted to [a, t]^2 and extended by zero outside it.
inline Kernel restrict(const Kernel& k, double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw DomainError("restrict: t must lie in (0, 1], got " +
                      std::to_string(t));
  }
  const Interval& d = k.domain();
  if (!(d.a < t)) {
    throw DomainError("restrict: t lies below the kernel's domain");
  }
  return k.with_domain({d.a, std::min(d.b, t)});
}

/// K*(x, y) = K(y, x). Lower- and upper-triangular flags swap.
inline Kernel adjoint(const Kernel& k) {
  KernelTraits traits = k.traits();
  std::swap(traits.lower_triangular, traits.upper_triangular);
  if (traits.continuity == Continuity::lower_triangle) {
    traits.continuity = Continuity::upper_triangle;
  } else if (traits.continuity == Continuity::upper_triangle) {
    traits.continuity = Continuity::lower_triangle;
  }
  if (traits.symmetric) return k;
  return Kernel(k.name() + "*", [k](double x, double y) { return k(y, x); },
                traits, k.domain());
}

enum class Interpolation { nearest, bilinear };

/// A kernel tabulated on a tensor grid of nodes.
class GridKernel {
 public:
  GridKernel(std::vector<double> nodes_x, std::vector<double> nodes_y,
             Matrix values, Interpolation interpolation = Interpolation::bilinear)
      : nodes_x_(std::move(nodes_x)),
        nodes_y_(std::move(nodes_y)),
        values_(std::move(values)),
        interpolation_(interpolation) {
    check_axis(nodes_x_, "nodes_x");
    check_axis(nodes_y_, "nodes_y");
    if (values_.rows() != static_cast<Eigen::Index>(nodes_x_.size()) ||
        values_.cols() != static_cast<Eigen::Index>(nodes_y_.size())) {
      throw InvalidArgument("grid kernel: values must be len(nodes_x) x len(nodes_y)");
    }
  }

  std::span<const double> nodes_x() const { return nodes_x_; }
  std::span<const double> nodes_y() const { return nodes_y_; }
  const Matrix& values() const { return values_; }
  Interpolation interpolation() const { return interpolation_; }

  /// Interpolated value; queries outside the node range clamp to the edge.
  double operator()(double x, double y) const {
    if (interpolation_ == Interpolation::nearest) {
      return values_(nearest(nodes_x_, x), nearest(nodes_y_, y));
    }
    auto [i, tx] = bracket(nodes_x_, x);
    auto [j, ty] = bracket(nodes_y_, y);
    const Eigen::Index i1 = std::min<Eigen::Index>(i + 1, values_.rows() - 1);
    const Eigen::Index j1 = std::min<Eigen::Index>(j + 1, values_.cols() - 1);
    return (1 - tx) * ((1 - ty) * values_(i, j) + ty * values_(i, j1)) +
           tx * ((1 - ty) * values_(i1, j) + ty * values_(i1, j1));
  }

  Kernel to_kernel(std::string name, KernelTraits traits = {}) const {
    auto self = std::make_shared<const GridKernel>(*this);
    return Kernel(std::move(name),
                  [self](double x, double y) { return (*self)(x, y); }, traits);
  }

 private:
  static void check_axis(const std::vector<double>& nodes, const char* what) {
    if (nodes.empty()) {
      throw InvalidArgument(std::string("grid kernel: ") + what + " is empty");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!(nodes[i] >= 0.0 && nodes[i] <= 1.0) ||
          (i > 0 && !(nodes[i] > nodes[i - 1]))) {
        throw InvalidArgument(std::string("grid kernel: ") + what +
                              " must be strictly increasing within [0, 1]");
      }
    }
  }

  static Eigen::Index nearest(const std::vector<double>& nodes, double x) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    if (it == nodes.end()) return static_cast<Eigen::Index>(nodes.size() - 1);
    if (it == nodes.begin()) return 0;
    auto prev = it - 1;
    return static_cast<Eigen::Index>((x - *prev <= *it - x ? prev : it) -
                                     nodes.begin());
  }

  // Index of the cell's left node and the fractional position inside it.
  static std::pair<Eigen::Index, double> bracket(const std::vector<double>& nodes,
                                                 double x) {
    if (nodes.size() == 1 || x <= nodes.front()) return {0, 0.0};
    if (x >= nodes.back()) {
      return {static_cast<Eigen::Index>(nodes.size() - 1), 0.0};
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const auto i = static_cast<Eigen::Index>(it - nodes.begin() - 1);
    return {i, (x - nodes[i]) / (nodes[i + 1] - nodes[i])};
  }

  std::vector<double> nodes_x_;
  std::vector<double> nodes_y_;
  Matrix values_;
  Interpolation interpolation_;
};

/// How the inner integral of a kernel product is discretised.
enum class ProductQuadrature {
  /// Inner nodes are the rule's nodes; the product is a matrix product.
  /// At a node lying on a kernel's jump line the integrand is sampled as the
  /// mean of its one-sided limits.
  shared_nodes,
  /// The inner interval is split at the jump lines of triangular factors and
  /// the rule is remapped onto every piece on which the integrand can be
  /// nonzero.
  split_at_jumps,
};

struct ComposeOptions {
  ProductQuadrature strategy = ProductQuadrature::shared_nodes;
  /// Output grid; defaults to the rule's nodes on both axes.
  std::optional<std::vector<double>> output_nodes;
};

namespace detail {

// Value of z -> K(x, z) just left and right of z = x, for a triangular kernel
// whose jump line passes through the point.
struct OneSided {
  double left;
  double right;
};

inline OneSided row_limits(const Kernel& k, double x) {
  const double v = k(x, x);
  if (k.is_lower_triangular()) return {v, 0.0};
  return {0.0, v};
}

// z -> L(z, y) around z = y.
inline OneSided column_limits(const Kernel& l, double y) {
  const double v = l(y, y);
  if (l.is_lower_triangular()) return {0.0, v};
  return {v, 0.0};
}

inline std::optional<std::size_t> find_node(std::span<const double> nodes,
                                            double x) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it != nodes.end() && *it == x) {
    return static_cast<std::size_t>(it - nodes.begin());
  }
  return std::nullopt;
}

// Integral over z of K(x, z) L(z, y), with the rule remapped onto each piece
// between the jump lines of the triangular factors.
inline double split_integral(const Kernel& k, const Kernel& l, double x,
                             double y, const QuadratureRule& rule) {
  const Interval& span = rule.interval();
  double cuts[4];
  std::size_t ncuts = 0;
  cuts[ncuts++] = span.a;
  const auto add_cut = [&](double c) {
    if (c > span.a && c < span.b) cuts[ncuts++] = c;
  };
  if (k.is_triangular()) add_cut(x);
  if (l.is_triangular()) add_cut(y);
  cuts[ncuts++] = span.b;
  std::sort(cuts, cuts + ncuts);

  const double scale_base = 1.0 / span.length();
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < ncuts; ++p) {
    const double lo = cuts[p], hi = cuts[p + 1];
    if (!(hi > lo)) continue;
    // K lower: K(x, z) = 0 for z > x. K upper: zero for z < x.
    if (k.is_lower_triangular() && !k.is_upper_triangular() && lo >= x) continue;
    if (k.is_upper_triangular() && !k.is_lower_triangular() && hi <= x) continue;
    // L lower: L(z, y) = 0 for z < y. L upper: zero for z > y.
    if (l.is_lower_triangular() && !l.is_upper_triangular() && hi <= y) continue;
    if (l.is_upper_triangular() && !l.is_lower_triangular() && lo >= y) continue;
    if (k.is_lower_triangular() && k.is_upper_triangular()) continue;
    if (l.is_lower_triangular() && l.is_upper_triangular()) continue;

    const double scale = (hi - lo) * scale_base;
    double piece = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double z = lo + (rule.node(q) - span.a) * scale;
      z = std::clamp(z, lo, hi);
      // Evaluate on the piece's side of each jump line.
      const double kv = (k.is_triangular() && z == x)
                            ? (lo >= x ? row_limits(k, x).right
                                       : row_limits(k, x).left)
                            : k(x, z);
      const double lv = (l.is_triangular() && z == y)
                            ? (lo >= y ? column_limits(l, y).right
                                       : column_limits(l, y).left)
                            : l(z, y);
      piece += rule.weight(q) * kv * lv;
    }
    total += piece * scale;
  }
  return total;
}

}  // namespace detail

/// Tabulates (KL)(x, y) = integral of K(x, z) L(z, y) dz on the tensor grid
/// of output nodes (the rule's nodes unless overridden).
inline GridKernel compose(const Kernel& k, const Kernel& l,
                          const QuadratureRule& rule,
                          const ComposeOptions& options = {}) {
  std::vector<double> out(rule.nodes().begin(), rule.nodes().end());
  if (options.output_nodes) {
    if (options.output_nodes->empty()) {
      throw InvalidArgument("compose: output grid is empty");
    }
    out = *options.output_nodes;
  }
  const std::size_t m = out.size();
  const std::size_t n = rule.size();
  Matrix values(m, m);

  if (options.strategy == ProductQuadrature::split_at_jumps) {
    parallel_for(0, m, [&](std::size_t i) {
      for (std::size_t j = 0; j < m; ++j) {
        values(i, j) = detail::split_integral(k, l, out[i], out[j], rule);
      }
    });
    return GridKernel(out, out, std::move(values));
  }

  Matrix left(m, n), right(n, m);
  parallel_for(0, m, [&](std::size_t i) {
    for (std::size_t q = 0; q < n; ++q) {
      const double z = rule.node(q);
      left(i, q) = k(out[i], z) * rule.weight(q);
      right(q, i) = l(z, out[i]);
    }
  });
  // Jump lines through shared nodes: replace the sample by the mean of the
  // one-sided limits of that factor.
  std::vector<std::optional<std::size_t>> hit(m);
  for (std::size_t i = 0; i < m; ++i) {
    hit[i] = detail::find_node(rule.nodes(), out[i]);
    if (!hit[i]) continue;
    const std::size_t q = *hit[i];
    if (k.is_triangular()) {
      auto s = detail::row_limits(k, out[i]);
      left(i, q) = 0.5 * (s.left + s.right) * rule.weight(q);
    }
    if (l.is_triangular()) {
      auto s = detail::column_limits(l, out[i]);
      right(q, i) = 0.5 * (s.left + s.right);
    }
  }
  values.noalias() = left * right;
  // Where both factors jump at the same node, the mean of the product's
  // one-sided limits differs from the product of the means.
  if (k.is_triangular() && l.is_triangular()) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!hit[i]) continue;
      const std::size_t q = *hit[i];
      const auto ks = detail::row_limits(k, out[i]);
      const auto ls = detail::column_limits(l, out[i]);
      const double exact = 0.5 * (ks.left * ls.left + ks.right * ls.right);
      const double used =
          0.25 * (ks.left + ks.right) * (ls.left + ls.right);
      values(i, i) += rule.weight(q) * (exact - used);
    }
  }
  return GridKernel(out, out, std::move(values));
}

/// (KL) as a kernel evaluated pointwise with the split_at_jumps strategy.
/// Each evaluation costs one pass of `inner` per smooth piece.
inline Kernel compose_pointwise(const Kernel& k, const Kernel& l,
                                QuadratureRule inner, KernelTraits traits = {}) {
  return Kernel(k.name() + "." + l.name(),
                [k, l, inner = std::move(inner)](double x, double y) {
                  return detail::split_integral(k, l, x, y, inner);
                },
                traits);
}

struct SynthesisOptions {
  ProductQuadrature product = ProductQuadrature::shared_nodes;
  /// Inner rule for the T T* term. shared_nodes defaults to the
  /// discretisation rule itself; split_at_jumps defaults to 16-point
  /// Gauss-Legendre per smooth piece.
  std::optional<QuadratureRule> inner;
};

/// A = T + T* + T T*, the kernel with I + A = (I + T)(I + T*).
///
/// Off the diagonal T + T* is T(max, min); on the diagonal it is the limit
/// T(t, t) from the lower triangle, so A is continuous whenever T is
/// continuous on the closed lower triangle.
inline Kernel synthesize_A_from_T(const Kernel& t, const QuadratureRule& rule,
                                  const SynthesisOptions& options = {}) {
  if (!t.is_lower_triangular()) {
    throw ContractViolation("synthesize_A_from_T: factor '" + t.name() +
                            "' is not lower triangular");
  }
  const Kernel t_star = adjoint(t);
  const KernelTraits sym{.symmetric = true};
  Kernel product = [&] {
    if (options.product == ProductQuadrature::split_at_jumps) {
      QuadratureRule inner = options.inner.value_or(
          make_rule(RuleFamily::gauss_legendre, 16, rule.interval()));
      return compose_pointwise(t, t_star, std::move(inner), sym);
    }
    const QuadratureRule& inner = options.inner ? *options.inner : rule;
    return compose(t, t_star, inner).to_kernel(t.name() + ".T*", sym);
  }();
  return Kernel("A[" + t.name() + "]",
                [t, product](double x, double y) {
                  const double tri = y <= x ? t(x, y) : t(y, x);
                  return tri + product(x, y);
                },
                {.symmetric = true, .continuity = Continuity::global},
                t.domain());
}

}  // namespace fredholm
