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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fredholm/cholesky.hpp"
#include "fredholm/cli/kernel_spec.hpp"
#include "fredholm/cli/oracles.hpp"
#include "fredholm/determinant.hpp"
#include "fredholm/discretize.hpp"
#include "fredholm/series.hpp"

namespace fredholm::cli {

enum class OutputFormat { csv, json };

/// Where a row's err_vs_reference comes from.
enum class ReferenceKind { analytic, finest_grid, none };

inline std::string_view to_string(ReferenceKind r) {
  switch (r) {
    case ReferenceKind::analytic:
      return "analytic";
    case ReferenceKind::finest_grid:
      return "finest_grid";
    case ReferenceKind::none:
      return "none";
  }
  return "none";
}

struct RunConfig {
  KernelSpec kernel;
  std::vector<Method> methods{Method::diagonal_integral, Method::matrix_logdet,
                              Method::fredholm_series};
  std::vector<std::size_t> grid_sizes;
  RuleFamily rule = RuleFamily::midpoint;
  std::optional<int> series_order;
  bool allow_high_order = false;
  /// Inner quadrature for synthesized kernels.
  ProductQuadrature product = ProductQuadrature::split_at_jumps;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::csv;
};

struct ResultRow {
  std::string kernel;
  Method method = Method::matrix_logdet;
  std::size_t n = 0;
  double log_det = 0.0;
  std::optional<double> err_vs_reference;
  double wall_time_seconds = 0.0;
  ReferenceKind reference = ReferenceKind::none;
};

inline constexpr int kDefaultSeriesOrder = 6;

inline bool uses_series(const RunConfig& c) {
  return std::find(c.methods.begin(), c.methods.end(), Method::fredholm_series) !=
         c.methods.end();
}

/// Throws ConfigError when the configuration violates its invariants.
/// A missing series order defaults to 6 when the series is requested.
inline RunConfig validated(RunConfig c) {
  if (c.methods.empty()) throw ConfigError("no methods selected");
  std::sort(c.methods.begin(), c.methods.end());
  c.methods.erase(std::unique(c.methods.begin(), c.methods.end()), c.methods.end());
  if (c.grid_sizes.empty()) throw ConfigError("no grid sizes given");
  for (std::size_t n : c.grid_sizes) {
    if (n == 0) throw ConfigError("grid sizes must be positive");
    if (c.rule == RuleFamily::trapezoid && n < 2) {
      throw ConfigError("trapezoid grids need n >= 2");
    }
  }
  std::sort(c.grid_sizes.begin(), c.grid_sizes.end());
  c.grid_sizes.erase(std::unique(c.grid_sizes.begin(), c.grid_sizes.end()),
                     c.grid_sizes.end());
  if (uses_series(c)) {
    if (!c.series_order) c.series_order = kDefaultSeriesOrder;
    if (*c.series_order < 0) throw ConfigError("series order must be >= 0");
    if (*c.series_order > kMaxSeriesOrder && !c.allow_high_order) {
      throw CostGuardError("series order " + std::to_string(*c.series_order) +
                           " exceeds the cost guard of " +
                           std::to_string(kMaxSeriesOrder) +
                           " (pass --allow-high-order to override)");
    }
  } else if (c.series_order) {
    throw ConfigError("--series-order is only valid with fredholm_series");
  }
  return c;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// All requested estimates on one grid size.
inline std::vector<ResultRow> evaluate_grid(const RunConfig& c, std::size_t n) {
  using clock = std::chrono::steady_clock;
  const QuadratureRule rule = make_rule(c.rule, n);
  const Kernel k = build_kernel(c.kernel, rule, {.product = c.product});
  std::vector<ResultRow> rows;

  const bool needs_factor =
      std::any_of(c.methods.begin(), c.methods.end(),
                  [](Method m) { return m != Method::fredholm_series; });
  auto start = clock::now();
  const DiscreteOperator op = assemble(k, rule);
  const double assembly_time = seconds_since(start);
  std::optional<CholeskyFactor> f;
  double factor_time = 0.0;
  if (needs_factor) {
    start = clock::now();
    f = factor_identity_plus(op);
    factor_time = seconds_since(start);
  }
  for (Method m : c.methods) {
    start = clock::now();
    DeterminantEstimate e;
    switch (m) {
      case Method::matrix_logdet:
        e = logdet_matrix(*f);
        break;
      case Method::diagonal_integral:
        e = logdet_via_diagonal(extract_T_diagonal(*f));
        break;
      case Method::fredholm_series:
        e = fredholm_series(op, *c.series_order,
                            {.allow_high_order = c.allow_high_order});
        break;
    }
    double elapsed = seconds_since(start) + assembly_time;
    if (m != Method::fredholm_series) elapsed += factor_time;
    if (!std::isfinite(e.log_det)) {
      throw NumericError("non-finite log-determinant for method " +
                         std::string(to_string(m)));
    }
    rows.push_back({.kernel = c.kernel.label(),
                    .method = m,
                    .n = n,
                    .log_det = e.log_det,
                    .wall_time_seconds = elapsed});
  }
  return rows;
}

inline void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.kernel != b.kernel) return a.kernel < b.kernel;
    if (a.method != b.method) return a.method < b.method;
    return a.n < b.n;
  });
}

inline void attach_reference(std::vector<ResultRow>& rows, double reference,
                             ReferenceKind kind) {
  for (auto& r : rows) {
    r.err_vs_reference = std::abs(r.log_det - reference);
    r.reference = kind;
  }
}

}  // namespace detail

/// One row per (method, n), ordered by kernel, method, ascending n. Rows carry
/// the error against the analytic oracle when one is registered.
inline std::vector<ResultRow> cmd_eval(const RunConfig& config) {
  const RunConfig c = validated(config);
  std::vector<ResultRow> rows;
  for (std::size_t n : c.grid_sizes) {
    auto grid_rows = detail::evaluate_grid(c, n);
    rows.insert(rows.end(), grid_rows.begin(), grid_rows.end());
  }
  if (auto ref = analytic_log_det(c.kernel)) {
    detail::attach_reference(rows, *ref, ReferenceKind::analytic);
  }
  detail::sort_rows(rows);
  return rows;
}

struct MethodOrder {
  Method method = Method::matrix_logdet;
  /// log(e_k / e_{k+1}) / log(n_{k+1} / n_k) for successive grid sizes.
  std::vector<double> pairwise;
  /// True when every error is zero.
  bool exact = false;

  /// Order from the two finest usable grids, or "exact".
  std::string summary() const {
    if (exact) return "exact";
    for (auto it = pairwise.rbegin(); it != pairwise.rend(); ++it) {
      if (std::isfinite(*it)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *it);
        return buf;
      }
    }
    return "undetermined";
  }
};

struct ConvergenceReport {
  std::vector<ResultRow> rows;
  std::vector<MethodOrder> orders;
  ReferenceKind reference = ReferenceKind::none;
  double reference_value = 0.0;
};

/// Convergence study over a geometric sequence of grid sizes. The reference
/// is the analytic oracle when registered, else matrix_logdet on the finest
/// grid.
inline ConvergenceReport cmd_converge(const RunConfig& config) {
  const RunConfig c = validated(config);
  if (c.grid_sizes.size() < 3) {
    throw ConfigError("converge needs at least three grid sizes");
  }
  const double ratio =
      static_cast<double>(c.grid_sizes[1]) / static_cast<double>(c.grid_sizes[0]);
  for (std::size_t i = 1; i + 1 < c.grid_sizes.size(); ++i) {
    const double r = static_cast<double>(c.grid_sizes[i + 1]) /
                     static_cast<double>(c.grid_sizes[i]);
    if (std::abs(r - ratio) > 1e-9 * ratio) {
      throw ConfigError("converge needs geometric grid sizes");
    }
  }

  ConvergenceReport report;
  for (std::size_t n : c.grid_sizes) {
    auto grid_rows = detail::evaluate_grid(c, n);
    report.rows.insert(report.rows.end(), grid_rows.begin(), grid_rows.end());
  }
  if (auto ref = analytic_log_det(c.kernel)) {
    report.reference = ReferenceKind::analytic;
    report.reference_value = *ref;
  } else {
    RunConfig finest = c;
    finest.methods = {Method::matrix_logdet};
    finest.series_order.reset();
    report.reference = ReferenceKind::finest_grid;
    report.reference_value =
        detail::evaluate_grid(finest, c.grid_sizes.back()).front().log_det;
  }
  detail::attach_reference(report.rows, report.reference_value, report.reference);
  detail::sort_rows(report.rows);

  for (Method m : c.methods) {
    MethodOrder order{.method = m};
    std::vector<const ResultRow*> mine;
    for (const auto& r : report.rows) {
      if (r.method == m) mine.push_back(&r);
    }
    order.exact = std::all_of(mine.begin(), mine.end(), [](const ResultRow* r) {
      return *r->err_vs_reference == 0.0;
    });
    for (std::size_t i = 0; i + 1 < mine.size(); ++i) {
      const double e0 = *mine[i]->err_vs_reference;
      const double e1 = *mine[i + 1]->err_vs_reference;
      const double step = std::log(static_cast<double>(mine[i + 1]->n) /
                                   static_cast<double>(mine[i]->n));
      order.pairwise.push_back(e0 > 0.0 && e1 > 0.0 ? std::log(e0 / e1) / step
                                                    : NAN);
    }
    report.orders.push_back(std::move(order));
  }
  return report;
}

/// Synthesizes A = T + T* + T T* from a triangular catalog factor and reports
/// every estimator against the exact integral of T(t, t).
inline std::vector<ResultRow> cmd_roundtrip(const RunConfig& config) {
  RunConfig c = config;
  const Kernel t = build_kernel(c.kernel, make_rule(RuleFamily::midpoint, 1));
  if (!t.is_lower_triangular()) {
    throw ConfigError("roundtrip needs a lower-triangular factor, '" +
                      c.kernel.label() + "' is not");
  }
  KernelSpec synthesized;
  synthesized.name = "synthesized";
  synthesized.factor = std::make_shared<const KernelSpec>(c.kernel);
  c.kernel = synthesized;
  c = validated(c);

  std::vector<ResultRow> rows;
  for (std::size_t n : c.grid_sizes) {
    auto grid_rows = detail::evaluate_grid(c, n);
    rows.insert(rows.end(), grid_rows.begin(), grid_rows.end());
  }
  detail::attach_reference(rows, diagonal_integral(t), ReferenceKind::analytic);
  detail::sort_rows(rows);
  return rows;
}

inline constexpr std::string_view kCsvHeader =
    "kernel,method,n,log_det,err_vs_reference,wall_time_seconds,reference";

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.6f", r.wall_time_seconds);
    out += r.kernel;
    out += ',';
    out += to_string(r.method);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += detail::format_real(r.log_det);
    out += ',';
    if (r.err_vs_reference) out += detail::format_real(*r.err_vs_reference);
    out += ',';
    out += wall;
    out += ',';
    out += to_string(r.reference);
    out += '\n';
  }
  return out;
}

inline nlohmann::json rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"kernel", r.kernel},
                   {"method", std::string(to_string(r.method))},
                   {"n", r.n},
                   {"log_det", r.log_det},
                   {"err_vs_reference", r.err_vs_reference
                                            ? nlohmann::json(*r.err_vs_reference)
                                            : nlohmann::json(nullptr)},
                   {"wall_time_seconds", r.wall_time_seconds},
                   {"reference", std::string(to_string(r.reference))}});
  }
  return out;
}

inline std::string render(const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::json) return rows_to_json(rows).dump(2) + "\n";
  return to_csv(rows);
}

}  // namespace fredholm::cli
