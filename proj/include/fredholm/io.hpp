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

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "fredholm/cholesky.hpp"
#include "fredholm/determinant.hpp"
#include "fredholm/discretize.hpp"
#include "fredholm/errors.hpp"
#include "fredholm/kernels.hpp"

namespace fredholm {

using json = nlohmann::json;

namespace detail {

template <typename M>
json rows_to_json(const M& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json rule_to_json(const QuadratureRule& rule) {
  return {{"family", std::string(to_string(rule.family()))},
          {"interval", {rule.interval().a, rule.interval().b}},
          {"nodes", std::vector<double>(rule.nodes().begin(), rule.nodes().end())},
          {"weights",
           std::vector<double>(rule.weights().begin(), rule.weights().end())}};
}

}  // namespace detail

/// {"nodes_x": [...], "nodes_y": [...], "values": [[...], ...]}
inline json to_json(const GridKernel& g) {
  return {{"nodes_x", std::vector<double>(g.nodes_x().begin(), g.nodes_x().end())},
          {"nodes_y", std::vector<double>(g.nodes_y().begin(), g.nodes_y().end())},
          {"values", detail::rows_to_json(g.values())}};
}

inline GridKernel grid_kernel_from_json(const json& j) {
  try {
    auto nx = j.at("nodes_x").get<std::vector<double>>();
    auto ny = j.at("nodes_y").get<std::vector<double>>();
    const json& rows = j.at("values");
    if (!rows.is_array() || rows.size() != nx.size()) {
      throw InvalidArgument("grid kernel: values must have one row per x node");
    }
    Matrix values(nx.size(), ny.size());
    for (std::size_t i = 0; i < nx.size(); ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      if (row.size() != ny.size()) {
        throw InvalidArgument("grid kernel: row " + std::to_string(i) +
                              " has the wrong length");
      }
      for (std::size_t k = 0; k < ny.size(); ++k) {
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
      }
    }
    return GridKernel(std::move(nx), std::move(ny), std::move(values));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("grid kernel: ") + e.what());
  }
}

/// Debug dump: grid, scaling and the matrix row-major.
inline json to_json(const DiscreteOperator& op) {
  json j = detail::rule_to_json(op.rule());
  j["source"] = op.source_name();
  j["scaling"] = std::string(to_string(op.scaling()));
  j["matrix"] = detail::rows_to_json(op.matrix());
  return j;
}

inline json to_json(const CholeskyFactor& f) {
  json j = f.rule() ? detail::rule_to_json(*f.rule()) : json::object();
  j["source"] = f.source_name();
  j["lower"] = detail::rows_to_json(f.lower());
  return j;
}

inline json to_json(const DeterminantEstimate& e) {
  json j = {{"log_det", e.log_det},
            {"method", std::string(to_string(e.method))},
            {"n", e.n}};
  j["series_order"] = e.series_order ? json(*e.series_order) : json(nullptr);
  j["err_estimate"] = e.err_estimate ? json(*e.err_estimate) : json(nullptr);
  return j;
}

}  // namespace fredholm
