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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fredholm/cholesky.hpp"
#include "fredholm/cli/kernel_spec.hpp"
#include "fredholm/cli/oracles.hpp"
#include "fredholm/determinant.hpp"
#include "fredholm/io.hpp"

namespace fredholm {
namespace {

TEST(GridKernelJson, RoundTrips) {
  Matrix v(2, 3);
  v << 0.1, 0.2, 0.3, -1.0, 1e-300, 12345.678;
  const GridKernel g({0.25, 0.75}, {0.0, 0.5, 1.0}, v);
  const GridKernel back = grid_kernel_from_json(json::parse(to_json(g).dump()));
  EXPECT_EQ(back.values(), g.values());
  EXPECT_EQ(std::vector<double>(back.nodes_x().begin(), back.nodes_x().end()),
            (std::vector<double>{0.25, 0.75}));
}

TEST(GridKernelJson, MalformedInputIsInvalidArgument) {
  EXPECT_THROW(grid_kernel_from_json(json::parse(R"({"nodes_x": [0.5]})")), InvalidArgument);
  EXPECT_THROW(grid_kernel_from_json(json::parse(
                   R"({"nodes_x": [0.5], "nodes_y": [0.5], "values": [[1, 2]]})")),
               InvalidArgument);
  EXPECT_THROW(grid_kernel_from_json(json::parse(
                   R"({"nodes_x": [0.5], "nodes_y": [0.5], "values": [["x"]]})")),
               InvalidArgument);
}

TEST(DebugJson, OperatorFactorAndEstimate) {
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 2);
  const DiscreteOperator op = assemble(catalog::brownian(), rule);
  const json j = to_json(op);
  EXPECT_EQ(j["family"], "midpoint");
  EXPECT_EQ(j["scaling"], "symmetric_nystrom");
  EXPECT_EQ(j["source"], "min");
  EXPECT_DOUBLE_EQ(j["matrix"][1][1].get<double>(), 0.375);

  const CholeskyFactor f = factor_identity_plus(op);
  EXPECT_EQ(to_json(f)["lower"][0][1], 0.0);

  const json e = to_json(logdet_matrix(f));
  EXPECT_EQ(e["method"], "matrix_logdet");
  EXPECT_EQ(e["n"], 2);
  EXPECT_TRUE(e["series_order"].is_null());
}

using cli::ConfigError;
using cli::parse_kernel_arg;
using cli::parse_kernel_spec;

TEST(KernelSpecParse, CatalogIdsAndParams) {
  const cli::KernelSpec s =
      parse_kernel_spec(json::parse(R"({"name": "constant", "params": {"c": 0.5}})"));
  EXPECT_EQ(s.name, "constant");
  EXPECT_EQ(s.param("c", 1.0), 0.5);
  EXPECT_EQ(parse_kernel_arg("brownian").name, "min");
  EXPECT_EQ(parse_kernel_arg("  {\"name\": \"zero\"}").name, "zero");
}

TEST(KernelSpecParse, SynthesizedNeedsFactor) {
  const cli::KernelSpec s = parse_kernel_arg(
      R"({"name": "synthesized", "factor": {"name": "constant_volterra", "params": {"alpha": 0.5}}})");
  EXPECT_EQ(s.label(), "A[constant_volterra]");
  EXPECT_NEAR(*cli::analytic_log_det(s), 0.5, 1e-15);
  EXPECT_THROW(parse_kernel_arg(R"({"name": "synthesized"})"), ConfigError);
}

TEST(KernelSpecParse, Errors) {
  EXPECT_THROW(parse_kernel_arg("sinc"), ConfigError);
  EXPECT_THROW(parse_kernel_arg(R"({"name": "min", "params": {"c": 1}})"), ConfigError);
  EXPECT_THROW(parse_kernel_arg(R"({"name": "constant", "params": {"c": "one"}})"), ConfigError);
  EXPECT_THROW(parse_kernel_arg(R"({"name": 3})"), ConfigError);
  EXPECT_THROW(parse_kernel_arg(R"({"name": "min",)"), ConfigError);
  EXPECT_THROW(parse_kernel_arg("@/nonexistent/spec.json"), ConfigError);
}

TEST(KernelSpecParse, ReadsFileAndRoundTrips) {
  const auto path = std::filesystem::temp_directory_path() / "fredholm_spec_test.json";
  {
    std::ofstream out(path);
    out << R"({"name": "rank_one", "params": {"u0": 1, "u1": 2, "v1": 3, "scale": 0.5}})";
  }
  const cli::KernelSpec s = parse_kernel_arg("@" + path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(s.scale(), 0.5);
  const cli::KernelSpec again = parse_kernel_spec(cli::to_json(s));
  EXPECT_EQ(again.params, s.params);
  // u = 1 + 2x, v = 3x: <u, v> = 3/2 + 2 = 7/2.
  EXPECT_NEAR(*cli::analytic_log_det(s), std::log(1.0 + 0.5 * 3.5), 1e-15);
  const Kernel k = cli::build_kernel(s, make_rule(RuleFamily::midpoint, 4));
  EXPECT_NEAR(k(0.5, 0.5), 0.5 * 2.0 * 1.5, 1e-15);
}

TEST(KernelSpecParse, GridObject) {
  const cli::KernelSpec s = parse_kernel_arg(
      R"({"nodes_x": [0.0, 1.0], "nodes_y": [0.0, 1.0], "values": [[1, 1], [1, 1]]})");
  ASSERT_TRUE(s.grid);
  EXPECT_FALSE(cli::analytic_log_det(s));
  EXPECT_EQ(cli::build_kernel(s, make_rule(RuleFamily::midpoint, 4))(0.3, 0.6), 1.0);
}

TEST(AnalyticOracle, Catalog) {
  EXPECT_EQ(*cli::analytic_log_det(parse_kernel_arg("zero")), 0.0);
  EXPECT_NEAR(*cli::analytic_log_det(parse_kernel_arg("min")), std::log(std::cosh(1.0)), 1e-15);
  EXPECT_NEAR(*cli::analytic_log_det(parse_kernel_arg(R"({"name": "min", "params": {"scale": -1}})")),
              std::log(std::cos(1.0)), 1e-15);
  EXPECT_FALSE(cli::analytic_log_det(parse_kernel_arg(R"({"name": "min", "params": {"scale": -4}})")));
  EXPECT_FALSE(cli::analytic_log_det(parse_kernel_arg("smooth_volterra")));
}

}  // namespace
}  // namespace fredholm
