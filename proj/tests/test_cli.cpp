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

// Runs the built fredholm executable.

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

#include "support/subprocess.hpp"

namespace {

namespace fs = std::filesystem;
using fredholm::testing::run_cli;
using fredholm::testing::slurp;

std::string data_rows(const std::string& csv) {
  return fredholm::testing::csv_rows_without_wall_time(csv);
}

TEST(Cli, EvalSucceeds) {
  const auto r = run_cli("eval --kernel min --n 32,64 --methods matrix_logdet,diagonal_integral");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "kernel,method,n,log_det,err_vs_reference,wall_time_seconds,reference");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, IdenticalConfigsGiveIdenticalRows) {
  const std::string args =
      "eval --kernel '{\"name\":\"synthesized\",\"factor\":{\"name\":\"constant_volterra\","
      "\"params\":{\"alpha\":0.5}}}' --n 16,64 --rule gauss_legendre";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  const auto c = run_cli(args, "FREDHOLM_NUM_THREADS=1");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_FALSE(data_rows(a.out).empty());
  EXPECT_EQ(data_rows(a.out), data_rows(b.out));
  EXPECT_EQ(data_rows(a.out), data_rows(c.out));
}

TEST(Cli, UnknownKernelIsConfigError) {
  const auto r = run_cli("eval --kernel sinc --n 8");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sinc"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("eval --kernel min").code, 2);
  EXPECT_EQ(run_cli("eval --kernel min --n 8 --rule simpson").code, 2);
  EXPECT_EQ(run_cli("eval --kernel min --n 8 --methods trace").code, 2);
  EXPECT_EQ(run_cli("eval --kernel min --n 8 --series-order 7").code, 2);
  EXPECT_EQ(run_cli("roundtrip --kernel min --n 8").code, 2);
  EXPECT_EQ(run_cli("converge --kernel min --n 8,16").code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run_cli("--help").code, 0); }

TEST(Cli, NotPositiveDefiniteExitsThree) {
  const auto r = run_cli(
      "eval --kernel '{\"name\":\"constant\",\"params\":{\"c\":-2}}' --n 8 --methods "
      "matrix_logdet");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("not positive definite"), std::string::npos) << r.err;
}

TEST(Cli, HighOrderNeedsOverride) {
  const auto r = run_cli(
      "eval --kernel min --n 8 --methods fredholm_series --series-order 8 --allow-high-order");
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, JsonFormat) {
  const auto r = run_cli("eval --kernel zero --n 8 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  for (const auto& row : j) EXPECT_EQ(row["log_det"], 0.0);
}

TEST(Cli, ConvergeWritesSummary) {
  const fs::path out =
      fs::temp_directory_path() / ("fredholm_converge_" + std::to_string(::getpid()) + ".csv");
  const auto r = run_cli("converge --kernel zero --n 8,16,32 --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("reference,analytic,0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("order,matrix_logdet,exact"), std::string::npos) << r.out;
  const std::string csv = slurp(out);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);  // header + 3 x 3 rows
  fs::remove(out);
}

TEST(Cli, RoundtripReportsAlpha) {
  const auto r = run_cli(
      "roundtrip --kernel '{\"name\":\"constant_volterra\",\"params\":{\"alpha\":0.5}}' --n 64");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("A[constant_volterra],matrix_logdet,64,"), std::string::npos) << r.out;
}

}  // namespace
