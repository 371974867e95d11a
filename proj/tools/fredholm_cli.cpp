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

// fredholm: evaluate Fredholm log-determinants of integral operators on [0, 1].
//
//   fredholm eval      --kernel <json|id|@file> --n 64,256 [--methods ...]
//   fredholm converge  --kernel min --n 128,256,512,1024 --methods matrix_logdet
//   fredholm roundtrip --kernel '{"name":"constant_volterra","params":{"alpha":0.5}}' --n 256,1024
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numeric failure
// (including a matrix that is not positive definite).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fredholm/cli/runner.hpp"
#include "fredholm/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RawOptions {
  std::string kernel;
  std::vector<std::string> methods;
  std::vector<std::size_t> sizes;
  std::string rule = "midpoint";
  int series_order = -1;
  bool allow_high_order = false;
  std::string product = "split_at_jumps";
  std::string out = "-";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, RawOptions& o, bool with_methods) {
  cmd->add_option("--kernel", o.kernel,
                  "Kernel spec: inline JSON, @file.json or a catalog id")
      ->required();
  if (with_methods) {
    cmd->add_option("--methods", o.methods,
                    "diagonal_integral,matrix_logdet,fredholm_series (default: all)")
        ->delimiter(',');
  }
  cmd->add_option("--n", o.sizes, "Grid sizes, comma separated")
      ->delimiter(',')
      ->required();
  cmd->add_option("--rule", o.rule, "midpoint | trapezoid | gauss_legendre");
  cmd->add_option("--series-order", o.series_order, "Truncation order (default 6)");
  cmd->add_flag("--allow-high-order", o.allow_high_order,
                "Allow series orders above 6");
  cmd->add_option("--product", o.product,
                  "Inner quadrature of synthesized kernels: split_at_jumps | shared_nodes");
  cmd->add_option("--out", o.out, "Output path, '-' for stdout");
  cmd->add_option("--format", o.format, "csv | json");
}

fredholm::cli::RunConfig to_config(const RawOptions& o) {
  using namespace fredholm;
  cli::RunConfig c;
  c.kernel = cli::parse_kernel_arg(o.kernel);
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& name : o.methods) {
      auto m = parse_method(name);
      if (!m) throw cli::ConfigError("unknown method '" + name + "'");
      c.methods.push_back(*m);
    }
  }
  c.grid_sizes = o.sizes;
  auto family = parse_rule_family(o.rule);
  if (!family) throw cli::ConfigError("unknown rule family '" + o.rule + "'");
  c.rule = *family;
  if (o.series_order >= 0) c.series_order = o.series_order;
  c.allow_high_order = o.allow_high_order;
  if (o.product == "split_at_jumps") {
    c.product = ProductQuadrature::split_at_jumps;
  } else if (o.product == "shared_nodes") {
    c.product = ProductQuadrature::shared_nodes;
  } else {
    throw cli::ConfigError("unknown product quadrature '" + o.product + "'");
  }
  if (o.format == "csv") {
    c.format = cli::OutputFormat::csv;
  } else if (o.format == "json") {
    c.format = cli::OutputFormat::json;
  } else {
    throw cli::ConfigError("unknown format '" + o.format + "'");
  }
  c.output_path = o.out;
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fredholm::cli::ConfigError("cannot open output file '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fredholm determinants of integral operators on [0, 1]"};
  app.require_subcommand(1);
  RawOptions eval_opts, converge_opts, roundtrip_opts;
  auto* eval = app.add_subcommand("eval", "Evaluate log det(I + A)");
  add_common(eval, eval_opts, true);
  auto* converge = app.add_subcommand("converge", "Convergence study over grid sizes");
  add_common(converge, converge_opts, true);
  auto* roundtrip = app.add_subcommand(
      "roundtrip", "Synthesize A from a triangular factor T and check all estimators");
  add_common(roundtrip, roundtrip_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    using namespace fredholm::cli;
    if (eval->parsed()) {
      const RunConfig c = to_config(eval_opts);
      write_output(c.output_path, render(cmd_eval(c), c.format));
    } else if (converge->parsed()) {
      const RunConfig c = to_config(converge_opts);
      const ConvergenceReport report = cmd_converge(c);
      write_output(c.output_path, render(report.rows, c.format));
      std::FILE* summary = c.output_path == "-" ? stderr : stdout;
      std::fprintf(summary, "reference,%s,%.17g\n",
                   std::string(to_string(report.reference)).c_str(),
                   report.reference_value);
      for (const auto& o : report.orders) {
        std::fprintf(summary, "order,%s,%s\n",
                     std::string(fredholm::to_string(o.method)).c_str(),
                     o.summary().c_str());
      }
    } else if (roundtrip->parsed()) {
      const RunConfig c = to_config(roundtrip_opts);
      write_output(c.output_path, render(cmd_roundtrip(c), c.format));
    }
  } catch (const fredholm::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fredholm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
