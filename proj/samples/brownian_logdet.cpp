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

// log det(I + min) on refining trapezoid grids, against log cosh(1).

#include <cmath>
#include <cstdio>

#include "fredholm/fredholm.hpp"

int main() {
  using namespace fredholm;
  const Kernel k = catalog::brownian();
  const double exact = std::log(std::cosh(1.0));
  std::printf("%6s %20s %12s\n", "n", "log det", "rel. error");
  for (std::size_t n : {64, 256, 1024, 4096}) {
    const QuadratureRule rule = make_rule(RuleFamily::trapezoid, n);
    const CholeskyFactor f = factor_identity_plus(assemble(k, rule));
    const double v = logdet_matrix(f).log_det;
    std::printf("%6zu %20.15f %12.3e\n", n, v, std::abs(v - exact) / exact);
  }
}
