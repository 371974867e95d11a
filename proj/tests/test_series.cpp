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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fredholm/cholesky.hpp"
#include "fredholm/determinant.hpp"
#include "fredholm/series.hpp"
#include "support/catalogs.hpp"
#include "support/oracles.hpp"

namespace fredholm {
namespace {

const SeriesOptions kMinors{.evaluation = SeriesEvaluation::minors};
const SeriesOptions kPowerSums{.evaluation = SeriesEvaluation::power_sums};

TEST(FredholmSeries, ZeroKernel) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 10);
  for (int order = 0; order <= 6; ++order) {
    const DeterminantEstimate e = fredholm_series(catalog::zero(), rule, order);
    EXPECT_EQ(e.log_det, 0.0);
    EXPECT_EQ(e.series_order, order);
    EXPECT_EQ(e.method, Method::fredholm_series);
  }
}

// Rank-one kernels have a single nonzero eigenvalue, so the series stops
// after the first term; Gauss integrates the polynomial product exactly.
TEST(FredholmSeries, RankOneTerminates) {
  const Polynomial u{{1.0, 2.0}}, v{{0.5, -1.0, 3.0}};
  const Kernel k = catalog::rank_one(u, v);
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 8);
  const double want = std::log1p(inner_product(u, v));
  for (int order = 1; order <= 6; ++order) {
    const std::vector<double> terms = fredholm_series_terms(k, rule, order);
    for (std::size_t j = 2; j < terms.size(); ++j) EXPECT_NEAR(terms[j], 0.0, 1e-13);
    EXPECT_NEAR(fredholm_series(k, rule, order).log_det, want, 1e-12) << order;
  }
  EXPECT_NEAR(fredholm_series(catalog::constant(1.0), rule, 3).log_det, std::log(2.0), 1e-12);
}

TEST(FredholmSeries, EvaluationsAgreeWithBruteForce) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 6);
  std::vector<Kernel> kernels = testing::psd_catalog();
  kernels.push_back(catalog::rank_one({{1.0, -1.0}}, {{2.0, 0.0, 1.0}}));
  for (auto& a : testing::synthesized_catalog(rule)) kernels.push_back(a);
  for (const auto& k : kernels) {
    const std::vector<double> minors = fredholm_series_terms(k, rule, 6, kMinors);
    const std::vector<double> sums = fredholm_series_terms(k, rule, 6, kPowerSums);
    ASSERT_EQ(minors.size(), 7u);
    ASSERT_EQ(sums.size(), 7u);
    EXPECT_EQ(minors[0], 1.0);
    for (std::size_t j = 1; j <= 6; ++j) {
      EXPECT_NEAR(minors[j], sums[j], 1e-12 * (1.0 + std::abs(minors[j]))) << k.name() << j;
    }
    for (std::size_t j = 1; j <= 3; ++j) {
      const double brute = testing::brute_force_series_term(k, rule, j);
      EXPECT_NEAR(minors[j], brute, 1e-12 * (1.0 + std::abs(brute))) << k.name() << j;
    }
  }
}

// A full-length series on n nodes is det(I + B) exactly.
TEST(FredholmSeries, FullOrderEqualsDeterminant) {
  std::mt19937_64 rng(3);
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 6);
  const Matrix b = testing::random_spd(rng, 6, 0.1, 2.0);
  const DiscreteOperator op(rule, b, Scaling::symmetric_nystrom);
  const SeriesOptions opts{.allow_high_order = true, .evaluation = SeriesEvaluation::minors};
  EXPECT_NEAR(fredholm_series(op, 6, opts).log_det, testing::eigen_log_det(op.identity_plus()),
              1e-12);
  EXPECT_NEAR(fredholm_series(op, 9, opts).log_det, testing::eigen_log_det(op.identity_plus()),
              1e-12);
}

// Same grid, order 6: only truncation separates the series from the matrix
// log det. The order-7 term for -min is below 1/7! (trace < 1).
TEST(FredholmSeries, NegativeMinMatchesSameGridMatrix) {
  const Kernel k = catalog::scaled(-1.0, catalog::brownian());
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 40);
  const DiscreteOperator op = assemble(k, rule);
  const double matrix = testing::eigen_log_det(op.identity_plus());
  const DeterminantEstimate s = fredholm_series(op, 6);
  EXPECT_NEAR(s.log_det, matrix, 1e-9);
  EXPECT_LT(*s.err_estimate, 1e-6);
}

// The Gauss-Legendre discretisation of the kinked min kernel converges at
// second order towards cos 1.
TEST(FredholmSeries, NegativeMinConvergesAtSecondOrder) {
  const Kernel k = catalog::scaled(-1.0, catalog::brownian());
  const double exact = std::log(std::cos(1.0));
  double prev = NAN;
  for (std::size_t n : {20u, 40u, 80u, 160u}) {
    const double err = std::abs(fredholm_series(k, make_rule(RuleFamily::gauss_legendre, n), 6,
                                                kPowerSums)
                                    .log_det -
                                exact);
    if (!std::isnan(prev)) {
      EXPECT_NEAR(std::log2(prev / err), 2.0, 0.25) << "n=" << n;
    }
    prev = err;
  }
}

// log det(I + zK) for z in a small window: constant c gives log(1 + zc),
// rank-one uv gives log(1 + z <u, v>).
TEST(FredholmSeries, ScalingProbe) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 12);
  const Polynomial u{{1.0, 1.0}}, v{{2.0, -1.0}};
  for (double z : {-0.4, -0.1, 0.1, 0.5, 0.9}) {
    EXPECT_NEAR(fredholm_series(catalog::scaled(z, catalog::constant(0.7)), rule, 6).log_det,
                std::log1p(0.7 * z), 1e-12);
    EXPECT_NEAR(fredholm_series(catalog::scaled(z, catalog::rank_one(u, v)), rule, 6).log_det,
                std::log1p(z * inner_product(u, v)), 1e-12);
  }
}

TEST(FredholmSeries, CostGuard) {
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 8);
  EXPECT_THROW(fredholm_series(catalog::brownian(), rule, 7), CostGuardError);
  EXPECT_NO_THROW(fredholm_series(catalog::brownian(), rule, 7, {.allow_high_order = true}));
  EXPECT_THROW(fredholm_series(catalog::brownian(), rule, -1), InvalidArgument);
}

TEST(FredholmSeries, RejectsRawScaling) {
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 8);
  EXPECT_THROW(fredholm_series(assemble(catalog::brownian(), rule, Scaling::raw_kernel), 3),
               InvalidArgument);
}

// 1 - 2 < 0: the truncated series has no logarithm.
TEST(FredholmSeries, NonPositiveTruncationIsANumericError) {
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 4);
  EXPECT_THROW(fredholm_series(catalog::constant(-2.0), rule, 1), NumericError);
}

TEST(FredholmSeries, AutomaticSwitchesToPowerSumsOnLargeGrids) {
  const QuadratureRule rule = make_rule(RuleFamily::midpoint, 256);
  const Kernel k = catalog::brownian();
  const std::vector<double> automatic = fredholm_series_terms(k, rule, 6);
  const std::vector<double> sums = fredholm_series_terms(k, rule, 6, kPowerSums);
  for (std::size_t j = 0; j < sums.size(); ++j) EXPECT_EQ(automatic[j], sums[j]);
}

}  // namespace
}  // namespace fredholm
