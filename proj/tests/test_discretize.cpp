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
#include <limits>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "fredholm/discretize.hpp"
#include "support/catalogs.hpp"

namespace fredholm {
namespace {

TEST(Assemble, ZeroKernelGivesZeroMatrix) {
  for (auto family : {RuleFamily::midpoint, RuleFamily::gauss_legendre}) {
    const DiscreteOperator op = assemble(catalog::zero(), make_rule(family, 9));
    EXPECT_EQ(op.matrix().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(op.size(), 9u);
    EXPECT_EQ(op.scaling(), Scaling::symmetric_nystrom);
  }
}

TEST(Assemble, ConstantOnTwoMidpoints) {
  const DiscreteOperator op = assemble(catalog::constant(3.0), make_rule(RuleFamily::midpoint, 2));
  EXPECT_LT((op.matrix().array() - 1.5).abs().maxCoeff(), 1e-15);
}

TEST(Assemble, MinOnTwoMidpoints) {
  const DiscreteOperator op = assemble(catalog::brownian(), make_rule(RuleFamily::midpoint, 2));
  Matrix want(2, 2);
  want << 0.125, 0.125, 0.125, 0.375;
  EXPECT_LT((op.matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(op.source_name(), "min");
}

TEST(Assemble, RawScalingSamplesKernel) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 5);
  const Kernel k = catalog::smooth_volterra(2.0);
  const DiscreteOperator op = assemble(k, rule, Scaling::raw_kernel);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      EXPECT_EQ(op.matrix()(i, j), k(rule.node(i), rule.node(j)));
}

TEST(Assemble, NonFiniteValueNamesTheNodePair) {
  const Kernel bad("bad",
                   [](double x, double y) {
                     return x > 0.6 && y < 0.3 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
                   });
  try {
    assemble(bad, make_rule(RuleFamily::midpoint, 4));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("(2, 0)"), std::string::npos) << what;
    EXPECT_NE(what.find("bad"), std::string::npos) << what;
  }
}

TEST(Assemble, SymmetricKernelIsExactlySymmetric) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 33);
  for (const auto& k : testing::psd_catalog()) {
    const Matrix m = assemble(k, rule).matrix();
    EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0) << k.name();
  }
}

// I + sqrt(W) A sqrt(W) inherits positive definiteness from I + A. For
// positive semidefinite A the spectrum stays above 1.
TEST(Assemble, IdentityPlusIsPositiveDefinite) {
  const auto min_eigenvalue = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  for (std::size_t n : {8u, 64u, 256u}) {
    const QuadratureRule rule = make_rule(RuleFamily::midpoint, n);
    for (const auto& k : testing::psd_catalog()) {
      EXPECT_GE(min_eigenvalue(assemble(k, rule).identity_plus()), 1.0 - 1e-10)
          << k.name() << " n=" << n;
    }
    // Synthesized A is indefinite in general; only I + A is positive.
    for (const auto& a : testing::synthesized_catalog(rule)) {
      EXPECT_GT(min_eigenvalue(assemble(a, rule).identity_plus()), 0.1)
          << a.name() << " n=" << n;
    }
  }
}

// det(I + W K) = det(I + sqrt(W) K sqrt(W)) by similarity.
TEST(Assemble, ScalingsShareTheSpectrum) {
  const QuadratureRule rule = make_rule(RuleFamily::gauss_legendre, 24);
  for (const auto& k : testing::psd_catalog()) {
    const Matrix raw = assemble(k, rule, Scaling::raw_kernel).matrix();
    Matrix wk = raw;
    for (std::size_t i = 0; i < rule.size(); ++i) wk.row(i) *= rule.weight(i);
    wk.diagonal().array() += 1.0;
    const double a = wk.partialPivLu().determinant();
    const double b = assemble(k, rule).identity_plus().partialPivLu().determinant();
    EXPECT_NEAR(a, b, 1e-10 * std::abs(b)) << k.name();
  }
}

TEST(DiscreteOperatorTest, RejectsMismatchedMatrix) {
  EXPECT_THROW(DiscreteOperator(make_rule(RuleFamily::midpoint, 3), Matrix::Zero(2, 2),
                                Scaling::raw_kernel),
               InvalidArgument);
}

}  // namespace
}  // namespace fredholm
