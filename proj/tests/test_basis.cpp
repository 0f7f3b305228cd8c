// Copyright 2026 The kickwell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kickwell/basis.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "kickwell/quadrature.hpp"

using namespace kickwell;

namespace {
constexpr double kPi = std::numbers::pi;
const double kNorm = std::sqrt(2.0 / kPi);
}  // namespace

TEST(BoxBasis, RejectsDegenerateTruncation) {
  EXPECT_THROW(BoxBasis(1), DomainError);
  EXPECT_THROW(BoxBasis(0), DomainError);
  EXPECT_THROW(BoxBasis(8, 0.0), DomainError);
  EXPECT_THROW(BoxBasis(8, -1.0), DomainError);
  EXPECT_NO_THROW(BoxBasis(2));
}

TEST(BoxBasis, EnergiesAreQuadraticAndIncreasing) {
  const BoxBasis basis(16, 0.7);
  for (int n = 1; n <= 16; ++n) {
    EXPECT_DOUBLE_EQ(basis.energy(n), 0.5 * 0.49 * n * n);
    if (n > 1) {
      EXPECT_GT(basis.energy(n), basis.energy(n - 1));
    }
  }
  EXPECT_DOUBLE_EQ(basis.momentum_squared(3), 0.49 * 9.0);
  EXPECT_THROW(basis.energy(0), DomainError);
  EXPECT_THROW(basis.energy(17), DomainError);
  const auto e = basis.energies();
  ASSERT_EQ(e.size(), 16);
  EXPECT_DOUBLE_EQ(e(15), basis.energy(16));
}

TEST(BoxBasis, Eigenfunction) {
  const BoxBasis basis(8);
  EXPECT_NEAR(eigenfunction(basis, 1, kPi / 2), kNorm, 1e-15);
  EXPECT_NEAR(eigenfunction(basis, 2, kPi / 2), 0.0, 1e-15);
  EXPECT_NEAR(eigenfunction(basis, 3, kPi / 6), kNorm, 1e-15);
  EXPECT_NEAR(eigenfunction(basis, 4, 0.0), 0.0, 0.0);
  EXPECT_NEAR(eigenfunction(basis, 4, kPi), 0.0, 1e-14);
}

TEST(BoxBasis, EigenfunctionDomainErrors) {
  const BoxBasis basis(8);
  EXPECT_THROW(eigenfunction(basis, 0, 1.0), DomainError);
  EXPECT_THROW(eigenfunction(basis, 9, 1.0), DomainError);
  EXPECT_THROW(eigenfunction(basis, 1, -1e-9), DomainError);
  EXPECT_THROW(eigenfunction(basis, 1, kPi + 1e-9), DomainError);
}

TEST(BoxBasis, BasisStateIsUnitVector) {
  const BoxBasis basis(5);
  const auto p = basis.basis_state(3);
  EXPECT_EQ(p.sum(), 1.0);
  EXPECT_EQ(p(2), 1.0);
  EXPECT_THROW(basis.basis_state(6), DomainError);
}

TEST(GaussLegendreRule, NodeCountAndWeights) {
  const auto rule = GaussLegendreRule::for_box(64);
  EXPECT_GE(rule.size(), 4096u);
  EXPECT_EQ(rule.size() % GaussLegendreRule::kPanelOrder, 0u);
  EXPECT_GE(GaussLegendreRule::for_box(1000).size(), 32000u);
  double total = 0.0;
  for (double w : rule.weights()) total += w;
  EXPECT_NEAR(total, kPi, 1e-13);
  for (double x : rule.nodes()) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, kPi);
  }
}

TEST(GaussLegendreRule, IntegratesSmoothFunctions) {
  const GaussLegendreRule rule(0.0, 2.0, 40);
  EXPECT_NEAR(rule.integrate([](double x) { return x * x * x * x * x; }), 64.0 / 6.0, 1e-12);
  EXPECT_NEAR(rule.integrate([](double x) { return std::exp(x); }), std::exp(2.0) - 1.0, 1e-13);
  EXPECT_THROW(GaussLegendreRule(1.0, 1.0, 10), DomainError);
}

TEST(BoxBasis, OrthonormalUnderBoxQuadrature) {
  const int n_max = 48;
  const BoxBasis basis(n_max);
  const auto rule = GaussLegendreRule::for_box(n_max);
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    for (int m = n; m <= n_max; ++m) {
      const double overlap =
          rule.integrate([&](double x) { return eigenfunction(basis, n, x) * eigenfunction(basis, m, x); });
      worst = std::max(worst, std::abs(overlap - (n == m ? 1.0 : 0.0)));
    }
  }
  EXPECT_LT(worst, 1e-10);
}
