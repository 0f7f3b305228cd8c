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

#include "kickwell/potential.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "gtest/gtest.h"

using namespace kickwell;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [0, π]; independent of the Gauss-Legendre rule used
// by the library.
double simpson(const std::function<double(double)>& f, int intervals = 200000) {
  const double h = kPi / intervals;
  double s = f(0.0) + f(kPi);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

double central_difference(const KickPotential& pot, double x, double h = 1e-5) {
  return (evaluate(pot, x + h) - evaluate(pot, x - h)) / (2.0 * h);
}

}  // namespace

TEST(KickPotential, DerivativeMatchesFiniteDifferences) {
  const std::vector<KickPotential> pots{CosShifted{1.7, 0.3}, CosRatio{2.0, 1.37},
                                        FourierSeries{0.4, {0.5, -0.2, 0.1}, {0.3, 0.0, -0.7}}};
  for (const auto& pot : pots) {
    for (double x : {0.0, 0.4, 1.3, 2.2, kPi}) {
      EXPECT_NEAR(derivative(pot, x), central_difference(pot, x), 1e-8);
    }
  }
}

TEST(KickPotential, ValidateRejectsBadParameters) {
  EXPECT_THROW(validate(CosRatio{1.0, 0.0}), DomainError);
  EXPECT_THROW(validate(CosRatio{1.0, -0.5}), DomainError);
  EXPECT_THROW(validate(CosShifted{std::nan(""), 0.0}), DomainError);
  EXPECT_THROW(validate(FourierSeries{0.0, {INFINITY}, {}}), DomainError);
  EXPECT_NO_THROW(validate(FourierSeries{}));
}

TEST(KickPotential, NullDetection) {
  EXPECT_TRUE(is_null(FourierSeries{}));
  EXPECT_TRUE(is_null(FourierSeries{3.0, {0.0}, {}}));
  EXPECT_TRUE(is_null(CosShifted{0.0, 1.0}));
  EXPECT_FALSE(is_null(CosRatio{0.1, 1.0}));
}

TEST(DerivSquaredSpectrum, CosShiftedClosedForm) {
  for (double k : {0.5, 1.0, 3.0}) {
    for (double alpha : {0.0, kPi / 6, kPi / 4, 1.0}) {
      const auto s = deriv_squared_spectrum(CosShifted{k, alpha}, 12, 4096);
      EXPECT_NEAR(s.a0, k * k / 2, 1e-12);
      EXPECT_NEAR(s.c(1), -kPi * k * k * std::cos(2 * alpha) / 4, 1e-11);
      EXPECT_NEAR(s.s(1), kPi * k * k * std::sin(2 * alpha) / 4, 1e-11);
      for (int m = 2; m <= 12; ++m) {
        EXPECT_LT(std::abs(s.c(m)), 1e-10);
        EXPECT_LT(std::abs(s.s(m)), 1e-10);
      }
    }
  }
}

TEST(DerivSquaredSpectrum, QuarterPhaseHasEqualExpansionCoefficients) {
  // (V')² = a0' + a1' sin 2x with a0' = a1' = k²/2.
  const double k = 1.3;
  const auto s = deriv_squared_spectrum(CosShifted{k, kPi / 4}, 8, 4096);
  EXPECT_NEAR(s.a0, k * k / 2, 1e-12);
  EXPECT_NEAR(2.0 / kPi * s.s(1), k * k / 2, 1e-12);
  EXPECT_LT(std::abs(s.c(1)), 1e-12);
}

TEST(DerivSquaredSpectrum, ZeroPhaseCorrection) {
  const double k = 2.0;
  const auto s = deriv_squared_spectrum(CosShifted{k, 0.0}, 4, 4096);
  EXPECT_NEAR(s.c(1), -kPi * k * k / 4, 1e-11);
  EXPECT_NEAR(-s.c(1) / (2 * kPi), k * k / 8, 1e-12);
}

TEST(DerivSquaredSpectrum, ConstantPotentialIsEmpty) {
  const auto s = deriv_squared_spectrum(FourierSeries{2.5, {}, {}}, 6, 4096);
  EXPECT_EQ(s.a0, 0.0);
  for (int m = 1; m <= 6; ++m) {
    EXPECT_EQ(s.c(m), 0.0);
    EXPECT_EQ(s.s(m), 0.0);
  }
}

TEST(DerivSquaredSpectrum, CosRatioMeanRateMatchesClosedForm) {
  const double k = 1.0;
  for (double r : {0.3, 0.75, 1.0, kPi / 4, kPi / 2, kPi, 2.37}) {
    const auto s = deriv_squared_spectrum(CosRatio{k, r}, 16, 4096);
    const double expected = k * k * r * r - k * k * r * std::sin(4 * r * kPi) / (4 * kPi);
    EXPECT_NEAR(s.mean_rate(), expected, 1e-9) << "r=" << r;
  }
}

TEST(DerivSquaredSpectrum, CosRatioProjectionsMatchAnalyticIntegral) {
  // c_m = -2 k² r³ sin(4rπ) / (4r² - m²) away from resonance.
  const double k = 1.4;
  const double r = kPi / 2;
  const auto s = deriv_squared_spectrum(CosRatio{k, r}, 20, 4096);
  for (int m = 1; m <= 20; ++m) {
    const double expected = -2 * k * k * r * r * r * std::sin(4 * r * kPi) / (4 * r * r - m * m);
    EXPECT_NEAR(s.c(m), expected, 1e-10) << "m=" << m;
  }
}

TEST(DerivSquaredSpectrum, IntegerRatioResonance) {
  // r integer: only c_{2r} survives, equal to -π k² r².
  const double k = 0.8;
  for (int r : {1, 2}) {
    const auto s = deriv_squared_spectrum(CosRatio{k, static_cast<double>(r)}, 10, 4096);
    for (int m = 1; m <= 10; ++m) {
      const double expected = m == 2 * r ? -kPi * k * k * r * r : 0.0;
      EXPECT_NEAR(s.c(m), expected, 1e-10);
    }
  }
}

TEST(DerivSquaredSpectrum, GenericFourierAgainstSimpsonOracle) {
  const KickPotential pot = FourierSeries{0.1, {0.7, -0.3, 0.05}, {0.2, 0.4}};
  const auto s = deriv_squared_spectrum(pot, 8, 4096);
  auto d2 = [&](double x) {
    const double d = derivative(pot, x);
    return d * d;
  };
  EXPECT_NEAR(s.a0, simpson(d2) / kPi, 1e-10);
  for (int m = 1; m <= 8; ++m) {
    EXPECT_NEAR(s.c(m), simpson([&](double x) { return d2(x) * std::cos(2 * m * x); }), 1e-10);
    EXPECT_NEAR(s.s(m), simpson([&](double x) { return d2(x) * std::sin(2 * m * x); }), 1e-10);
  }
}

TEST(DerivSquaredSpectrum, InvariantUnderConstantShift) {
  const FourierSeries base{0.0, {0.9, 0.1}, {-0.4}};
  FourierSeries shifted = base;
  shifted.c0 = 17.0;
  const auto a = deriv_squared_spectrum(base, 6, 4096);
  const auto b = deriv_squared_spectrum(shifted, 6, 4096);
  EXPECT_EQ(a.a0, b.a0);
  EXPECT_EQ(a.cos_proj, b.cos_proj);
  EXPECT_EQ(a.sin_proj, b.sin_proj);
}

TEST(DerivSquaredSpectrum, ScalesWithHbarSquared) {
  const auto one = deriv_squared_spectrum(CosRatio{1.0, 0.6}, 4, 4096, 1.0);
  const auto two = deriv_squared_spectrum(CosRatio{1.0, 0.6}, 4, 4096, 2.0);
  EXPECT_NEAR(two.a0, 4.0 * one.a0, 1e-12);
  EXPECT_NEAR(two.c(3), 4.0 * one.c(3), 1e-12);
}

TEST(DerivSquaredSpectrum, RejectsEmptyProjectionRange) {
  EXPECT_THROW(deriv_squared_spectrum(CosShifted{1.0, 0.0}, 0, 4096), DomainError);
}

TEST(ConstantRateCheck, QuarterPhaseShiftIsConstant) {
  const double k = 1.0;
  const auto check = constant_rate_check(spectrum_for_basis(CosShifted{k, kPi / 4}, 64), 1e-10);
  EXPECT_TRUE(check.constant);
  EXPECT_EQ(check.offending_index, 0);
  EXPECT_NEAR(check.rate, k * k / 4, 1e-12);
}

TEST(ConstantRateCheck, QuarterOddRatioIsConstant) {
  const double k = 1.5;
  for (double r : {0.25, 0.75, 1.25}) {
    const auto check = constant_rate_check(spectrum_for_basis(CosRatio{k, r}, 64), 1e-10);
    EXPECT_TRUE(check.constant) << "r=" << r;
    EXPECT_NEAR(check.rate, k * k * r * r, 1e-10);
  }
}

TEST(ConstantRateCheck, ZeroPhaseFailsAtFirstHarmonic) {
  const auto check = constant_rate_check(spectrum_for_basis(CosShifted{1.0, 0.0}, 64), 1e-10);
  EXPECT_FALSE(check.constant);
  EXPECT_EQ(check.offending_index, 1);
  EXPECT_NEAR(check.max_abs_proj, kPi / 4, 1e-11);
}
