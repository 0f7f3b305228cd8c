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

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kickwell/error.hpp"
#include "kickwell/quadrature.hpp"

namespace kickwell {

// Kick potentials. Strengths are given in units of ħ, so evaluate() returns
// the kick phase V(x)/ħ directly.

/// V(x) = k cos(x + α)
struct CosShifted {
  double k = 0.0;
  double alpha = 0.0;
  friend bool operator==(const CosShifted&, const CosShifted&) = default;
};

/// V(x) = k cos(2 r x); r is the ratio of well width to kick wavelength.
struct CosRatio {
  double k = 0.0;
  double r = 1.0;
  friend bool operator==(const CosRatio&, const CosRatio&) = default;
};

/// V(x) = c0 + Σ_j [a_j cos(j x) + b_j sin(j x)], j = 1, 2, ...
struct FourierSeries {
  double c0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  friend bool operator==(const FourierSeries&, const FourierSeries&) = default;
};

using KickPotential = std::variant<CosShifted, CosRatio, FourierSeries>;

inline void validate(const KickPotential& pot) {
  auto finite = [](double v) { return std::isfinite(v); };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosShifted>) {
          if (!finite(p.k) || !finite(p.alpha)) throw DomainError("CosShifted: non-finite parameter");
        } else if constexpr (std::is_same_v<T, CosRatio>) {
          if (!finite(p.k) || !finite(p.r)) throw DomainError("CosRatio: non-finite parameter");
          if (!(p.r > 0.0)) throw DomainError("CosRatio: r must be positive");
        } else {
          if (!finite(p.c0)) throw DomainError("FourierSeries: non-finite c0");
          for (double c : p.cos_coeffs)
            if (!finite(c)) throw DomainError("FourierSeries: non-finite cosine coefficient");
          for (double s : p.sin_coeffs)
            if (!finite(s)) throw DomainError("FourierSeries: non-finite sine coefficient");
        }
      },
      pot);
}

/// V(x)/ħ.
inline double evaluate(const KickPotential& pot, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosShifted>) {
          return p.k * std::cos(x + p.alpha);
        } else if constexpr (std::is_same_v<T, CosRatio>) {
          return p.k * std::cos(2.0 * p.r * x);
        } else {
          double v = p.c0;
          for (std::size_t j = 0; j < p.cos_coeffs.size(); ++j) v += p.cos_coeffs[j] * std::cos((j + 1.0) * x);
          for (std::size_t j = 0; j < p.sin_coeffs.size(); ++j) v += p.sin_coeffs[j] * std::sin((j + 1.0) * x);
          return v;
        }
      },
      pot);
}

/// d/dx of V(x)/ħ.
inline double derivative(const KickPotential& pot, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CosShifted>) {
          return -p.k * std::sin(x + p.alpha);
        } else if constexpr (std::is_same_v<T, CosRatio>) {
          return -2.0 * p.r * p.k * std::sin(2.0 * p.r * x);
        } else {
          double d = 0.0;
          for (std::size_t j = 0; j < p.cos_coeffs.size(); ++j) d -= (j + 1.0) * p.cos_coeffs[j] * std::sin((j + 1.0) * x);
          for (std::size_t j = 0; j < p.sin_coeffs.size(); ++j) d += (j + 1.0) * p.sin_coeffs[j] * std::cos((j + 1.0) * x);
          return d;
        }
      },
      pot);
}

inline bool is_null(const KickPotential& pot) {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FourierSeries>) {
          for (double c : p.cos_coeffs)
            if (c != 0.0) return false;
          for (double s : p.sin_coeffs)
            if (s != 0.0) return false;
          return true;
        } else {
          return p.k == 0.0;
        }
      },
      pot);
}

/// Projections of (V')² on [0, π], in energy units (ħ² included):
///   a0      = (1/π) ∫ (V')² dx
///   c_m     = ∫ (V')² cos(2 m x) dx
///   s_m     = ∫ (V')² sin(2 m x) dx
/// Vectors are indexed from m = 1, i.e. cos_proj[0] is c_1.
struct DerivSquaredSpectrum {
  double a0 = 0.0;
  std::vector<double> cos_proj;
  std::vector<double> sin_proj;

  int m_max() const { return static_cast<int>(cos_proj.size()); }
  double c(int m) const { return cos_proj.at(static_cast<std::size_t>(m - 1)); }
  double s(int m) const { return sin_proj.at(static_cast<std::size_t>(m - 1)); }

  /// (1/2π) ∫ (V')² dx, the measured asymptotic diffusion rate.
  double mean_rate() const { return 0.5 * a0; }
};

inline DerivSquaredSpectrum deriv_squared_spectrum(const KickPotential& pot, int m_max, std::size_t quad_points,
                                                   double hbar = 1.0) {
  if (m_max < 1) throw DomainError("deriv_squared_spectrum: m_max must be >= 1");
  validate(pot);
  const GaussLegendreRule rule(0.0, std::numbers::pi, quad_points);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();

  std::vector<double> weighted(nodes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = hbar * derivative(pot, nodes[i]);
    weighted[i] = weights[i] * d * d;
    total += weighted[i];
  }

  DerivSquaredSpectrum out;
  out.a0 = total / std::numbers::pi;
  out.cos_proj.assign(static_cast<std::size_t>(m_max), 0.0);
  out.sin_proj.assign(static_cast<std::size_t>(m_max), 0.0);
  for (int m = 1; m <= m_max; ++m) {
    double c = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double phase = 2.0 * m * nodes[i];
      c += weighted[i] * std::cos(phase);
      s += weighted[i] * std::sin(phase);
    }
    out.cos_proj[static_cast<std::size_t>(m - 1)] = c;
    out.sin_proj[static_cast<std::size_t>(m - 1)] = s;
  }
  return out;
}

/// Spectrum with the default truncation: m_max = n_max and the box quadrature rule.
inline DerivSquaredSpectrum spectrum_for_basis(const KickPotential& pot, int n_max, double hbar = 1.0) {
  return deriv_squared_spectrum(pot, n_max, GaussLegendreRule::default_points(n_max), hbar);
}

struct ConstantRateCheck {
  bool constant = false;
  int offending_index = 0;  // m with the largest |c_m|, 0 when constant
  double max_abs_proj = 0.0;
  double rate = 0.0;  // a0/2, meaningful when constant
};

/// The rate is constant when every cos(2mx) projection of (V')² vanishes;
/// then each kick adds exactly a0/2.
inline ConstantRateCheck constant_rate_check(const DerivSquaredSpectrum& spec, double tol) {
  ConstantRateCheck out;
  out.rate = spec.mean_rate();
  int worst = 0;
  for (int m = 1; m <= spec.m_max(); ++m) {
    const double v = std::abs(spec.c(m));
    if (v > out.max_abs_proj) {
      out.max_abs_proj = v;
      worst = m;
    }
  }
  out.constant = out.max_abs_proj < tol;
  out.offending_index = out.constant ? 0 : worst;
  return out;
}

}  // namespace kickwell
