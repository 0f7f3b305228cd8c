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
#include <complex>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kickwell/basis.hpp"
#include "kickwell/bessel.hpp"
#include "kickwell/csv.hpp"
#include "kickwell/error.hpp"
#include "kickwell/potential.hpp"
#include "kickwell/quadrature.hpp"

namespace kickwell {

enum class KickMethod { Quadrature, BesselSeries };

inline std::string to_string(KickMethod m) { return m == KickMethod::Quadrature ? "quadrature" : "bessel"; }

/// A Bessel-series term whose resonance test 2jR = |l| was too close to call:
/// |2jR - |l|| fell between the exact and ambiguous thresholds.
struct ResonanceFlag {
  int j = 0;
  int l = 0;
  double gap = 0.0;
};

inline constexpr double kResonanceExact = 1e-12;
inline constexpr double kResonanceAmbiguous = 1e-6;

/// ⟨n|exp(-iV(x)/ħ)|m⟩ on levels 1..dim (stored 0-based).
struct KickOperator {
  Eigen::MatrixXcd matrix;
  double unitarity_defect = 0.0;  // max |U†U - I| over the truncated block
  KickMethod method = KickMethod::Quadrature;
  int series_order = 0;  // j_max, Bessel route only
  std::vector<ResonanceFlag> resonance_flags;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// max |U†U - I| over the leading `cols` columns (all columns when cols <= 0).
inline double unitarity_defect(const Eigen::MatrixXcd& u, int cols = 0) {
  const Eigen::Index c = (cols <= 0 || cols > u.cols()) ? u.cols() : cols;
  const auto block = u.leftCols(c);
  Eigen::MatrixXcd g = block.adjoint() * block;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

/// Quadrature route. With sin(nx) sin(mx) = [cos((n-m)x) - cos((n+m)x)]/2 every
/// element is F(|n-m|) - F(n+m), F(l) = (1/π) ∫ cos(l x) e^{-iV/ħ} dx, so only
/// 2·n_max + 1 integrals are evaluated.
inline KickOperator kick_operator_quadrature(const BoxBasis& basis, const KickPotential& pot) {
  validate(pot);
  const int n = basis.n_max();
  if (is_null(pot)) {
    // V is constant, so the kick is a global phase.
    KickOperator op;
    op.method = KickMethod::Quadrature;
    op.matrix = std::polar(1.0, -evaluate(pot, 0.0)) * Eigen::MatrixXcd::Identity(n, n);
    op.unitarity_defect = 0.0;
    return op;
  }
  const auto rule = GaussLegendreRule::for_box(n);
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();

  std::vector<std::complex<double>> kicked(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    kicked[i] = weights[i] * std::polar(1.0, -evaluate(pot, nodes[i]));
  }

  std::vector<std::complex<double>> f(static_cast<std::size_t>(2 * n + 1));
  for (int l = 0; l <= 2 * n; ++l) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += std::cos(l * nodes[i]) * kicked[i];
    f[static_cast<std::size_t>(l)] = acc / std::numbers::pi;
  }

  KickOperator op;
  op.method = KickMethod::Quadrature;
  op.matrix.resize(n, n);
  for (int col = 1; col <= n; ++col) {
    for (int row = 1; row <= n; ++row) {
      op.matrix(row - 1, col - 1) = f[static_cast<std::size_t>(std::abs(row - col))] - f[static_cast<std::size_t>(row + col)];
    }
  }
  op.unitarity_defect = unitarity_defect(op.matrix);
  return op;
}

namespace detail {

/// C_j(l) with ratio r; resonance when 2jr = |l|.
inline double series_coefficient(int j, int l, double r, std::vector<ResonanceFlag>& flags) {
  const double w = 2.0 * j * r;
  const double gap = std::abs(w - std::abs(l));
  if (gap < kResonanceExact) return std::numbers::pi;
  if (gap <= kResonanceAmbiguous) flags.push_back({j, l, gap});
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return 4.0 * sign * j * r * std::sin(w * std::numbers::pi) / (w * w - static_cast<double>(l) * l);
}

}  // namespace detail

/// Bessel route for V = k cos(2 r x):
///   U_nm = J_0(k) δ_nm + (1/π) Σ_{j=1}^{j_max} (-i)^j J_j(k) [C_j(n-m) - C_j(n+m)]
/// series_order <= 0 selects j_max automatically.
inline KickOperator kick_operator_bessel(const BoxBasis& basis, const CosRatio& pot, int series_order = 0) {
  validate(KickPotential{pot});
  const int n = basis.n_max();
  const int jmax = series_order > 0 ? series_order : bessel_series_order(pot.k);
  const auto bessel = bessel_j_sequence(pot.k, jmax);

  KickOperator op;
  op.method = KickMethod::BesselSeries;
  op.series_order = jmax;
  op.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) op.matrix(i, i) = bessel[0];

  // (-i)^j cycles through 1, -i, -1, i.
  const std::complex<double> phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::vector<double> cdiff(static_cast<std::size_t>(2 * n + 1));
  for (int j = 1; j <= jmax; ++j) {
    const std::complex<double> weight = phases[j % 4] * (bessel[static_cast<std::size_t>(j)] / std::numbers::pi);
    // C_j depends on l only; tabulate l = -(n-1) .. 2n.
    std::vector<double> c(static_cast<std::size_t>(3 * n));
    for (int l = -(n - 1); l <= 2 * n; ++l) {
      c[static_cast<std::size_t>(l + n - 1)] = detail::series_coefficient(j, l, pot.r, op.resonance_flags);
    }
    for (int col = 1; col <= n; ++col) {
      for (int row = 1; row <= n; ++row) {
        const double diff = c[static_cast<std::size_t>(row - col + n - 1)] - c[static_cast<std::size_t>(row + col + n - 1)];
        op.matrix(row - 1, col - 1) += weight * diff;
      }
    }
  }
  op.unitarity_defect = unitarity_defect(op.matrix);
  return op;
}

/// Z_nm = |⟨n|U|m⟩|² with per-column leakage 1 - Σ_n Z_nm.
struct TransitionMatrix {
  Eigen::MatrixXd z;
  Eigen::VectorXd column_leakage;

  int dim() const { return static_cast<int>(z.rows()); }
  double max_leakage() const { return column_leakage.size() ? column_leakage.maxCoeff() : 0.0; }
  Eigen::VectorXd row_sums() const { return z.rowwise().sum(); }
  Eigen::VectorXd column_sums() const { return z.colwise().sum().transpose(); }
};

inline TransitionMatrix transition_matrix(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) throw DomainError("transition_matrix: operator must be square");
  TransitionMatrix t;
  t.z = u.cwiseAbs2();
  t.column_leakage = (1.0 - t.z.colwise().sum().array()).transpose();
  return t;
}

inline TransitionMatrix transition_matrix(const KickOperator& u) { return transition_matrix(u.matrix); }

/// Row-major dump: a '#' metadata line, then `n,m,re,im` (1-based levels).
inline void write_kick_operator_csv(std::ostream& out, const KickOperator& u) {
  out << "# dim=" << u.dim() << ",method=" << to_string(u.method)
      << ",unitarity_defect=" << csv::format(u.unitarity_defect) << '\n';
  csv::Writer w(out, {"n", "m", "re", "im"});
  for (int r = 0; r < u.dim(); ++r)
    for (int c = 0; c < u.dim(); ++c)
      w.row({csv::format(r + 1), csv::format(c + 1), csv::format(u.matrix(r, c).real()), csv::format(u.matrix(r, c).imag())});
}

inline void write_transition_csv(std::ostream& out, const TransitionMatrix& t, const KickOperator& u) {
  out << "# dim=" << t.dim() << ",method=" << to_string(u.method)
      << ",unitarity_defect=" << csv::format(u.unitarity_defect) << '\n';
  csv::Writer w(out, {"n", "m", "z"});
  for (int r = 0; r < t.dim(); ++r)
    for (int c = 0; c < t.dim(); ++c) w.row({csv::format(r + 1), csv::format(c + 1), csv::format(t.z(r, c))});
}

}  // namespace kickwell
