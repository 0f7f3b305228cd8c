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
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "kickwell/basis.hpp"
#include "kickwell/csv.hpp"
#include "kickwell/error.hpp"
#include "kickwell/kick_operator.hpp"

namespace kickwell {

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw DomainError("DensityMatrix: must be square and non-empty");
  }

  static DensityMatrix pure_level(int dim, int level) {
    if (level < 1 || level > dim) throw DomainError("DensityMatrix::pure_level: level out of range");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(level - 1, level - 1) = 1.0;
    return DensityMatrix(std::move(rho));
  }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& rho() const { return rho_; }
  Eigen::MatrixXcd& rho() { return rho_; }

  double trace() const { return rho_.diagonal().real().sum(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  Eigen::VectorXd populations() const { return rho_.diagonal().real(); }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  double max_offdiagonal() const {
    double m = 0.0;
    for (int c = 0; c < dim(); ++c)
      for (int r = 0; r < dim(); ++r)
        if (r != c) m = std::max(m, std::abs(rho_(r, c)));
    return m;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  double energy(const BoxBasis& basis) const { return basis.energies().dot(populations()); }

 private:
  Eigen::MatrixXcd rho_;
};

/// γ(t) = γ0 for all t.
struct ContinuousDephasing {
  double gamma0 = 0.0;
  friend bool operator==(const ContinuousDephasing&, const ContinuousDephasing&) = default;
};

/// γ(t) = ε0 Σ_l δ(t - lT - t'). ε0 may be +∞ (projective measurement).
struct KickedDephasing {
  double epsilon0 = 0.0;
  friend bool operator==(const KickedDephasing&, const KickedDephasing&) = default;
};

struct DephasingSchedule {
  std::variant<ContinuousDephasing, KickedDephasing> mode;
  double period = 1.0;  // T
  double offset = 0.5;  // t', measurement time after each kick

  void validate() const {
    if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("DephasingSchedule: period must be positive");
    if (!(offset > 0.0 && offset < period)) throw DomainError("DephasingSchedule: offset must lie in (0, T)");
    std::visit(
        [](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, ContinuousDephasing>) {
            if (!(m.gamma0 >= 0.0) || !std::isfinite(m.gamma0)) throw DomainError("gamma0 must be finite and >= 0");
          } else {
            if (!(m.epsilon0 >= 0.0)) throw DomainError("epsilon0 must be >= 0");
          }
        },
        mode);
  }

  /// Kicked schedule with the same dephasing per period (ε0 = γ0 T).
  DephasingSchedule equivalent_kicked() const {
    if (const auto* c = std::get_if<ContinuousDephasing>(&mode)) {
      return {KickedDephasing{c->gamma0 * period}, period, offset};
    }
    return *this;
  }

  friend bool operator==(const DephasingSchedule&, const DephasingSchedule&) = default;
};

namespace detail {

/// Multiplies off-diagonal entries by exp(-(rate/2)(p²_n - p²_m)² · dt - i(E_n - E_m) dt_free/ħ).
/// Diagonal entries are never touched.
inline void diagonal_action(Eigen::MatrixXcd& rho, const BoxBasis& basis, double damping, double free_time) {
  const int d = static_cast<int>(rho.rows());
  const double hbar = basis.hbar();
  for (int c = 1; c <= d; ++c) {
    for (int r = 1; r <= d; ++r) {
      if (r == c) continue;
      std::complex<double> factor{1.0, 0.0};
      if (damping != 0.0) {
        const double gap = basis.momentum_squared(r) - basis.momentum_squared(c);
        const double decay = 0.5 * damping * gap * gap;
        factor = std::isinf(decay) ? 0.0 : std::exp(-decay);
      }
      if (free_time != 0.0 && factor != 0.0) {
        factor *= std::polar(1.0, -(basis.energy(r) - basis.energy(c)) * free_time / hbar);
      }
      rho(r - 1, c - 1) *= factor;
    }
  }
}

inline void check_dims(const DensityMatrix& rho, const BoxBasis& basis) {
  if (rho.dim() != basis.dim()) throw DomainError("density matrix and basis disagree in dimension");
}

}  // namespace detail

/// Integrated double-commutator dephasing: ρ_nm ← ρ_nm exp(-(s/2)(p²_n - p²_m)²).
inline DensityMatrix dephase_step(const DensityMatrix& rho, const BoxBasis& basis, double strength) {
  if (!(strength >= 0.0)) throw DomainError("dephase_step: strength must be >= 0");
  detail::check_dims(rho, basis);
  DensityMatrix out = rho;
  detail::diagonal_action(out.rho(), basis, strength, 0.0);
  return out;
}

/// ρ_nm ← ρ_nm exp(-i(E_n - E_m) t/ħ).
inline DensityMatrix free_step(const DensityMatrix& rho, const BoxBasis& basis, double duration) {
  if (!(duration >= 0.0)) throw DomainError("free_step: duration must be >= 0");
  detail::check_dims(rho, basis);
  DensityMatrix out = rho;
  detail::diagonal_action(out.rho(), basis, 0.0, duration);
  return out;
}

/// ρ ← U ρ U†, re-symmetrized so the result is Hermitian to the last bit.
inline DensityMatrix kick_step(const DensityMatrix& rho, const KickOperator& u) {
  if (rho.dim() != u.dim()) throw DomainError("kick_step: dimension mismatch");
  Eigen::MatrixXcd next = u.matrix * rho.rho() * u.matrix.adjoint();
  Eigen::MatrixXcd herm = 0.5 * (next + next.adjoint());
  return DensityMatrix(std::move(herm));
}

/// One period, sampled just before a kick: kick at t = 0, free evolution to
/// t', the measurement-like dephasing impulse, free evolution to T. In
/// continuous mode the damping accrues over both free segments instead; since
/// damping and free phases are both diagonal, the state reached at the next
/// kick is the same as with the impulse ε0 = γ0 T.
inline DensityMatrix kicked_cycle(const DensityMatrix& rho, const KickOperator& u, const DephasingSchedule& schedule,
                                  const BoxBasis& basis) {
  schedule.validate();
  detail::check_dims(rho, basis);
  DensityMatrix out = kick_step(rho, u);
  const double before = schedule.offset;
  const double after = schedule.period - schedule.offset;
  if (const auto* c = std::get_if<ContinuousDephasing>(&schedule.mode)) {
    detail::diagonal_action(out.rho(), basis, c->gamma0 * before, before);
    detail::diagonal_action(out.rho(), basis, c->gamma0 * after, after);
  } else {
    const double eps = std::get<KickedDephasing>(schedule.mode).epsilon0;
    detail::diagonal_action(out.rho(), basis, 0.0, before);
    detail::diagonal_action(out.rho(), basis, eps, 0.0);
    detail::diagonal_action(out.rho(), basis, 0.0, after);
  }
  return out;
}

struct DephasingRecord {
  int cycle = 0;
  double trace = 0.0;
  double energy = 0.0;
  double purity = 0.0;
  double max_offdiagonal = 0.0;
  Eigen::VectorXd populations;
};

inline constexpr int kDefaultDensityDimCap = 256;

inline DephasingRecord snapshot(const DensityMatrix& rho, const BoxBasis& basis, int cycle) {
  return {cycle, rho.trace(), rho.energy(basis), rho.purity(), rho.max_offdiagonal(), rho.populations()};
}

/// Records cycle 0 (the input) through `cycles`.
inline std::vector<DephasingRecord> run_dephasing(DensityMatrix rho, const KickOperator& u,
                                                  const DephasingSchedule& schedule, const BoxBasis& basis,
                                                  int cycles, int dim_cap = kDefaultDensityDimCap) {
  if (cycles < 0) throw DomainError("run_dephasing: negative cycle count");
  if (basis.dim() > dim_cap) {
    throw DomainError("run_dephasing: n_max " + std::to_string(basis.dim()) + " exceeds density-matrix cap " +
                      std::to_string(dim_cap));
  }
  std::vector<DephasingRecord> out;
  out.reserve(static_cast<std::size_t>(cycles) + 1);
  out.push_back(snapshot(rho, basis, 0));
  for (int c = 1; c <= cycles; ++c) {
    rho = kicked_cycle(rho, u, schedule, basis);
    out.push_back(snapshot(rho, basis, c));
  }
  return out;
}

/// Per-cycle table: N, trace, energy, purity, max_offdiag, P_1 .. P_{n_show}.
inline void write_dephasing_csv(std::ostream& out, const std::vector<DephasingRecord>& recs, int n_show = 16) {
  const int dim = recs.empty() ? 0 : static_cast<int>(recs.front().populations.size());
  const int shown = std::clamp(n_show, 0, dim);
  std::vector<std::string> header{"N", "trace", "energy", "purity", "max_offdiag"};
  for (int n = 1; n <= shown; ++n) header.push_back("P_" + std::to_string(n));
  csv::Writer w(out, header);
  for (const auto& r : recs) {
    std::vector<std::string> row{csv::format(r.cycle), csv::format(r.trace), csv::format(r.energy), csv::format(r.purity),
                                 csv::format(r.max_offdiagonal)};
    for (int n = 0; n < shown; ++n) row.push_back(csv::format(r.populations(n)));
    w.row(row);
  }
}

}  // namespace kickwell
