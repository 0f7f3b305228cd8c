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
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kickwell/csv.hpp"
#include "kickwell/error.hpp"
#include "kickwell/evolve.hpp"
#include "kickwell/kick_operator.hpp"

namespace kickwell {

/// -Σ p log2 p with 0 log 0 = 0.
inline double shannon_entropy_bits(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p(i);
    if (v < 0.0) throw DomainError("shannon_entropy_bits: negative probability");
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

/// -Tr ρ log2 ρ from the eigenvalues of a Hermitian ρ. Eigenvalues below
/// `floor` (roundoff around zero) contribute nothing.
inline double von_neumann_entropy_bits(const Eigen::MatrixXcd& rho, double floor = 1e-300) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > floor) h -= v * std::log2(v);
  }
  return h;
}

/// Entanglement between the particle and the measuring spins, in bits.
/// s_v[N] is the entropy of P(N) (particle vs the whole apparatus);
/// e_r[N-1] is the increment s_v[N] - s_v[N-1] (particle vs the step-N spins).
struct EntanglementSeries {
  std::vector<double> s_v;
  std::vector<double> e_r;
  double telescoping_residual = 0.0;  // max_N |Σ_{n<=N} e_r(n) - s_v(N) + s_v(0)|

  double er(int n) const { return e_r.at(static_cast<std::size_t>(n - 1)); }
};

inline EntanglementSeries entanglement_series(const Trajectory& traj) {
  if (traj.populations.size() < 2) throw DomainError("entanglement_series: need at least one step");
  EntanglementSeries out;
  out.s_v.reserve(traj.populations.size());
  for (const auto& p : traj.populations) out.s_v.push_back(shannon_entropy_bits(p));
  out.e_r.reserve(out.s_v.size() - 1);
  double area = 0.0;
  for (std::size_t n = 1; n < out.s_v.size(); ++n) {
    out.e_r.push_back(out.s_v[n] - out.s_v[n - 1]);
    area += out.e_r.back();
    out.telescoping_residual = std::max(out.telescoping_residual, std::abs(area - (out.s_v[n] - out.s_v[0])));
  }
  return out;
}

inline void write_entanglement_csv(std::ostream& out, const EntanglementSeries& s) {
  csv::Writer w(out, {"N", "S_V", "E_r"});
  for (std::size_t n = 0; n < s.s_v.size(); ++n) {
    w.row({csv::format(static_cast<int>(n)), csv::format(s.s_v[n]), n == 0 ? csv::format(0.0) : csv::format(s.e_r[n - 1])});
  }
}

inline constexpr int kMaxOracleDim = 6;

struct JointStateResult {
  Eigen::VectorXd populations;  // diagonal of the reduced particle state
  Eigen::MatrixXcd reduced;     // full reduced density matrix
  double entropy_bits = 0.0;    // von Neumann entropy of `reduced`
  double norm = 1.0;            // norm of the joint state before renormalizing
};

/// Builds particle ⊗ (one spin per level) explicitly for one kick-and-record
/// step: |level⟩|↓...↓⟩ → (U ⊗ 1) → -i Σ_n |n⟩⟨n| ⊗ σx^(n), then traces out
/// the spins. Uses the leading d×d block of `u`; the joint state is
/// renormalized when that block is not unitary.
inline JointStateResult joint_state_oracle(const Eigen::MatrixXcd& u, int initial_level, int d) {
  if (d < 1 || d > kMaxOracleDim) {
    throw DomainError("joint_state_oracle: d = " + std::to_string(d) + " outside [1, " +
                      std::to_string(kMaxOracleDim) + "]");
  }
  if (u.rows() < d || u.cols() < d) throw DomainError("joint_state_oracle: operator smaller than d");
  if (initial_level < 1 || initial_level > d) throw DomainError("joint_state_oracle: initial level outside [1, d]");

  const std::size_t spins = std::size_t{1} << d;
  // index = particle * 2^d + spin configuration; bit n set means spin n is up.
  std::vector<std::complex<double>> psi(static_cast<std::size_t>(d) * spins);
  psi[static_cast<std::size_t>(initial_level - 1) * spins] = 1.0;

  std::vector<std::complex<double>> kicked(psi.size());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (std::size_t s = 0; s < spins; ++s)
        kicked[static_cast<std::size_t>(a) * spins + s] += u(a, b) * psi[static_cast<std::size_t>(b) * spins + s];

  const std::complex<double> minus_i{0.0, -1.0};
  std::vector<std::complex<double>> recorded(psi.size());
  for (int a = 0; a < d; ++a)
    for (std::size_t s = 0; s < spins; ++s)
      recorded[static_cast<std::size_t>(a) * spins + (s ^ (std::size_t{1} << a))] =
          minus_i * kicked[static_cast<std::size_t>(a) * spins + s];

  double norm2 = 0.0;
  for (const auto& c : recorded) norm2 += std::norm(c);
  if (!(norm2 > 0.0)) throw DomainError("joint_state_oracle: kicked state vanishes on the d-level block");

  JointStateResult out;
  out.norm = std::sqrt(norm2);
  out.reduced = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::complex<double> acc{};
      for (std::size_t s = 0; s < spins; ++s)
        acc += recorded[static_cast<std::size_t>(a) * spins + s] * std::conj(recorded[static_cast<std::size_t>(b) * spins + s]);
      out.reduced(a, b) = acc / norm2;
    }
  out.populations = out.reduced.diagonal().real();
  out.entropy_bits = von_neumann_entropy_bits(out.reduced);
  return out;
}

inline JointStateResult joint_state_oracle(const KickOperator& u, int initial_level, int d) {
  return joint_state_oracle(u.matrix, initial_level, d);
}

}  // namespace kickwell
