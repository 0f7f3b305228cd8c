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
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "kickwell/error.hpp"

namespace kickwell {

/// Truncated eigenbasis of the infinite square well on [0, π] (unit mass).
/// Levels are 1-based: |1⟩ is the ground state.
class BoxBasis {
 public:
  explicit BoxBasis(int n_max, double hbar = 1.0) : n_max_(n_max), hbar_(hbar) {
    if (n_max < 2) throw DomainError("BoxBasis: n_max must be >= 2, got " + std::to_string(n_max));
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("BoxBasis: hbar must be positive and finite");
  }

  int n_max() const { return n_max_; }
  int dim() const { return n_max_; }
  double hbar() const { return hbar_; }

  double energy(int n) const {
    check_level(n);
    const double dn = n;
    return 0.5 * hbar_ * hbar_ * dn * dn;
  }

  /// Eigenvalue of p² on level n, i.e. 2·E_n.
  double momentum_squared(int n) const { return 2.0 * energy(n); }

  Eigen::VectorXd energies() const {
    Eigen::VectorXd e(n_max_);
    for (int n = 1; n <= n_max_; ++n) e(n - 1) = energy(n);
    return e;
  }

  /// Probability vector concentrated on `level`.
  Eigen::VectorXd basis_state(int level) const {
    check_level(level);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max_);
    p(level - 1) = 1.0;
    return p;
  }

  void check_level(int n) const {
    if (n < 1 || n > n_max_) {
      throw DomainError("level " + std::to_string(n) + " outside [1, " + std::to_string(n_max_) + "]");
    }
  }

  friend bool operator==(const BoxBasis&, const BoxBasis&) = default;

 private:
  int n_max_;
  double hbar_;
};

/// ⟨x|n⟩ = √(2/π) sin(n x).
inline double eigenfunction(const BoxBasis& basis, int n, double x) {
  basis.check_level(n);
  if (!(x >= 0.0 && x <= std::numbers::pi)) throw DomainError("eigenfunction: x outside [0, pi]");
  return std::sqrt(2.0 / std::numbers::pi) * std::sin(n * x);
}

}  // namespace kickwell
