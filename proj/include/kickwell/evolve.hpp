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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kickwell/basis.hpp"
#include "kickwell/csv.hpp"
#include "kickwell/error.hpp"
#include "kickwell/kick_operator.hpp"
#include "kickwell/potential.hpp"

namespace kickwell {

/// One kick followed by a projective energy measurement: P ← Z P.
inline Eigen::VectorXd step(const TransitionMatrix& z, const Eigen::VectorXd& p) {
  if (p.size() != z.dim()) {
    throw DomainError("step: population vector has size " + std::to_string(p.size()) + ", expected " +
                      std::to_string(z.dim()));
  }
  return z.z * p;
}

/// Energy gained on the next kick given the populations before it:
///   a0/2 - (1/2π) Σ_m c_m P_m
inline double energy_increment_prediction(const DerivSquaredSpectrum& spec, const Eigen::VectorXd& p_prev) {
  const int m_top = std::min<int>(spec.m_max(), static_cast<int>(p_prev.size()));
  double correction = 0.0;
  for (int m = 1; m <= m_top; ++m) correction += spec.c(m) * p_prev(m - 1);
  return spec.mean_rate() - correction / (2.0 * std::numbers::pi);
}

struct TrajectoryOptions {
  double leak_fail = 1e-4;  // max probability lost to truncation in one step
  double cross_tol = 1e-6;  // relative, direct vs recursed energy
};

struct Trajectory {
  int steps = 0;
  std::vector<Eigen::VectorXd> populations;  // P(0) .. P(steps)
  std::vector<double> energies;              // Σ E_n P_n(N)
  std::vector<double> energies_recursed;     // E_0 + Σ predicted increments
  std::vector<double> total_prob;
  std::vector<double> diffusion_rate;  // (E_N - E_0)/N; entry 0 is 0
  double max_step_loss = 0.0;
  double max_cross_discrepancy = 0.0;  // relative to E_N
  bool cross_check_passed = true;
};

inline void check_probability_vector(const Eigen::VectorXd& p) {
  if (p.size() == 0) throw DomainError("empty probability vector");
  if ((p.array() < 0.0).any() || !p.allFinite()) throw DomainError("probability vector has negative or non-finite entries");
  if (std::abs(p.sum() - 1.0) > 1e-12) throw DomainError("probability vector does not sum to 1");
}

/// Iterates the measured kick map and tracks energy two ways: directly from
/// the populations and by accumulating energy_increment_prediction. Probability
/// lost in a single step above opts.leak_fail raises TruncationError; the
/// energy cross-check is recorded, not thrown (the direct sum misses the energy
/// of the truncated tail).
inline Trajectory run_trajectory(const TransitionMatrix& z, const BoxBasis& basis, const Eigen::VectorXd& p0,
                                 int n_steps, const DerivSquaredSpectrum& spectrum,
                                 const TrajectoryOptions& opts = {}) {
  if (n_steps < 1) throw DomainError("run_trajectory: n_steps must be >= 1");
  if (z.dim() != basis.dim()) throw DomainError("run_trajectory: transition matrix and basis disagree in dimension");
  check_probability_vector(p0);
  if (p0.size() != basis.dim()) throw DomainError("run_trajectory: initial state has wrong dimension");

  const Eigen::VectorXd energy = basis.energies();
  Trajectory t;
  t.steps = n_steps;
  t.populations.reserve(static_cast<std::size_t>(n_steps) + 1);
  t.populations.push_back(p0);
  t.energies.push_back(energy.dot(p0));
  t.energies_recursed.push_back(t.energies.back());
  t.total_prob.push_back(p0.sum());
  t.diffusion_rate.push_back(0.0);

  for (int n = 1; n <= n_steps; ++n) {
    const Eigen::VectorXd& prev = t.populations.back();
    Eigen::VectorXd next = step(z, prev);
    const double loss = prev.sum() - next.sum();
    t.max_step_loss = std::max(t.max_step_loss, loss);
    if (loss > opts.leak_fail) {
      throw TruncationError("step " + std::to_string(n) + " lost " + csv::format(loss) +
                            " probability past level " + std::to_string(basis.n_max()) +
                            "; increase n_max");
    }
    const double recursed = t.energies_recursed.back() + energy_increment_prediction(spectrum, prev);
    const double direct = energy.dot(next);
    t.total_prob.push_back(next.sum());
    t.populations.push_back(std::move(next));
    t.energies.push_back(direct);
    t.energies_recursed.push_back(recursed);
    t.diffusion_rate.push_back((direct - t.energies.front()) / n);
    const double rel = std::abs(direct - recursed) / std::max(std::abs(recursed), 1e-300);
    t.max_cross_discrepancy = std::max(t.max_cross_discrepancy, rel);
  }
  t.cross_check_passed = t.max_cross_discrepancy <= opts.cross_tol;
  return t;
}

/// Ordinary least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

struct AsymptoticOptions {
  int n_steps = 2000;
  double fit_fraction = 0.5;  // fit over the last half of the run
  double leak_fail = 1e-4;
  double partial_sum_tol = 1e-10;
  int max_partial_terms = 10000;
};

struct AsymptoticReport {
  double closed_form_rate = 0.0;      // (1/2π) ∫ (V')² dx
  double numeric_rate = 0.0;          // slope fit of E_N
  double geometric_correction = 0.0;  // -(1/2π) Σ_m c_m [(I - Z)^{-1}]_{m,1}
  bool converged = false;
  bool used_partial_sums = false;
  int partial_sum_terms = 0;
  bool partial_sums_converged = true;
  double final_total_prob = 1.0;
};

/// Solves (I - Z) x = e_1, falling back to the partial sums Σ_{i<N} Z^i e_1
/// when the system is numerically singular.
inline Eigen::VectorXd geometric_visits(const TransitionMatrix& z, const AsymptoticOptions& opts, bool& used_fallback,
                                        int& terms, bool& fallback_converged) {
  const int n = z.dim();
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
  e1(0) = 1.0;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - z.z;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  used_fallback = false;
  terms = 0;
  fallback_converged = true;
  if (std::isfinite(rcond) && rcond > 1e-13) {
    Eigen::VectorXd x = lu.solve(e1);
    const double residual = (a * x - e1).cwiseAbs().maxCoeff();
    if (x.allFinite() && residual < 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff())) return x;
  }

  used_fallback = true;
  fallback_converged = false;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd term = e1;
  for (terms = 0; terms < opts.max_partial_terms; ++terms) {
    sum += term;
    term = z.z * term;
    if (term.cwiseAbs().maxCoeff() < opts.partial_sum_tol) {
      ++terms;
      fallback_converged = true;
      break;
    }
  }
  return sum;
}

inline AsymptoticReport asymptotic_rate(const TransitionMatrix& z, const DerivSquaredSpectrum& spec,
                                        const BoxBasis& basis, const AsymptoticOptions& opts = {}) {
  if (opts.n_steps < 4) throw DomainError("asymptotic_rate: need at least 4 steps for a slope fit");
  AsymptoticReport rep;
  rep.closed_form_rate = spec.mean_rate();

  const Eigen::VectorXd visits =
      geometric_visits(z, opts, rep.used_partial_sums, rep.partial_sum_terms, rep.partial_sums_converged);
  double corr = 0.0;
  const int m_top = std::min<int>(spec.m_max(), z.dim());
  for (int m = 1; m <= m_top; ++m) corr += spec.c(m) * visits(m - 1);
  rep.geometric_correction = -corr / (2.0 * std::numbers::pi);

  TrajectoryOptions topts;
  topts.leak_fail = opts.leak_fail;
  topts.cross_tol = 1.0;
  const auto traj = run_trajectory(z, basis, basis.basis_state(1), opts.n_steps, spec, topts);
  rep.final_total_prob = traj.total_prob.back();

  const int first = std::clamp(static_cast<int>(std::floor(opts.n_steps * (1.0 - opts.fit_fraction))) + 1, 0,
                               opts.n_steps - 1);
  std::vector<double> xs, ys;
  for (int n = first; n <= opts.n_steps; ++n) {
    xs.push_back(n);
    ys.push_back(traj.energies[static_cast<std::size_t>(n)]);
  }
  rep.numeric_rate = least_squares_slope(xs, ys);

  if (rep.closed_form_rate > 0.0) {
    rep.converged = std::abs(rep.numeric_rate - rep.closed_form_rate) / rep.closed_form_rate < 0.02;
  } else {
    rep.converged = std::abs(rep.numeric_rate) < 1e-12;
  }
  return rep;
}

/// Per-step table: N, E_N, D_N, total_prob, P_1 .. P_{n_show}.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& t, int n_show = 16) {
  const int dim = t.populations.empty() ? 0 : static_cast<int>(t.populations.front().size());
  const int shown = std::clamp(n_show, 0, dim);
  std::vector<std::string> header{"N", "E_N", "D_N", "total_prob"};
  for (int n = 1; n <= shown; ++n) header.push_back("P_" + std::to_string(n));
  csv::Writer w(out, header);
  for (int step = 0; step <= t.steps; ++step) {
    const auto s = static_cast<std::size_t>(step);
    std::vector<std::string> row{csv::format(step), csv::format(t.energies[s]), csv::format(t.diffusion_rate[s]),
                                 csv::format(t.total_prob[s])};
    for (int n = 0; n < shown; ++n) row.push_back(csv::format(t.populations[s](n)));
    w.row(row);
  }
}

}  // namespace kickwell
