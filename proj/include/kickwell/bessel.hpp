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
#include <vector>

#include "kickwell/error.hpp"

namespace kickwell {

/// J_0(x), ..., J_max_order(x). Negative arguments use J_n(-x) = (-1)^n J_n(x).
inline std::vector<double> bessel_j_sequence(double x, int max_order) {
  if (max_order < 0) throw DomainError("bessel_j_sequence: negative order");
  if (!std::isfinite(x)) throw DomainError("bessel_j_sequence: non-finite argument");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  const double ax = std::abs(x);
  for (int n = 0; n <= max_order; ++n) {
    const double v = std::cyl_bessel_j(static_cast<double>(n), ax);
    out[static_cast<std::size_t>(n)] = (x < 0.0 && n % 2 == 1) ? -v : v;
  }
  return out;
}

/// Truncation order for a Bessel (Jacobi-Anger) series at argument x: at least
/// ceil(|x|) + 40, and large enough that every dropped |J_j(x)| is below 1e-16.
inline int bessel_series_order(double x) {
  const int floor_order = static_cast<int>(std::ceil(std::abs(x))) + 40;
  const int probe = floor_order + 60;
  const auto seq = bessel_j_sequence(x, probe);
  int last = 0;
  for (int n = probe; n >= 0; --n) {
    if (std::abs(seq[static_cast<std::size_t>(n)]) >= 1e-16) {
      last = n;
      break;
    }
  }
  return std::max(floor_order, last);
}

}  // namespace kickwell
