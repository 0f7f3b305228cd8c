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
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "kickwell/error.hpp"

namespace kickwell {

/// Composite Gauss-Legendre rule: the interval is split into equal panels and
/// a fixed 20-point rule is applied on each. The node count is rounded up to a
/// whole number of panels.
class GaussLegendreRule {
 public:
  static constexpr std::size_t kPanelOrder = 20;

  GaussLegendreRule(double lower, double upper, std::size_t min_points) {
    if (!(upper > lower)) throw DomainError("GaussLegendreRule: empty interval");
    if (min_points == 0) throw DomainError("GaussLegendreRule: need at least one node");
    using Panel = boost::math::quadrature::gauss<double, kPanelOrder>;
    const auto& abscissa = Panel::abscissa();
    const auto& weight = Panel::weights();

    const std::size_t panels = (min_points + kPanelOrder - 1) / kPanelOrder;
    const double width = (upper - lower) / static_cast<double>(panels);
    nodes_.reserve(panels * kPanelOrder);
    weights_.reserve(panels * kPanelOrder);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = lower + (static_cast<double>(p) + 0.5) * width;
      const double half = 0.5 * width;
      // Boost stores the non-negative half of a symmetric rule.
      for (std::size_t i = 0; i < abscissa.size(); ++i) {
        nodes_.push_back(mid - half * abscissa[i]);
        weights_.push_back(half * weight[i]);
        nodes_.push_back(mid + half * abscissa[i]);
        weights_.push_back(half * weight[i]);
      }
    }
  }

  /// Rule on [0, π] with max(4096, 32·n_max) nodes.
  static GaussLegendreRule for_box(int n_max) {
    return GaussLegendreRule(0.0, std::numbers::pi, default_points(n_max));
  }

  static std::size_t default_points(int n_max) {
    return std::max<std::size_t>(4096, 32 * static_cast<std::size_t>(std::max(n_max, 0)));
  }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0) * 1.0);
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace kickwell
