// Copyright 2026 The drso Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string_view>

#include "drso/distribution.hpp"
#include "drso/metric.hpp"

namespace drso {

struct WassersteinResult {
  double value = 0.0;  // W_p, i.e. total_cost^(1/p)
  TransportPlan plan;
};

/// Exact W_p by the transportation simplex. For one-dimensional supports under
/// the absolute-1d metric the sorted-quantile coupling is used instead.
WassersteinResult wasserstein_distance(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                       const GroundMetric& metric);

/// Always solves the transportation LP, never the 1-D shortcut.
WassersteinResult wasserstein_distance_lp(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                          const GroundMetric& metric);

/// Quantile formula for one-dimensional supports: W_p under |x - y|.
double wasserstein_1d_fast(const DiscreteDistribution& mu, const DiscreteDistribution& nu, double p = 1.0);

/// Cost matrix d^p between the atoms of mu (rows) and nu (columns).
std::vector<double> atom_cost_matrix(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                     const GroundMetric& metric);

enum class PhiKind { kKl, kBurg, kChi2, kModifiedChi2, kHellinger, kTv };

std::string_view to_string(PhiKind kind);
PhiKind parse_phi_kind(std::string_view name);

/// phi(t) for t >= 0; +inf outside the domain.
double phi_value(PhiKind kind, double t);
/// lim_{t -> inf} phi(t) / t.
double phi_recession(PhiKind kind);

/// I_phi(p, q) = sum_j q_j phi(p_j / q_j) with 0 phi(0/0) = 0 and
/// 0 phi(a/0) = a * lim phi(t)/t.
double phi_divergence(std::span<const double> p, std::span<const double> q, PhiKind kind);

/// L * theta^p + M.
double expectation_gap_bound(double lipschitz, double offset, double theta, double p);

}  // namespace drso
