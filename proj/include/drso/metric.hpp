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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drso/point_space.hpp"

namespace drso {

enum class MetricKind { kEuclidean, kL1, kLinf, kAbsolute1d, kDiscrete, kExplicitMatrix };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

/// Ground metric d together with the transport order p >= 1.
///
/// The explicit-matrix kind is indexed by point index and therefore only
/// applies to points of a single PointSpace. Its matrix is validated for
/// the metric axioms on construction; asymmetric costs are accepted behind
/// `allow_asymmetric` without any correctness claim downstream.
class GroundMetric {
 public:
  static GroundMetric euclidean(double p = 1.0) { return GroundMetric(MetricKind::kEuclidean, p); }
  static GroundMetric l1(double p = 1.0) { return GroundMetric(MetricKind::kL1, p); }
  static GroundMetric linf(double p = 1.0) { return GroundMetric(MetricKind::kLinf, p); }
  static GroundMetric absolute_1d(double p = 1.0) { return GroundMetric(MetricKind::kAbsolute1d, p); }
  static GroundMetric discrete(double p = 1.0) { return GroundMetric(MetricKind::kDiscrete, p); }
  static GroundMetric explicit_matrix(std::vector<double> row_major, std::size_t n, double p = 1.0,
                                      bool allow_asymmetric = false);
  static GroundMetric from_kind(MetricKind kind, double p);

  MetricKind kind() const noexcept { return kind_; }
  double order() const noexcept { return p_; }
  std::size_t matrix_size() const noexcept { return n_; }
  const std::vector<double>& matrix() const noexcept { return matrix_; }
  bool asymmetric_allowed() const noexcept { return asymmetric_; }

  GroundMetric with_order(double p) const;

  /// Distance between raw coordinates. Not available for explicit-matrix.
  double distance(std::span<const double> a, std::span<const double> b) const;
  /// Distance between two points of one space; works for every kind.
  double distance(const PointSpace& space, std::size_t i, std::size_t j) const;

  /// d^p, the transport cost per unit mass.
  double cost(std::span<const double> a, std::span<const double> b) const { return to_cost(distance(a, b)); }
  double cost(const PointSpace& space, std::size_t i, std::size_t j) const { return to_cost(distance(space, i, j)); }
  double to_cost(double d) const;

  /// Checks that the metric can be applied to points of this space.
  void check_compatible(const PointSpace& space) const;

 private:
  GroundMetric(MetricKind kind, double p);

  MetricKind kind_;
  double p_;
  std::size_t n_ = 0;
  std::vector<double> matrix_;
  bool asymmetric_ = false;
};

}  // namespace drso
