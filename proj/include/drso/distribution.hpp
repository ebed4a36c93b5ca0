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
#include <memory>
#include <span>
#include <vector>

#include "drso/point_space.hpp"

namespace drso {

struct Atom {
  std::size_t index;  // into the owning PointSpace
  double weight;
};

/// Finite probability measure on a PointSpace.
///
/// Repeated point indices are merged by summing their weights. Weights must be
/// nonnegative and sum to one within 1e-12; within that tolerance they are
/// renormalized, otherwise construction fails. Atoms are kept sorted by index.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::shared_ptr<const PointSpace> space, std::vector<Atom> atoms);

  /// Builds both the space and the measure from raw coordinates. Points with
  /// identical coordinates are merged.
  static DiscreteDistribution from_points(const std::vector<std::vector<double>>& points,
                                          const std::vector<double>& weights);

  /// Uniform 1/N weights on the given indices (duplicates merge).
  static DiscreteDistribution empirical(std::shared_ptr<const PointSpace> space,
                                        const std::vector<std::size_t>& indices);

  /// Weights given per point of the space; zero entries are dropped.
  static DiscreteDistribution from_dense(std::shared_ptr<const PointSpace> space, std::span<const double> weights);

  const PointSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const PointSpace>& space_ptr() const noexcept { return space_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dimension() const noexcept { return space_->dimension(); }

  /// Sum of weight * values[index] over atoms; `values` is indexed by point.
  double expectation(std::span<const double> values) const;
  std::vector<double> dense_weights() const;

 private:
  std::shared_ptr<const PointSpace> space_;
  std::vector<Atom> atoms_;
};

/// Sparse coupling between the atoms of two distributions.
struct TransportEntry {
  std::size_t source;  // atom position in mu
  std::size_t target;  // atom position in nu
  double mass;
};

struct TransportPlan {
  std::vector<TransportEntry> entries;
  double total_cost = 0.0;  // sum of d^p * mass
};

}  // namespace drso
