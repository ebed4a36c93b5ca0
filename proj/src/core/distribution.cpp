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

#include "drso/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "drso/error.hpp"

namespace drso {

DiscreteDistribution::DiscreteDistribution(std::shared_ptr<const PointSpace> space, std::vector<Atom> atoms)
    : space_(std::move(space)) {
  require(space_ != nullptr, "distribution needs a point space");
  require(!atoms.empty(), "distribution must have at least one atom");
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.index < b.index; });
  double total = 0.0;
  for (const auto& a : atoms) {
    require(a.index < space_->size(), "atom index outside the point space");
    require(std::isfinite(a.weight) && a.weight >= 0.0, "distribution weights must be finite and nonnegative");
    if (!atoms_.empty() && atoms_.back().index == a.index)
      atoms_.back().weight += a.weight;
    else
      atoms_.push_back(a);
    total += a.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "distribution weights must sum to 1");
  for (auto& a : atoms_) a.weight /= total;
}

DiscreteDistribution DiscreteDistribution::from_points(const std::vector<std::vector<double>>& points,
                                                       const std::vector<double>& weights) {
  require(!points.empty(), "distribution must have at least one atom");
  require(points.size() == weights.size(), "point and weight counts differ");
  std::map<std::vector<double>, double> merged;
  for (std::size_t k = 0; k < points.size(); ++k) {
    require(std::isfinite(weights[k]), "distribution weights must be finite");
    merged[points[k]] += weights[k];
  }
  std::vector<std::vector<double>> unique;
  std::vector<Atom> atoms;
  // Keep first-appearance order for the point space.
  std::map<std::vector<double>, std::size_t> slot;
  for (const auto& p : points) {
    if (slot.count(p)) continue;
    slot[p] = unique.size();
    atoms.push_back({unique.size(), merged[p]});
    unique.push_back(p);
  }
  auto space = std::make_shared<const PointSpace>(std::move(unique));
  return DiscreteDistribution(std::move(space), std::move(atoms));
}

DiscreteDistribution DiscreteDistribution::empirical(std::shared_ptr<const PointSpace> space,
                                                     const std::vector<std::size_t>& indices) {
  require(!indices.empty(), "empirical distribution needs at least one sample");
  const double w = 1.0 / static_cast<double>(indices.size());
  std::vector<Atom> atoms;
  atoms.reserve(indices.size());
  for (auto i : indices) atoms.push_back({i, w});
  return DiscreteDistribution(std::move(space), std::move(atoms));
}

DiscreteDistribution DiscreteDistribution::from_dense(std::shared_ptr<const PointSpace> space,
                                                      std::span<const double> weights) {
  require(space != nullptr && weights.size() == space->size(), "dense weights must match the point space");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    require(weights[i] >= 0.0, "distribution weights must be nonnegative");
    if (weights[i] > 0.0) atoms.push_back({i, weights[i]});
  }
  return DiscreteDistribution(std::move(space), std::move(atoms));
}

double DiscreteDistribution::expectation(std::span<const double> values) const {
  require(values.size() == space_->size(), "value vector must be indexed by point");
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * values[a.index];
  return s;
}

std::vector<double> DiscreteDistribution::dense_weights() const {
  std::vector<double> w(space_->size(), 0.0);
  for (const auto& a : atoms_) w[a.index] = a.weight;
  return w;
}

}  // namespace drso
