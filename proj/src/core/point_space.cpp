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

#include "drso/point_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drso/error.hpp"

namespace drso {

namespace {

bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

PointSpace::PointSpace(std::vector<std::vector<double>> points, std::vector<std::string> labels) {
  require(!points.empty(), "point space must contain at least one point");
  dim_ = points.front().size();
  require(dim_ >= 1, "points must have dimension >= 1");
  size_ = points.size();
  coords_.reserve(size_ * dim_);
  for (const auto& p : points) {
    require(p.size() == dim_, "all points must have identical dimension");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }
  require(labels.empty() || labels.size() == size_, "label count must match point count");
  labels_ = std::move(labels);
  index_and_validate();
}

PointSpace PointSpace::from_flat(std::size_t dimension, std::vector<double> coords) {
  require(dimension >= 1, "points must have dimension >= 1");
  require(!coords.empty() && coords.size() % dimension == 0, "flat coordinates do not match dimension");
  PointSpace s;
  s.dim_ = dimension;
  s.size_ = coords.size() / dimension;
  s.coords_ = std::move(coords);
  s.index_and_validate();
  return s;
}

PointSpace PointSpace::grid_1d(double lo, double hi, double step) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi >= lo, "grid bounds must satisfy lo <= hi");
  require(step > 0.0, "grid step must be positive");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = lo + static_cast<double>(k) * step;
  return from_flat(1, std::move(c));
}

void PointSpace::index_and_validate() {
  for (double v : coords_) require(std::isfinite(v), "point coordinates must be finite");
  sorted_.resize(size_);
  std::iota(sorted_.begin(), sorted_.end(), std::size_t{0});
  std::sort(sorted_.begin(), sorted_.end(),
            [this](std::size_t a, std::size_t b) { return lex_less(point(a), point(b)); });
  for (std::size_t k = 1; k < size_; ++k) {
    auto a = point(sorted_[k - 1]);
    auto b = point(sorted_[k]);
    require(!std::equal(a.begin(), a.end(), b.begin()), "duplicate point in point space");
  }
}

std::span<const double> PointSpace::point(std::size_t i) const {
  return {coords_.data() + i * dim_, dim_};
}

std::optional<std::size_t> PointSpace::find(std::span<const double> x) const {
  if (x.size() != dim_) return std::nullopt;
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x,
                             [this](std::size_t a, std::span<const double> key) { return lex_less(point(a), key); });
  if (it == sorted_.end()) return std::nullopt;
  auto p = point(*it);
  if (!std::equal(p.begin(), p.end(), x.begin())) return std::nullopt;
  return *it;
}

std::vector<std::vector<double>> PointSpace::to_vectors() const {
  std::vector<std::vector<double>> out(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto p = point(i);
    out[i].assign(p.begin(), p.end());
  }
  return out;
}

}  // namespace drso
