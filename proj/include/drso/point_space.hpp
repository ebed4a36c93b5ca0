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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drso {

/// A finite, ordered set of distinct points in R^s.
///
/// Coordinates are stored row-major in one buffer. Construction rejects empty
/// input, ragged dimensions, non-finite coordinates and duplicate points.
class PointSpace {
 public:
  explicit PointSpace(std::vector<std::vector<double>> points,
                      std::vector<std::string> labels = {});

  /// Builds the 1-D grid {lo, lo + step, ...} up to and including hi (within
  /// half a step). Points are computed as lo + k * step.
  static PointSpace grid_1d(double lo, double hi, double step);

  /// Builds a space from flat row-major coordinates.
  static PointSpace from_flat(std::size_t dimension, std::vector<double> coords);

  std::size_t size() const noexcept { return size_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Index of the point with exactly these coordinates, if present.
  std::optional<std::size_t> find(std::span<const double> x) const;

  std::vector<std::vector<double>> to_vectors() const;

 private:
  PointSpace() = default;
  void index_and_validate();

  std::size_t dim_ = 0;
  std::size_t size_ = 0;
  std::vector<double> coords_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> sorted_;  // lexicographic order, for find()
};

}  // namespace drso
