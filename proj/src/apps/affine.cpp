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

#include <cmath>
#include <limits>

#include "drso/applications.hpp"
#include "drso/error.hpp"

namespace drso {

double lp_norm(std::span<const double> x, double order) {
  require(order >= 1.0, "norm order must be >= 1");
  if (std::isinf(order)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (order == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (order == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, order);
  return m * std::pow(s, 1.0 / order);
}

double affine_value(std::span<const AffineSample> data, double theta, double dual_order, std::span<const double> x) {
  require(!data.empty(), "affine objective needs at least one sample");
  require(theta >= 0.0, "radius theta must be nonnegative");
  double mean = 0.0;
  for (const auto& s : data) {
    require(s.a.size() == x.size(), "sample and decision dimensions differ");
    double v = s.b;
    for (std::size_t k = 0; k < x.size(); ++k) v += s.a[k] * x[k];
    mean += v;
  }
  return mean / double(data.size()) + theta * lp_norm(x, dual_order);
}

AffineResult affine_drso(std::span<const AffineSample> data, double theta, double dual_order,
                         const std::vector<std::vector<double>>& candidates) {
  require(!candidates.empty(), "candidate decision list is empty");
  AffineResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = affine_value(data, theta, dual_order, candidates[i]);
    out.values.push_back(v);
    if (v < out.value) {
      out.value = v;
      out.x_index = i;
    }
  }
  out.x_star = candidates[out.x_index];
  return out;
}

}  // namespace drso
