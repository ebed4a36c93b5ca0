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

#include "drso/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "drso/error.hpp"

namespace drso {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kEuclidean: return "euclidean";
    case MetricKind::kL1: return "l1";
    case MetricKind::kLinf: return "linf";
    case MetricKind::kAbsolute1d: return "absolute-1d";
    case MetricKind::kDiscrete: return "discrete";
    case MetricKind::kExplicitMatrix: return "explicit-matrix";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean" || name == "l2") return MetricKind::kEuclidean;
  if (name == "l1") return MetricKind::kL1;
  if (name == "linf") return MetricKind::kLinf;
  if (name == "absolute-1d" || name == "abs") return MetricKind::kAbsolute1d;
  if (name == "discrete" || name == "tv") return MetricKind::kDiscrete;
  if (name == "explicit-matrix") return MetricKind::kExplicitMatrix;
  fail(ErrorCode::kInvalidArgument, "unknown metric kind '" + std::string(name) + "'");
}

GroundMetric::GroundMetric(MetricKind kind, double p) : kind_(kind), p_(p) {
  require(std::isfinite(p) && p >= 1.0, "transport order p must satisfy p >= 1");
}

GroundMetric GroundMetric::from_kind(MetricKind kind, double p) {
  require(kind != MetricKind::kExplicitMatrix, "explicit-matrix metric needs a matrix");
  return GroundMetric(kind, p);
}

GroundMetric GroundMetric::explicit_matrix(std::vector<double> m, std::size_t n, double p, bool allow_asymmetric) {
  require(n >= 1 && m.size() == n * n, "explicit metric matrix must be n x n");
  GroundMetric g(MetricKind::kExplicitMatrix, p);
  double scale = 0.0;
  for (double v : m) {
    require(std::isfinite(v) && v >= 0.0, "explicit metric entries must be finite and nonnegative");
    scale = std::max(scale, v);
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  auto at = [&](std::size_t i, std::size_t j) { return m[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    require(at(i, i) == 0.0, "explicit metric must have a zero diagonal");
    if (!allow_asymmetric)
      for (std::size_t j = 0; j < i; ++j) require(at(i, j) == at(j, i), "explicit metric must be symmetric");
  }
  if (!allow_asymmetric) {
    // Exhaustive triangle check for small matrices, seeded random triples otherwise.
    if (n <= 150) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k)
            require(at(i, k) <= at(i, j) + at(j, k) + tol, "explicit metric violates the triangle inequality");
    } else {
      std::mt19937_64 rng(0x5eedu);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (int t = 0; t < 200000; ++t) {
        std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
        require(at(i, k) <= at(i, j) + at(j, k) + tol, "explicit metric violates the triangle inequality");
      }
    }
  }
  g.n_ = n;
  g.matrix_ = std::move(m);
  g.asymmetric_ = allow_asymmetric;
  return g;
}

GroundMetric GroundMetric::with_order(double p) const {
  GroundMetric g = *this;
  require(std::isfinite(p) && p >= 1.0, "transport order p must satisfy p >= 1");
  g.p_ = p;
  return g;
}

double GroundMetric::to_cost(double d) const {
  if (p_ == 1.0) return d;
  if (p_ == 2.0) return d * d;
  return std::pow(d, p_);
}

double GroundMetric::distance(std::span<const double> a, std::span<const double> b) const {
  require(a.size() == b.size(), "dimension mismatch between points");
  switch (kind_) {
    case MetricKind::kEuclidean: {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      return std::sqrt(s);
    }
    case MetricKind::kL1: {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
      return s;
    }
    case MetricKind::kLinf: {
      double s = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
      return s;
    }
    case MetricKind::kAbsolute1d:
      require(a.size() == 1, "absolute-1d metric requires one-dimensional points");
      return std::abs(a[0] - b[0]);
    case MetricKind::kDiscrete:
      return std::equal(a.begin(), a.end(), b.begin()) ? 0.0 : 1.0;
    case MetricKind::kExplicitMatrix:
      break;
  }
  fail(ErrorCode::kInvalidArgument, "explicit-matrix metric is indexed by point, not by coordinates");
}

double GroundMetric::distance(const PointSpace& space, std::size_t i, std::size_t j) const {
  if (kind_ == MetricKind::kExplicitMatrix) {
    require(i < n_ && j < n_, "point index outside the explicit metric matrix");
    return matrix_[i * n_ + j];
  }
  return distance(space.point(i), space.point(j));
}

void GroundMetric::check_compatible(const PointSpace& space) const {
  if (kind_ == MetricKind::kExplicitMatrix)
    require(space.size() == n_, "explicit metric matrix size does not match the point space");
  if (kind_ == MetricKind::kAbsolute1d)
    require(space.dimension() == 1, "absolute-1d metric requires one-dimensional points");
}

}  // namespace drso
