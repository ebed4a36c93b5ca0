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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "drso/applications.hpp"
#include "drso/error.hpp"

namespace drso {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

DiscRegion::DiscRegion(std::vector<double> center, double radius) : c_(std::move(center)), r_(radius) {
  require(!c_.empty() && radius > 0.0, "disc needs a center and a positive radius");
}

bool DiscRegion::contains(std::span<const double> x) const {
  return GroundMetric::euclidean().distance(x, c_) < r_;
}

double DiscRegion::exit_distance(std::span<const double> x, const GroundMetric& metric) const {
  require(metric.kind() == MetricKind::kEuclidean || metric.kind() == MetricKind::kAbsolute1d,
          "disc regions need the euclidean metric");
  return std::max(0.0, r_ - GroundMetric::euclidean().distance(x, c_));
}

std::vector<double> DiscRegion::exit_point(std::span<const double> x, const GroundMetric& metric) const {
  exit_distance(x, metric);
  const double d = GroundMetric::euclidean().distance(x, c_);
  std::vector<double> out(c_);
  if (d == 0.0) {
    out[0] += r_;
    return out;
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c_[k] + r_ * (x[k] - c_[k]) / d;
  return out;
}

HalfSpaceRegion::HalfSpaceRegion(std::vector<double> a, double b) : a_(std::move(a)), b_(b) {
  require(!a_.empty() && lp_norm(a_, 2.0) > 0.0, "half-space normal must be nonzero");
}

bool HalfSpaceRegion::contains(std::span<const double> x) const { return dot(a_, x) < b_; }

namespace {

double dual_norm(std::span<const double> a, const GroundMetric& metric) {
  switch (metric.kind()) {
    case MetricKind::kEuclidean:
    case MetricKind::kAbsolute1d: return lp_norm(a, 2.0);
    case MetricKind::kL1: return lp_norm(a, std::numeric_limits<double>::infinity());
    case MetricKind::kLinf: return lp_norm(a, 1.0);
    default: fail(ErrorCode::kInvalidArgument, "half-space regions need a euclidean, l1 or linf metric");
  }
}

}  // namespace

double HalfSpaceRegion::exit_distance(std::span<const double> x, const GroundMetric& metric) const {
  return std::max(0.0, b_ - dot(a_, x)) / dual_norm(a_, metric);
}

std::vector<double> HalfSpaceRegion::exit_point(std::span<const double> x, const GroundMetric& metric) const {
  const double gap = std::max(0.0, b_ - dot(a_, x));
  std::vector<double> out(x.begin(), x.end());
  switch (metric.kind()) {
    case MetricKind::kL1: {
      // Move along the coordinate with the largest |a_k|.
      std::size_t k = 0;
      for (std::size_t j = 1; j < a_.size(); ++j)
        if (std::abs(a_[j]) > std::abs(a_[k])) k = j;
      out[k] += gap / a_[k];
      break;
    }
    case MetricKind::kLinf: {
      const double t = gap / lp_norm(a_, 1.0);
      for (std::size_t j = 0; j < a_.size(); ++j) out[j] += t * (a_[j] > 0 ? 1.0 : (a_[j] < 0 ? -1.0 : 0.0));
      break;
    }
    default: {
      const double n2 = dot(a_, a_);
      for (std::size_t j = 0; j < a_.size(); ++j) out[j] += gap * a_[j] / n2;
    }
  }
  dual_norm(a_, metric);
  return out;
}

GridRegion::GridRegion(std::function<bool(std::span<const double>)> inside,
                       std::shared_ptr<const PointSpace> candidates)
    : inside_(std::move(inside)), candidates_(std::move(candidates)) {
  require(static_cast<bool>(inside_) && candidates_ != nullptr, "grid region needs a predicate and candidates");
}

bool GridRegion::contains(std::span<const double> x) const { return inside_(x); }

std::size_t GridRegion::nearest_outside(std::span<const double> x, const GroundMetric& metric) const {
  std::size_t best = candidates_->size();
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates_->size(); ++j) {
    const auto y = candidates_->point(j);
    if (inside_(y)) continue;
    const double d = metric.distance(x, y);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  if (best == candidates_->size()) fail(ErrorCode::kInvalidArgument, "grid region has no candidate outside");
  return best;
}

double GridRegion::exit_distance(std::span<const double> x, const GroundMetric& metric) const {
  return metric.distance(x, candidates_->point(nearest_outside(x, metric)));
}

std::vector<double> GridRegion::exit_point(std::span<const double> x, const GroundMetric& metric) const {
  const auto y = candidates_->point(nearest_outside(x, metric));
  return {y.begin(), y.end()};
}

UqResult uq_solve(const DiscreteDistribution& nominal, const Region& region, double theta,
                  const GroundMetric& metric) {
  require(theta >= 0.0, "radius theta must be nonnegative");
  require(metric.kind() != MetricKind::kExplicitMatrix, "uq needs a coordinate metric");
  const auto atoms = nominal.atoms();
  UqResult out;
  struct Inside {
    std::size_t atom;
    double d;
  };
  std::vector<Inside> inside;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto x = nominal.space().point(atoms[i].index);
    if (!region.contains(x)) continue;
    out.nominal_probability += atoms[i].weight;
    const double d = region.exit_distance(x, metric);
    if (d < 0.0) fail(ErrorCode::kInvalidArgument, "region oracle returned a negative exit distance");
    inside.push_back({i, d});
  }
  std::stable_sort(inside.begin(), inside.end(), [](const Inside& a, const Inside& b) { return a.d < b.d; });
  double budget = std::pow(theta, metric.order());
  double moved = 0.0;
  if (theta > 0.0) {
    for (const auto& in : inside) {
      const double w = atoms[in.atom].weight;
      const double c = metric.to_cost(in.d);
      const auto x = nominal.space().point(atoms[in.atom].index);
      if (w * c <= budget) {
        budget -= w * c;
        out.spent += w * c;
        moved += w;
        out.moves.push_back({in.atom, region.exit_point(x, metric), w, in.d});
        continue;
      }
      const double frac = budget / (w * c);
      if (frac > 0.0) {
        out.moves.push_back({in.atom, region.exit_point(x, metric), w * frac, in.d});
        out.split_source = in.atom;
        out.spent += budget;
        moved += w * frac;
      }
      break;
    }
  }
  out.wc_probability = std::max(0.0, out.nominal_probability - moved);
  return out;
}

double uq_oracle(const DiscreteDistribution& nominal, const Region& region, double theta,
                 const GroundMetric& metric) {
  require(metric.kind() != MetricKind::kExplicitMatrix, "uq needs a coordinate metric");
  std::map<std::vector<double>, double> table;  // point -> Psi
  for (const auto& a : nominal.atoms()) {
    const auto x = nominal.space().point(a.index);
    std::vector<double> key(x.begin(), x.end());
    const bool in = region.contains(x);
    table[key] = in ? -1.0 : 0.0;
    if (in) table[region.exit_point(x, metric)] = 0.0;  // complement point by construction
  }
  std::vector<std::vector<double>> pts;
  std::vector<double> psi;
  for (const auto& [k, v] : table) {
    pts.push_back(k);
    psi.push_back(v);
  }
  auto space = std::make_shared<const PointSpace>(pts);
  std::vector<Atom> atoms;
  for (const auto& a : nominal.atoms()) atoms.push_back({*space->find(nominal.space().point(a.index)), a.weight});
  WassersteinBall ball{DiscreteDistribution(space, atoms), metric, theta};
  return -primal_oracle(ball, Objective::table(space, psi), space).value;
}

}  // namespace drso
