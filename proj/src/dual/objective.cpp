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
#include <random>

#include "drso/dual.hpp"
#include "drso/error.hpp"

namespace drso {

Objective::Objective(Function f, std::string name) : f_(std::move(f)), name_(std::move(name)) {
  require(static_cast<bool>(f_), "objective function must be callable");
}

Objective Objective::table(std::shared_ptr<const PointSpace> space, std::vector<double> values) {
  require(space != nullptr, "table objective needs a point space");
  require(values.size() == space->size(), "table objective needs one value per candidate");
  for (double v : values) require(std::isfinite(v), "table objective values must be finite");
  Objective o;
  o.table_space_ = std::move(space);
  o.table_ = std::move(values);
  o.name_ = "table";
  return o;
}

Objective Objective::hinge(double a) {
  Objective o([a](std::span<const double> x) { return std::max(0.0, x[0] - a); }, "hinge");
  o.with_growth(1.0);
  return o;
}

Objective Objective::bump() {
  Objective o([](std::span<const double> x) { return std::max(1.0 - x[0] * x[0], 0.0); }, "bump");
  o.with_growth(0.0);
  return o;
}

Objective Objective::reciprocal_plus() {
  Objective o([](std::span<const double> x) { return 1.0 + x[0] + 1.0 / (x[0] + 1.0); }, "reciprocal_plus");
  o.with_growth(1.0);
  return o;
}

Objective Objective::reciprocal_minus() {
  Objective o([](std::span<const double> x) { return 1.0 + x[0] - 1.0 / (x[0] + 1.0); }, "reciprocal_minus");
  o.with_growth(1.0);
  return o;
}

Objective& Objective::with_growth(double kappa) {
  require(std::isfinite(kappa) && kappa >= 0.0, "declared growth must be finite and nonnegative");
  growth_ = kappa;
  unbounded_ = false;
  return *this;
}

Objective& Objective::with_unbounded_growth() {
  growth_.reset();
  unbounded_ = true;
  return *this;
}

Objective& Objective::with_lipschitz(double L, double M) {
  require(L >= 0.0 && M >= 0.0, "Lipschitz data must be nonnegative");
  lipschitz_ = LipschitzData{L, M};
  return *this;
}

double Objective::operator()(std::span<const double> x) const {
  if (f_) return f_(x);
  const auto k = table_space_->find(x);
  require(k.has_value(), "table objective evaluated outside its point space");
  return table_[*k];
}

std::vector<double> Objective::evaluate(const PointSpace& space) const {
  if (!f_ && &space == table_space_.get()) return table_;
  std::vector<double> out(space.size());
  for (std::size_t j = 0; j < space.size(); ++j) out[j] = (*this)(space.point(j));
  return out;
}

double check_lipschitz(const Objective& objective, const GroundMetric& metric, const PointSpace& space,
                       std::size_t pairs, std::uint64_t seed) {
  const auto lip = objective.lipschitz();
  require(lip.has_value(), "objective declares no Lipschitz data");
  const auto psi = objective.evaluate(space);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t i = pick(rng), j = pick(rng);
    const double excess = std::abs(psi[i] - psi[j]) - lip->L * metric.distance(space, i, j) - lip->M;
    worst = std::max(worst, excess);
  }
  return worst;
}

double WassersteinBall::theta_p() const { return std::pow(theta, metric.order()); }

std::shared_ptr<const DualInstance> make_instance(const WassersteinBall& ball, const Objective& objective,
                                                  std::shared_ptr<const PointSpace> candidates) {
  require(candidates != nullptr && candidates->size() > 0, "candidate set must be nonempty");
  require(std::isfinite(ball.theta) && ball.theta >= 0.0, "radius theta must be finite and nonnegative");
  require(candidates->dimension() == ball.nominal.dimension(), "candidates and nominal differ in dimension");
  ball.metric.check_compatible(*candidates);
  const bool shared = candidates == ball.nominal.space_ptr();
  require(shared || ball.metric.kind() != MetricKind::kExplicitMatrix,
          "explicit-matrix metric needs the nominal on the candidate space");

  auto inst = std::make_shared<DualInstance>(DualInstance{ball, candidates, {}, {}, {}, {}, {}, false, {}});
  inst->psi = objective.evaluate(*candidates);
  for (double v : inst->psi) require(std::isfinite(v), "objective must be finite on the candidates");
  const auto atoms = ball.nominal.atoms();
  const std::size_t n = atoms.size(), m = candidates->size();
  inst->cost.resize(n * m);
  inst->distance.resize(n * m);
  inst->nominal_psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zeta = ball.nominal.space().point(atoms[i].index);
    for (std::size_t j = 0; j < m; ++j) {
      const double d = shared ? ball.metric.distance(*candidates, atoms[i].index, j)
                              : ball.metric.distance(zeta, candidates->point(j));
      inst->distance[i * m + j] = d;
      inst->cost[i * m + j] = ball.metric.to_cost(d);
    }
    inst->nominal_psi[i] = shared ? inst->psi[atoms[i].index] : objective(zeta);
  }
  inst->declared_growth = objective.declared_growth();
  inst->unbounded_growth = objective.unbounded_growth();
  inst->lipschitz = objective.lipschitz();
  return inst;
}

}  // namespace drso
