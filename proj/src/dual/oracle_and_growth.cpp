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

#include "drso/dual.hpp"
#include "drso/error.hpp"
#include "drso/lp.hpp"

namespace drso {

PrimalResult primal_oracle(const DualInstance& inst, std::size_t budget) {
  const std::size_t n = inst.atoms(), m = inst.size();
  if (n * m > budget) fail(ErrorCode::kBudgetExceeded, "primal oracle exceeds its dense LP budget");
  lp::Problem prob;
  prob.num_vars = n * m;
  prob.maximize = true;
  prob.objective.resize(n * m);
  lp::Constraint budget_row{{}, lp::Sense::kLessEqual, inst.ball.theta_p()};
  for (std::size_t i = 0; i < n; ++i) {
    lp::Constraint mass{{}, lp::Sense::kEqual, inst.weight(i)};
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t v = i * m + j;
      prob.objective[v] = inst.psi[j];
      mass.terms.emplace_back(v, 1.0);
      if (inst.c(i, j) != 0.0) budget_row.terms.emplace_back(v, inst.c(i, j));
    }
    prob.constraints.push_back(std::move(mass));
  }
  prob.constraints.push_back(std::move(budget_row));
  const auto sol = lp::solve(prob);
  if (sol.status == lp::Status::kInfeasible)
    fail(ErrorCode::kInfeasible, "no distribution on the candidate set lies within the ball");
  if (sol.status != lp::Status::kOptimal) fail(ErrorCode::kNumerical, "primal oracle LP did not converge");
  PrimalResult out;
  out.value = sol.value;
  out.weights.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.weights[j] += sol.x[i * m + j];
      out.transport_cost += sol.x[i * m + j] * inst.c(i, j);
    }
  }
  return out;
}

PrimalResult primal_oracle(const WassersteinBall& ball, const Objective& objective,
                           std::shared_ptr<const PointSpace> candidates, std::size_t budget) {
  return primal_oracle(*make_instance(ball, objective, std::move(candidates)), budget);
}

namespace {

KappaEstimate summarize_tiers(const std::vector<double>& tiers) {
  KappaEstimate out;
  out.tier_ratios = tiers;
  std::vector<double> seen;
  for (double t : tiers)
    if (!std::isnan(t)) seen.push_back(t);
  if (seen.empty()) fail(ErrorCode::kInvalidArgument, "no candidate points beyond the first radius");
  out.kappa = std::max(0.0, seen.back());
  if (seen.size() >= 2) {
    const double prev = seen[seen.size() - 2];
    out.unbounded = prev > 0.0 && seen.back() > 1.1 * prev;
  }
  return out;
}

void check_radii(std::span<const double> radii) {
  require(radii.size() >= 2, "kappa estimation needs at least two radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    require(radii[k] > 0.0, "radii must be positive");
    if (k > 0) require(radii[k] > radii[k - 1], "radii must be increasing");
  }
}

}  // namespace

KappaEstimate estimate_kappa(const Objective& objective, const GroundMetric& metric, std::span<const double> base,
                             std::span<const double> radii, const PointSpace& candidates) {
  check_radii(radii);
  require(metric.kind() != MetricKind::kExplicitMatrix, "kappa estimation needs a coordinate metric");
  require(base.size() == candidates.dimension(), "base point has the wrong dimension");
  const double psi0 = objective(base);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> tiers(radii.size() - 1, nan);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const auto x = candidates.point(j);
    const double d = metric.distance(base, x);
    if (d <= radii[0] || d > radii.back()) continue;
    const std::size_t k =
        static_cast<std::size_t>(std::lower_bound(radii.begin(), radii.end(), d) - radii.begin()) - 1;
    const double r = (objective(x) - psi0) / metric.to_cost(d);
    if (std::isnan(tiers[k]) || r > tiers[k]) tiers[k] = r;
  }
  return summarize_tiers(tiers);
}

KappaEstimate estimate_kappa(const Objective& objective, const GroundMetric& metric, std::span<const double> base,
                             std::span<const double> radii, const std::vector<std::vector<double>>& directions) {
  check_radii(radii);
  require(metric.kind() != MetricKind::kExplicitMatrix, "kappa estimation needs a coordinate metric");
  const std::size_t dim = base.size();
  require(dim > 0, "base point must be nonempty");
  std::vector<std::vector<double>> dirs = directions;
  if (dirs.empty()) {
    for (std::size_t a = 0; a < dim; ++a) {
      for (double s : {1.0, -1.0}) {
        std::vector<double> u(dim, 0.0);
        u[a] = s;
        dirs.push_back(std::move(u));
      }
    }
  }
  const std::vector<double> origin(dim, 0.0);
  const double psi0 = objective(base);
  std::vector<double> tiers;
  std::vector<double> x(dim);
  for (std::size_t k = 1; k < radii.size(); ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& u : dirs) {
      require(u.size() == dim, "direction has the wrong dimension");
      const double len = metric.distance(origin, u);
      require(len > 0.0, "direction must be nonzero");
      for (std::size_t a = 0; a < dim; ++a) x[a] = base[a] + radii[k] * u[a] / len;
      const double d = metric.distance(base, x);
      best = std::max(best, (objective(x) - psi0) / metric.to_cost(d));
    }
    tiers.push_back(best);
  }
  return summarize_tiers(tiers);
}

}  // namespace drso
