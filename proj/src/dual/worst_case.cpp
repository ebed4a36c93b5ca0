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
#include <set>
#include <sstream>

#include "drso/dual.hpp"
#include "drso/error.hpp"
#include "dual/internal.hpp"

namespace drso {

DiscreteDistribution WorstCaseDistribution::distribution() const {
  require(candidates != nullptr, "worst case has no candidate space");
  std::vector<Atom> out;
  for (const auto& a : atoms)
    if (a.mass > 0.0) out.push_back({a.destination, a.mass});
  return DiscreteDistribution(candidates, std::move(out));
}

std::size_t WorstCaseDistribution::support_size() const {
  std::set<std::size_t> s;
  for (const auto& a : atoms)
    if (a.mass > 0.0) s.insert(a.destination);
  return s.size();
}

WorstCaseDistribution construct_worst_case(const DualSolution& solution) {
  if (solution.existence != Existence::kExists)
    fail(ErrorCode::kNotApplicable, "no worst-case distribution exists; use the epsilon-optimal construction");
  const DualInstance& inst = *solution.instance;
  const std::size_t n = inst.atoms();
  const double tp = inst.ball.theta_p();
  const double ctol = 1e-12 * std::max(1.0, tp);

  std::vector<std::size_t> dest(n);
  double residual = tp;
  for (std::size_t i = 0; i < n; ++i) {
    dest[i] = solution.per_atom[i].near;
    residual -= inst.weight(i) * inst.c(i, dest[i]);
  }
  WorstCaseDistribution wc;
  wc.candidates = inst.candidates;
  std::optional<std::size_t> split;
  double split_fraction = 0.0;
  if (solution.lambda_star > 0.0) {
    for (std::size_t i = 0; i < n && residual > ctol; ++i) {
      const auto& rv = solution.per_atom[i];
      const double w = inst.weight(i);
      const double delta = w * (inst.c(i, rv.far) - inst.c(i, rv.near));
      if (delta <= 0.0) continue;
      if (delta <= residual + ctol) {
        dest[i] = rv.far;
        residual -= delta;
        continue;
      }
      // A single argmin point whose cost uses up the residual exactly.
      std::optional<std::size_t> exact;
      for (std::size_t k = 0; k < rv.argmin.size(); ++k) {
        if (std::abs(w * (rv.argmin_cost[k] - inst.c(i, rv.near)) - residual) <= 1e-10 * std::max(1.0, tp)) {
          exact = rv.argmin[k];
          break;
        }
      }
      if (exact) {
        dest[i] = *exact;
      } else {
        split = i;
        split_fraction = residual / delta;
      }
      residual = 0.0;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = inst.weight(i);
    if (split && *split == i) {
      const auto& rv = solution.per_atom[i];
      wc.atoms.push_back({i, rv.near, 1.0 - split_fraction, w * (1.0 - split_fraction)});
      wc.atoms.push_back({i, rv.far, split_fraction, w * split_fraction});
    } else {
      wc.atoms.push_back({i, dest[i], 1.0, w});
    }
  }
  wc.split_source = split;
  for (const auto& a : wc.atoms) {
    wc.transport_cost += a.mass * inst.c(a.source, a.destination);
    wc.value += a.mass * inst.psi[a.destination];
  }
  return wc;
}

EpsilonOptimal epsilon_optimal_sequence(const DualSolution& solution, double epsilon) {
  require(epsilon > 0.0, "epsilon must be positive");
  if (solution.existence != Existence::kVanishingSequence)
    fail(ErrorCode::kNotApplicable, "epsilon-optimal sequence is only needed when no worst case exists");
  DualOptions opt;
  opt.kappa = 0.0;
  const DualSolution truncated = solve_dual(solution.instance, opt);
  EpsilonOptimal out;
  out.distribution = construct_worst_case(truncated);
  out.achieved = out.distribution.value;
  out.slack = solution.v_dual - out.achieved;
  out.truncated_lambda = truncated.lambda_star;
  if (out.slack > epsilon) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epsilon " << epsilon << " is below the slack " << out.slack
        << " achievable on this candidate set; widen the candidate radius";
    fail(ErrorCode::kNumerical, msg.str());
  }
  return out;
}

RobustLowerBound robust_lower_bound_vK(const DualSolution& solution, std::size_t K) {
  require(K >= 1, "K must be a positive integer");
  const DualInstance& inst = *solution.instance;
  if (!inst.lipschitz) fail(ErrorCode::kInvalidArgument, "objective declares no Lipschitz data");
  const auto wc = construct_worst_case(solution);
  RobustLowerBound out;
  out.v_k = wc.value;
  if (!wc.split_source) return out;
  const std::size_t i0 = *wc.split_source;
  const WorstCaseAtom* near = nullptr;
  const WorstCaseAtom* far = nullptr;
  for (const auto& a : wc.atoms) {
    if (a.source != i0) continue;
    (near == nullptr ? near : far) = &a;
  }
  const double w = inst.weight(i0);
  const double f = far->fraction;
  const double fk = std::floor(static_cast<double>(K) * f) / static_cast<double>(K);
  out.v_k = wc.value - w * (f - fk) * (inst.psi[far->destination] - inst.psi[near->destination]);
  out.distance = inst.ball.metric.distance(*inst.candidates, far->destination, near->destination);
  out.gap_bound = w * (inst.lipschitz->M + inst.lipschitz->L * out.distance) / static_cast<double>(K);
  return out;
}

}  // namespace drso
