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

#include "drso/applications.hpp"
#include "drso/error.hpp"

namespace drso {
namespace {

void validate(const NewsvendorInstance& in) {
  require(in.h > 0.0 && in.b > 0.0, "newsvendor costs must be positive");
  require(in.q.size() >= 2, "newsvendor needs at least two demand bins");
  require(in.q.size() <= 10001, "newsvendor support exceeds the enumeration budget");
  require(in.theta >= 0.0 && in.p >= 1.0, "newsvendor radius must be nonnegative and p >= 1");
}

struct Setup {
  std::shared_ptr<const PointSpace> space;
  WassersteinBall ball;
};

Setup setup(const NewsvendorInstance& in) {
  auto space = std::make_shared<const PointSpace>(PointSpace::grid_1d(0.0, double(in.bins()), 1.0));
  return {space, WassersteinBall{DiscreteDistribution::from_dense(space, in.q), GroundMetric::absolute_1d(in.p),
                                 in.theta}};
}

}  // namespace

NewsvendorInstance newsvendor_from_samples(std::span<const double> samples, std::size_t B, double h, double b,
                                           double theta, double p) {
  require(!samples.empty(), "newsvendor needs at least one demand sample");
  require(B >= 1, "newsvendor needs B >= 1");
  NewsvendorInstance in{h, b, std::vector<double>(B + 1, 0.0), theta, p};
  const double w = 1.0 / double(samples.size());
  for (double s : samples) {
    require(std::isfinite(s), "demand samples must be finite");
    const double k = std::clamp(std::round(s), 0.0, double(B));
    in.q[static_cast<std::size_t>(k)] += w;
  }
  validate(in);
  return in;
}

std::vector<double> newsvendor_losses(const NewsvendorInstance& in, std::size_t x) {
  std::vector<double> psi(in.q.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double d = double(x) - double(j);
    psi[j] = std::max(in.h * d, -in.b * d);
  }
  return psi;
}

NewsvendorResult newsvendor_solve(const NewsvendorInstance& in) {
  validate(in);
  const auto s = setup(in);
  NewsvendorResult out;
  std::optional<DualSolution> best;
  for (std::size_t x = 0; x <= in.bins(); ++x) {
    auto sol = solve_dual(s.ball, Objective::table(s.space, newsvendor_losses(in, x)), s.space);
    out.value_by_x.push_back(sol.v_dual);
    if (!best || sol.v_dual < out.value - 1e-12 * std::max(1.0, std::abs(out.value))) {
      out.value = sol.v_dual;
      out.x_star = x;
      best = std::move(sol);
    }
  }
  out.solution = std::move(*best);
  out.worst_case = construct_worst_case(out.solution);
  return out;
}

double newsvendor_oracle(const NewsvendorInstance& in, std::size_t x) {
  validate(in);
  require(x <= in.bins(), "order quantity outside the demand support");
  const auto s = setup(in);
  return primal_oracle(s.ball, Objective::table(s.space, newsvendor_losses(in, x)), s.space).value;
}

}  // namespace drso
