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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drso/distribution.hpp"
#include "drso/metric.hpp"

namespace drso {

struct LipschitzData {
  double L = 0.0;
  double M = 0.0;
};

/// Psi, evaluated only on finite candidate sets, plus optional growth and
/// Lipschitz declarations.
class Objective {
 public:
  using Function = std::function<double(std::span<const double>)>;

  explicit Objective(Function f, std::string name = "function");
  /// Values indexed by the points of `space`.
  static Objective table(std::shared_ptr<const PointSpace> space, std::vector<double> values);

  /// max(0, x - a), growth 1.
  static Objective hinge(double a);
  /// max(1 - x^2, 0), growth 0.
  static Objective bump();
  /// 1 + x + 1/(x + 1), growth 1.
  static Objective reciprocal_plus();
  /// 1 + x - 1/(x + 1), growth 1.
  static Objective reciprocal_minus();

  Objective& with_growth(double kappa);
  Objective& with_unbounded_growth();
  Objective& with_lipschitz(double L, double M);

  double operator()(std::span<const double> x) const;
  /// Psi at every point of `space`, in index order.
  std::vector<double> evaluate(const PointSpace& space) const;

  const std::string& name() const noexcept { return name_; }
  std::optional<double> declared_growth() const noexcept { return growth_; }
  bool unbounded_growth() const noexcept { return unbounded_; }
  std::optional<LipschitzData> lipschitz() const noexcept { return lipschitz_; }

 private:
  Objective() = default;

  Function f_;
  std::shared_ptr<const PointSpace> table_space_;
  std::vector<double> table_;
  std::string name_;
  std::optional<double> growth_;
  bool unbounded_ = false;
  std::optional<LipschitzData> lipschitz_;
};

/// Checks |Psi(x) - Psi(y)| <= L d(x, y) + M on random pairs of `space`.
/// Returns the largest violation found (<= 0 when the declaration holds).
double check_lipschitz(const Objective& objective, const GroundMetric& metric, const PointSpace& space,
                       std::size_t pairs, std::uint64_t seed);

/// {mu : W_p(mu, nominal) <= theta}; p is the metric's order.
struct WassersteinBall {
  DiscreteDistribution nominal;
  GroundMetric metric;
  double theta = 0.0;

  double theta_p() const;
};

struct RegularizedValue {
  double lambda = 0.0;
  double phi = 0.0;                  // min_j lambda c_j - Psi_j
  std::vector<std::size_t> argmin;   // candidate indices, ascending
  std::vector<double> argmin_cost;   // d^p to zeta, per argmin entry
  std::vector<double> argmin_psi;
  std::size_t near = 0;              // lowest-index nearest minimizer
  std::size_t far = 0;               // lowest-index farthest minimizer
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Exact Phi(lambda, zeta) over a finite candidate set.
RegularizedValue phi_regularize(const Objective& objective, const GroundMetric& metric,
                                const PointSpace& candidates, double lambda, std::span<const double> zeta);

/// Psi on the candidates and the d^p cost from each nominal atom to each
/// candidate, shared by the dual solver and the worst-case constructions.
struct DualInstance {
  WassersteinBall ball;
  std::shared_ptr<const PointSpace> candidates;
  std::vector<double> psi;        // per candidate
  std::vector<double> cost;       // row-major atoms x candidates
  std::vector<double> distance;   // same layout, d rather than d^p
  std::vector<double> nominal_psi;  // Psi at each nominal atom
  std::optional<double> declared_growth;
  bool unbounded_growth = false;
  std::optional<LipschitzData> lipschitz;

  std::size_t atoms() const { return ball.nominal.size(); }
  std::size_t size() const { return psi.size(); }
  double weight(std::size_t i) const { return ball.nominal.atoms()[i].weight; }
  double c(std::size_t i, std::size_t j) const { return cost[i * psi.size() + j]; }
  double d(std::size_t i, std::size_t j) const { return distance[i * psi.size() + j]; }
};

std::shared_ptr<const DualInstance> make_instance(const WassersteinBall& ball, const Objective& objective,
                                                  std::shared_ptr<const PointSpace> candidates);

/// h(lambda) = lambda theta^p + sum_i w_i max_j (Psi_j - lambda c_ij).
double dual_objective(const DualInstance& instance, double lambda);
double dual_objective(const WassersteinBall& ball, const Objective& objective,
                      std::shared_ptr<const PointSpace> candidates, double lambda);

enum class Existence { kExists, kVanishingSequence, kUnbounded };
std::string_view to_string(Existence e);

enum class LambdaSearch { kAuto, kBreakpoints, kGolden };

struct DualOptions {
  LambdaSearch search = LambdaSearch::kAuto;
  std::size_t max_breakpoints = 2000;  // per atom, before falling back to golden section
  double golden_width = 1e-10;
  std::optional<double> kappa;  // overrides the objective's declared growth
};

struct DualSolution {
  std::shared_ptr<const DualInstance> instance;
  double lambda_star = 0.0;
  double v_dual = 0.0;
  double kappa_hat = 0.0;
  Existence existence = Existence::kExists;
  std::vector<RegularizedValue> per_atom;
  double left_derivative = 0.0;   // theta^p - sum w d_max^p
  double right_derivative = 0.0;  // theta^p - sum w d_min^p
  double lambda_max = 0.0;
  std::string method;             // "breakpoints", "golden", "theta-zero", "unbounded"
  std::size_t breakpoints = 0;
};

DualSolution solve_dual(std::shared_ptr<const DualInstance> instance, const DualOptions& options = {});
DualSolution solve_dual(const WassersteinBall& ball, const Objective& objective,
                        std::shared_ptr<const PointSpace> candidates, const DualOptions& options = {});

struct WorstCaseAtom {
  std::size_t source;       // nominal atom position
  std::size_t destination;  // candidate index
  double fraction;          // share of the source's mass
  double mass;
};

struct WorstCaseDistribution {
  std::vector<WorstCaseAtom> atoms;
  std::optional<std::size_t> split_source;  // the one fractionally split atom
  double transport_cost = 0.0;
  double value = 0.0;  // E Psi under the distribution
  std::shared_ptr<const PointSpace> candidates;

  DiscreteDistribution distribution() const;
  std::size_t support_size() const;
};

WorstCaseDistribution construct_worst_case(const DualSolution& solution);

struct EpsilonOptimal {
  WorstCaseDistribution distribution;
  double achieved = 0.0;
  double slack = 0.0;  // v_dual - achieved
  double truncated_lambda = 0.0;
};

EpsilonOptimal epsilon_optimal_sequence(const DualSolution& solution, double epsilon);

struct PrimalResult {
  double value = 0.0;
  std::vector<double> weights;  // per candidate
  double transport_cost = 0.0;
};

/// Dense LP over couplings gamma_ij between nominal atoms and candidates.
PrimalResult primal_oracle(const DualInstance& instance, std::size_t budget = 40000);
PrimalResult primal_oracle(const WassersteinBall& ball, const Objective& objective,
                           std::shared_ptr<const PointSpace> candidates, std::size_t budget = 40000);

struct KappaEstimate {
  double kappa = 0.0;
  bool unbounded = false;
  std::vector<double> tier_ratios;  // max ratio per tier (r_{k-1}, r_k]
};

/// Growth-rate estimate from candidate points binned by distance to `base`.
KappaEstimate estimate_kappa(const Objective& objective, const GroundMetric& metric, std::span<const double> base,
                             std::span<const double> radii, const PointSpace& candidates);
/// Same, probing base + r * u for each direction u at each radius. Default
/// directions are the signed coordinate axes.
KappaEstimate estimate_kappa(const Objective& objective, const GroundMetric& metric, std::span<const double> base,
                             std::span<const double> radii, const std::vector<std::vector<double>>& directions = {});

struct RobustLowerBound {
  double v_k = 0.0;
  double gap_bound = 0.0;
  double distance = 0.0;  // d(far, near) of the split atom
};

RobustLowerBound robust_lower_bound_vK(const DualSolution& solution, std::size_t K);

}  // namespace drso
