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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "drso/dual.hpp"

namespace drso {

// ---------------------------------------------------------------- newsvendor

struct NewsvendorInstance {
  double h = 1.0;             // overage cost per unit
  double b = 1.0;             // underage cost per unit
  std::vector<double> q;      // nominal weight per demand bin 0..B
  double theta = 0.0;
  double p = 1.0;

  std::size_t bins() const { return q.empty() ? 0 : q.size() - 1; }
};

/// Rounds raw demand samples to the nearest bin and clamps them to [0, B].
NewsvendorInstance newsvendor_from_samples(std::span<const double> samples, std::size_t B, double h, double b,
                                           double theta, double p);

struct NewsvendorResult {
  std::size_t x_star = 0;
  double value = 0.0;
  std::vector<double> value_by_x;
  DualSolution solution;  // at x_star
  WorstCaseDistribution worst_case;
};

NewsvendorResult newsvendor_solve(const NewsvendorInstance& instance);
/// Dense-LP value of order quantity x over the bin transportation polytope.
double newsvendor_oracle(const NewsvendorInstance& instance, std::size_t x);
/// Psi_x on bins 0..B.
std::vector<double> newsvendor_losses(const NewsvendorInstance& instance, std::size_t x);

// ---------------------------------------------------- uncertainty quantification

/// An open region C together with the distance from an inside point to the
/// complement and a point of the complement attaining it.
class Region {
 public:
  virtual ~Region() = default;
  virtual bool contains(std::span<const double> x) const = 0;
  virtual double exit_distance(std::span<const double> x, const GroundMetric& metric) const = 0;
  virtual std::vector<double> exit_point(std::span<const double> x, const GroundMetric& metric) const = 0;
};

/// Open Euclidean disc; requires the euclidean metric.
class DiscRegion : public Region {
 public:
  DiscRegion(std::vector<double> center, double radius);
  bool contains(std::span<const double> x) const override;
  double exit_distance(std::span<const double> x, const GroundMetric& metric) const override;
  std::vector<double> exit_point(std::span<const double> x, const GroundMetric& metric) const override;

 private:
  std::vector<double> c_;
  double r_;
};

/// Open half-space {x : a.x < b}; euclidean, l1 and linf metrics.
class HalfSpaceRegion : public Region {
 public:
  HalfSpaceRegion(std::vector<double> a, double b);
  bool contains(std::span<const double> x) const override;
  double exit_distance(std::span<const double> x, const GroundMetric& metric) const override;
  std::vector<double> exit_point(std::span<const double> x, const GroundMetric& metric) const override;

 private:
  std::vector<double> a_;
  double b_;
};

/// Arbitrary predicate; the complement is represented by the candidate
/// points outside the region.
class GridRegion : public Region {
 public:
  GridRegion(std::function<bool(std::span<const double>)> inside, std::shared_ptr<const PointSpace> candidates);
  bool contains(std::span<const double> x) const override;
  double exit_distance(std::span<const double> x, const GroundMetric& metric) const override;
  std::vector<double> exit_point(std::span<const double> x, const GroundMetric& metric) const override;

 private:
  std::size_t nearest_outside(std::span<const double> x, const GroundMetric& metric) const;

  std::function<bool(std::span<const double>)> inside_;
  std::shared_ptr<const PointSpace> candidates_;
};

struct UqMove {
  std::size_t source;             // nominal atom position
  std::vector<double> destination;
  double mass;
  double exit_distance;
};

struct UqResult {
  double wc_probability = 0.0;
  double nominal_probability = 0.0;
  std::vector<UqMove> moves;             // mass leaving C
  std::optional<std::size_t> split_source;
  double spent = 0.0;                    // sum w d^p used
};

UqResult uq_solve(const DiscreteDistribution& nominal, const Region& region, double theta,
                  const GroundMetric& metric);
/// LP value of inf mu(C) over the nominal points plus each atom's exit point.
double uq_oracle(const DiscreteDistribution& nominal, const Region& region, double theta,
                 const GroundMetric& metric);

// ----------------------------------------------------------- worst-case VaR

struct GaussianNominal {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};

struct VarQuery {
  std::variant<GaussianNominal, DiscreteDistribution> nominal;
  std::vector<double> w;
  double alpha = 0.05;
  double theta = 0.0;
  double p = 1.0;
  double tolerance = 1e-8;
};

struct VarResult {
  double var_wc = 0.0;
  double certificate = 0.0;  // left-hand side of the robustness condition at var_wc
  double target = 0.0;       // theta^p
  double nominal_var = 0.0;
  std::size_t iterations = 0;
};

VarResult wc_var(const VarQuery& query);
/// Left-hand side of the robustness condition at threshold q.
double var_condition(const VarQuery& query, double q);

// ----------------------------------------------------------- affine objective

struct AffineSample {
  std::vector<double> a;
  double b = 0.0;
};

struct AffineResult {
  std::size_t x_index = 0;
  std::vector<double> x_star;
  double value = 0.0;
  std::vector<double> values;
};

/// Worst-case mean of a.x + b when each a moves within a W_1 ball measured in
/// the norm dual to `dual_order`.
double affine_value(std::span<const AffineSample> data, double theta, double dual_order, std::span<const double> x);
AffineResult affine_drso(std::span<const AffineSample> data, double theta, double dual_order,
                         const std::vector<std::vector<double>>& candidates);
double lp_norm(std::span<const double> x, double order);

// ------------------------------------------------ continuum transportation

struct ContinuumInstance {
  std::shared_ptr<const PointSpace> grid;  // cell centers in the plane
  std::vector<double> areas;               // base-measure weight per cell
  DiscreteDistribution nominal;
  double theta = 0.0;
  double p = 1.0;
};

ContinuumInstance square_grid_instance(double lo, double hi, std::size_t n, DiscreteDistribution nominal,
                                       double theta, double p = 1.0);
ContinuumInstance disc_grid_instance(std::span<const double> center, double radius, std::size_t n,
                                     DiscreteDistribution nominal, double theta, double p = 1.0);

struct DrtpOptions {
  std::size_t max_iterations = 5000;
  double gradient_tolerance = 1e-10;
  bool fix_potentials = false;  // keep v = 0 (only lambda and the shift move)
};

struct DrtpResult {
  double value = 0.0;           // best dual value
  double primal_value = 0.0;    // integral of sqrt f*
  double lambda_star = 0.0;
  std::vector<double> v_star;   // potentials in cost units, sum w v = 0
  std::vector<double> f_star;   // density per cell
  double integral = 0.0;        // sum area * f
  double transport_cost = 0.0;  // exact W_p^p of f* against the nominal
  double assignment_cost = 0.0; // cost of sending each cell to its Phi_v minimizer
  double gap = 0.0;             // value - primal_value
  std::vector<double> objective_trace;  // accepted dual values
  std::size_t iterations = 0;
};

DrtpResult drtp_solve(const ContinuumInstance& instance, const DrtpOptions& options = {});

}  // namespace drso
