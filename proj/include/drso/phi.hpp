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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drso/measures.hpp"

namespace drso {

/// phi*(s) = sup_{t >= 0} (s t - phi(t)); +inf outside the domain.
double phi_conjugate(PhiKind kind, double s);
/// The maximizing t of the conjugate, which is a (sub)gradient of phi*. For
/// TV the midpoint of the subdifferential is returned.
double phi_conjugate_derivative(PhiKind kind, double s);

struct PhiWorstCase {
  std::vector<double> p_star;
  double value = 0.0;        // p* . psi with the caller's psi
  double divergence = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  std::optional<std::size_t> popped;  // j_M when it carries mass
  double popped_mass = 0.0;
  bool perturbed = false;    // exact ties in psi were broken by 1e-12 * index
};

/// sup { p . psi : I_phi(p, q) <= theta, p in the simplex }.
PhiWorstCase phi_worst_case(std::span<const double> q, std::span<const double> psi, double theta, PhiKind kind);

struct RadiusCalibration {
  double theta = 0.0;
  double delta = 0.0;
  double lambda = 0.0;        // Talagrand constant estimate
  double bound = 0.0;         // achieved right-hand side
  std::vector<std::pair<double, double>> curve;  // (theta, bound) samples
};

/// log of max(8e B/delta, 1)^(B/delta) exp(-(lambda/8) N (theta - delta)^2).
double concentration_log_bound(double theta, double delta, double B, double lambda, std::size_t n);
/// Minimum over delta in (0, theta); returns (log bound, delta).
std::pair<double, double> best_delta(double theta, double B, double lambda, std::size_t n,
                                     std::size_t grid = 2000);
/// [min over sample points z0 and alpha > 0 of (1/alpha)(1 + log mean exp(alpha d^2))]^-1.
double talagrand_lambda(std::span<const double> samples);
RadiusCalibration calibrate_radius(std::span<const double> samples, double B, double target);

struct PhiCompareOptions {
  std::string shape = "binomial";  // or "geometric"
  std::size_t B = 100;
  std::size_t n = 500;
  std::uint64_t seed = 20160101;
  double h = 1.0, b = 1.0;
  std::optional<double> wasserstein_theta;  // default: calibrate_radius at 0.05
  double phi_theta = 0.1;
};

struct PhiCompareRow {
  std::size_t bin;
  double q, p_wasserstein, p_burg, p_kl;
};

struct PhiCompareResult {
  double wasserstein_theta = 0.0;
  std::size_t x_wasserstein = 0, x_burg = 0, x_kl = 0;
  double v_wasserstein = 0.0, v_burg = 0.0, v_kl = 0.0;
  std::vector<PhiCompareRow> rows;
  bool kl_absolutely_continuous = false;
  bool burg_single_pop = false;        // off-support mass only at j_M
  std::optional<std::size_t> burg_pop;
};

/// Newsvendor worst cases under Wasserstein, Burg and KL balls on seeded
/// binomial or truncated-geometric demand.
PhiCompareResult phi_compare(const PhiCompareOptions& options);

/// Demand samples for the comparison: Binomial(B, 0.5) or Geometric(0.1)
/// truncated to B.
std::vector<double> demand_samples(const std::string& shape, std::size_t B, std::size_t n, std::uint64_t seed);

}  // namespace drso
