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
#include <random>

#include "doctest.h"
#include "drso/error.hpp"
#include "drso/phi.hpp"
#include "oracles/numeric_oracles.hpp"

using namespace drso;
using oracle::edge_oracle;
using oracle::grid_oracle;

namespace {

const PhiKind kAllKinds[] = {PhiKind::kKl,         PhiKind::kBurg,      PhiKind::kChi2,
                             PhiKind::kModifiedChi2, PhiKind::kHellinger, PhiKind::kTv};

// sup_t (s t - phi(t)) by ternary search on a log-spaced t axis.
std::pair<double, double> numeric_conjugate(PhiKind k, double s) {
  auto g = [&](double u) {
    const double t = std::exp(u);
    return s * t - phi_value(k, t);
  };
  double a = -40.0, b = 15.0;
  for (int it = 0; it < 400; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    (g(m1) < g(m2) ? a : b) = g(m1) < g(m2) ? m1 : m2;
  }
  const double u = 0.5 * (a + b);
  double best = std::max(g(u), -phi_value(k, 0.0));  // t = 0 boundary
  return {best, std::exp(u)};
}

}  // namespace

TEST_CASE("conjugates match a numeric sup") {
  for (PhiKind k : kAllKinds) {
    for (double s : {-3.0, -1.5, -0.7, -0.2, 0.3, 0.8}) {
      if (k == PhiKind::kBurg && s >= 0.0) continue;
      if (k == PhiKind::kTv && std::abs(std::abs(s) - 1.0) < 1e-9) continue;
      const auto [v, t] = numeric_conjugate(k, s);
      CAPTURE(to_string(k));
      CAPTURE(s);
      CHECK(phi_conjugate(k, s) == doctest::Approx(v).epsilon(1e-8));
      if (k != PhiKind::kTv && phi_conjugate_derivative(k, s) > 1e-6)
        CHECK(phi_conjugate_derivative(k, s) == doctest::Approx(t).epsilon(1e-5));
    }
  }
  CHECK(std::isinf(phi_conjugate(PhiKind::kBurg, 0.5)));
  CHECK(std::isinf(phi_conjugate(PhiKind::kHellinger, 1.5)));
  CHECK(phi_conjugate_derivative(PhiKind::kModifiedChi2, -3.0) == 0.0);
}

TEST_CASE("phi worst case with theta 0 is the nominal") {
  const std::vector<double> q{0.2, 0.3, 0.0, 0.5}, psi{1.0, -2.0, 5.0, 0.5};
  for (PhiKind k : kAllKinds) {
    const auto r = phi_worst_case(q, psi, 0.0, k);
    CHECK(r.p_star == q);
  }
}

TEST_CASE("kl two-point worst case is exponential tilting") {
  const std::vector<double> q{0.5, 0.5}, psi{0.0, 1.0};
  const auto r = phi_worst_case(q, psi, 0.1, PhiKind::kKl);
  // p = (1 - t, t) with (1-t) log(2(1-t)) + t log(2t) = 0.1, t > 1/2
  auto D = [](double t) { return (1 - t) * std::log(2 * (1 - t)) + t * std::log(2 * t); };
  double lo = 0.5, hi = 1.0 - 1e-15;
  for (int it = 0; it < 200; ++it) (D(0.5 * (lo + hi)) < 0.1 ? lo : hi) = 0.5 * (lo + hi);
  CHECK(r.p_star[1] == doctest::Approx(lo).epsilon(1e-9));
  CHECK(std::abs(r.divergence - 0.1) <= 1e-8);
  // tilting: p_2 / p_1 = exp(1 / lambda)
  CHECK(std::log(r.p_star[1] / r.p_star[0]) == doctest::Approx(1.0 / r.lambda).epsilon(1e-8));
}

TEST_CASE("phi worst case matches a simplex grid on three points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0, 1);
  for (PhiKind k : kAllKinds) {
    for (int t = 0; t < 6; ++t) {
      std::vector<double> q{U(rng) + 0.05, U(rng) + 0.05, t % 2 ? 0.0 : U(rng) + 0.05};
      const double s = q[0] + q[1] + q[2];
      for (double& v : q) v /= s;
      const std::vector<double> psi{U(rng), U(rng), U(rng)};
      const double theta = 0.02 + 0.3 * U(rng);
      const auto r = phi_worst_case(q, psi, theta, k);
      CAPTURE(to_string(k));
      CAPTURE(t);
      // no feasible grid point beats the optimum; the edge-refined grid matches it
      CHECK(r.value >= grid_oracle(q, psi, theta, k) - 1e-9);
      CHECK(std::abs(r.value - edge_oracle(q, psi, theta, k)) <= 1e-4);
      CHECK(r.divergence <= theta + 1e-8);
      if (r.lambda > 0.0) CHECK(std::abs(r.divergence - theta) <= 1e-8);
      double sum = 0.0;
      for (double p : r.p_star) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      if (std::isinf(phi_recession(k))) CHECK((q[2] > 0.0 || r.p_star[2] == 0.0));
    }
  }
}

TEST_CASE("burg pops mass onto the worst off-support point") {
  const std::vector<double> q{0.5, 0.5, 0.0, 0.0}, psi{0.0, 0.5, 1.0, 0.8};
  const auto small = phi_worst_case(q, psi, 0.005, PhiKind::kBurg);
  const auto large = phi_worst_case(q, psi, 0.5, PhiKind::kBurg);
  REQUIRE(large.popped.has_value());
  CHECK(*large.popped == 2);
  CHECK(large.popped_mass > 0.0);
  CHECK(large.p_star[3] == 0.0);
  CHECK(large.divergence == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(small.popped_mass < large.popped_mass);
  // KL never leaves the support
  const auto kl = phi_worst_case(q, psi, 0.5, PhiKind::kKl);
  CHECK(kl.p_star[2] == 0.0);
  CHECK(kl.p_star[3] == 0.0);
  // ties are broken and reported
  const std::vector<double> tied{0.0, 1.0, 1.0, 0.2};
  CHECK(phi_worst_case(q, tied, 0.1, PhiKind::kChi2).perturbed);
}

TEST_CASE("talagrand constant against a dense scan") {
  const std::vector<double> s{0, 1, 1, 2, 5, 5, 5, 9};
  double best = 1e300;
  for (double z0 : {0.0, 1.0, 2.0, 5.0, 9.0})
    for (int k = 0; k <= 200000; ++k) {
      const double a = std::exp(std::log(1e-6) + (std::log(10.0) - std::log(1e-6)) * k / 200000.0);
      double m = 0.0;
      for (double x : s) m += std::exp(a * (x - z0) * (x - z0));
      best = std::min(best, (1.0 + std::log(m / double(s.size()))) / a);
    }
  CHECK(talagrand_lambda(s) == doctest::Approx(1.0 / best).epsilon(1e-6));
  CHECK_THROWS_AS(talagrand_lambda(std::vector<double>{3.0, 3.0}), Error);
}

TEST_CASE("radius calibration") {
  const auto s500 = demand_samples("binomial", 100, 500, 1);
  const auto r = calibrate_radius(s500, 100.0, 0.05);
  CHECK(std::isfinite(r.theta));
  CHECK(r.theta > 0.0);
  CHECK(std::abs(r.bound - 0.05) <= 1e-6);
  CHECK(r.delta > 0.0);
  CHECK(r.delta < r.theta);
  for (std::size_t k = 1; k < r.curve.size(); ++k) CHECK(r.curve[k].second <= r.curve[k - 1].second * (1 + 1e-9));
  // doubling the sample (same empirical law) shrinks the radius
  std::vector<double> s1000(s500);
  s1000.insert(s1000.end(), s500.begin(), s500.end());
  CHECK(calibrate_radius(s1000, 100.0, 0.05).theta < r.theta);
  CHECK_THROWS_AS(calibrate_radius(std::vector<double>{0.0, 100.0}, 100.0, 0.05), Error);
}

TEST_CASE("phi comparison harness structure") {
  PhiCompareOptions o;
  o.B = 20;
  o.n = 50;
  o.wasserstein_theta = 0.5;
  for (const char* shape : {"binomial", "geometric"}) {
    o.shape = shape;
    const auto r = phi_compare(o);
    CHECK(r.rows.size() == 21);
    CHECK(r.kl_absolutely_continuous);
    CHECK(r.burg_single_pop);
    double a = 0, b = 0, c = 0;
    for (const auto& row : r.rows) {
      a += row.p_wasserstein;
      b += row.p_burg;
      c += row.p_kl;
    }
    CHECK(a == doctest::Approx(1.0));
    CHECK(b == doctest::Approx(1.0));
    CHECK(c == doctest::Approx(1.0));
  }
}
