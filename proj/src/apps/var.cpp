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
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "drso/applications.hpp"
#include "drso/error.hpp"

namespace drso {
namespace {

// Loss Z = -w.xi seen as a one-dimensional law; moving xi by r in the l-inf
// metric moves Z by at most r because |w|_1 = 1.
struct LossLaw {
  bool gaussian = false;
  double mean = 0.0, sd = 0.0;            // gaussian
  std::vector<std::pair<double, double>> atoms;  // (z, weight), sorted by z
};

void check_weights(std::span<const double> w) {
  require(!w.empty(), "portfolio weights are empty");
  double s = 0.0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, "portfolio weights must be nonnegative");
    s += x;
  }
  require(std::abs(s - 1.0) <= 1e-9, "portfolio weights must sum to 1");
}

LossLaw loss_law(const VarQuery& q) {
  check_weights(q.w);
  require(q.alpha > 0.0 && q.alpha < 1.0, "alpha must lie in (0, 1)");
  require(q.theta >= 0.0 && std::isfinite(q.theta), "theta must be nonnegative");
  require(q.p >= 1.0, "order p must be >= 1");
  const std::size_t n = q.w.size();
  LossLaw law;
  if (const auto* g = std::get_if<GaussianNominal>(&q.nominal)) {
    require(g->mean.size() == n && g->covariance.size() == n, "gaussian nominal dimension mismatch");
    double m = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      require(g->covariance[i].size() == n, "covariance must be square");
      m -= q.w[i] * g->mean[i];
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(g->covariance[i][j]));
    }
    // Cholesky with a pivot floor so singular PSD matrices pass.
    std::vector<double> L(n * n, 0.0);
    const double floor = 1e-12 * std::max(1.0, scale);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        require(std::abs(g->covariance[i][j] - g->covariance[j][i]) <= floor, "covariance must be symmetric");
      double d = g->covariance[j][j];
      for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
      if (d < -floor) fail(ErrorCode::kInvalidArgument, "covariance is not positive semidefinite");
      L[j * n + j] = d > floor ? std::sqrt(d) : 0.0;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = g->covariance[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
        if (L[j * n + j] > 0.0) {
          L[i * n + j] = s / L[j * n + j];
        } else if (std::abs(s) > 1e-9 * std::max(1.0, scale)) {
          fail(ErrorCode::kInvalidArgument, "covariance is not positive semidefinite");
        }
      }
    }
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) var += q.w[i] * g->covariance[i][j] * q.w[j];
    law.mean = m;
    if (var > 0.0) {
      law.gaussian = true;
      law.sd = std::sqrt(var);
    } else {
      law.atoms = {{m, 1.0}};
    }
    return law;
  }
  const auto& nu = std::get<DiscreteDistribution>(q.nominal);
  require(nu.dimension() == n, "empirical nominal dimension mismatch");
  for (const auto& a : nu.atoms()) {
    const auto x = nu.space().point(a.index);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) z -= q.w[i] * x[i];
    law.atoms.push_back({z, a.weight});
  }
  std::sort(law.atoms.begin(), law.atoms.end());
  return law;
}

double nominal_var(const LossLaw& law, double alpha) {
  if (law.gaussian) {
    const boost::math::normal_distribution<double> z(law.mean, law.sd);
    return boost::math::quantile(z, 1.0 - alpha);
  }
  // inf{t : P(Z <= t) >= 1 - alpha}
  double cum = 0.0;
  for (const auto& [z, w] : law.atoms) {
    cum += w;
    if (cum >= 1.0 - alpha - 1e-12) return z;
  }
  return law.atoms.back().first;
}

double condition(const LossLaw& law, double alpha, double p, double var, double q) {
  if (q <= var) return 0.0;
  if (law.gaussian) {
    const boost::math::normal_distribution<double> z(law.mean, law.sd);
    if (p == 1.0) {
      const double s2 = law.sd * law.sd;
      const double dF = boost::math::cdf(z, q) - boost::math::cdf(z, var);
      const double dphi = boost::math::pdf(z, q) - boost::math::pdf(z, var);
      return (q - law.mean) * dF + s2 * dphi;
    }
    auto integrand = [&](double y) { return std::pow(q - y, p) * boost::math::pdf(z, y); };
    // Beyond 12 sd the density is below double resolution.
    const double lo = std::max(var, law.mean - 12.0 * law.sd);
    if (lo >= q) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lo, q, 15, 1e-13);
  }
  // Mass that must cross q is alpha - P(Z > q); the cheapest mass is the
  // largest loss below q, including the share r of the atom sitting at VaR.
  double above_var = 0.0, cost = 0.0;
  for (const auto& [z, w] : law.atoms) {
    if (z > var) above_var += w;
    if (z > var && z <= q) cost += w * std::pow(q - z, p);
  }
  const double r = std::clamp(alpha - above_var, 0.0, 1.0);
  return cost + r * std::pow(q - var, p);
}

}  // namespace

double var_condition(const VarQuery& query, double q) {
  const auto law = loss_law(query);
  return condition(law, query.alpha, query.p, nominal_var(law, query.alpha), q);
}

VarResult wc_var(const VarQuery& query) {
  const auto law = loss_law(query);
  require(query.tolerance > 0.0, "tolerance must be positive");
  VarResult out;
  out.nominal_var = nominal_var(law, query.alpha);
  out.target = std::pow(query.theta, query.p);
  const auto f = [&](double q) { return condition(law, query.alpha, query.p, out.nominal_var, q); };
  double lo = out.nominal_var;
  if (out.target <= 0.0) {
    out.var_wc = lo;
    return out;
  }
  double step = std::max(1.0, law.gaussian ? law.sd : 0.0);
  double hi = lo + step;
  for (int k = 0; f(hi) < out.target; ++k) {
    if (k >= 200) fail(ErrorCode::kNumerical, "worst-case VaR bracket did not close");
    step *= 2.0;
    hi = lo + step;
  }
  while (hi - lo > query.tolerance * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= out.target ? hi : lo) = mid;
    if (++out.iterations > 400) break;
  }
  out.var_wc = hi;
  out.certificate = f(hi);
  return out;
}

}  // namespace drso
