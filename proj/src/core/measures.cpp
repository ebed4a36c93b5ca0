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

#include "drso/error.hpp"
#include "drso/lp.hpp"
#include "drso/measures.hpp"

namespace drso {
namespace {

bool same_space(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return a.space_ptr() == b.space_ptr();
}

}  // namespace

std::vector<double> atom_cost_matrix(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                     const GroundMetric& metric) {
  require(mu.dimension() == nu.dimension(), "distributions have different dimensions");
  metric.check_compatible(mu.space());
  metric.check_compatible(nu.space());
  const bool shared = same_space(mu, nu);
  require(shared || metric.kind() != MetricKind::kExplicitMatrix,
          "explicit-matrix metric needs both distributions on one point space");
  std::vector<double> c(mu.size() * nu.size());
  const auto ma = mu.atoms();
  const auto na = nu.atoms();
  for (std::size_t i = 0; i < ma.size(); ++i) {
    for (std::size_t j = 0; j < na.size(); ++j) {
      const double d = shared ? metric.distance(mu.space(), ma[i].index, na[j].index)
                              : metric.distance(mu.space().point(ma[i].index), nu.space().point(na[j].index));
      c[i * na.size() + j] = metric.to_cost(d);
    }
  }
  return c;
}

WassersteinResult wasserstein_distance_lp(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                          const GroundMetric& metric) {
  const auto cost = atom_cost_matrix(mu, nu, metric);
  std::vector<double> a, b;
  for (const auto& x : mu.atoms()) a.push_back(x.weight);
  for (const auto& x : nu.atoms()) b.push_back(x.weight);
  const auto t = lp::solve_transport(a, b, cost);
  WassersteinResult r;
  for (const auto& c : t.basis)
    if (c.flow > 0.0) r.plan.entries.push_back({c.row, c.col, c.flow});
  r.plan.total_cost = std::max(0.0, t.cost);
  r.value = std::pow(r.plan.total_cost, 1.0 / metric.order());
  return r;
}

namespace {

struct QuantileCoupling {
  std::vector<TransportEntry> entries;
  double cost = 0.0;
};

QuantileCoupling quantile_coupling(const DiscreteDistribution& mu, const DiscreteDistribution& nu, double p) {
  require(mu.dimension() == 1 && nu.dimension() == 1, "quantile formula needs one-dimensional supports");
  auto order = [](const DiscreteDistribution& d) {
    std::vector<std::size_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return d.space().point(d.atoms()[x].index)[0] < d.space().point(d.atoms()[y].index)[0];
    });
    return idx;
  };
  const auto oa = order(mu), ob = order(nu);
  QuantileCoupling out;
  std::size_t i = 0, j = 0;
  double ra = mu.atoms()[oa[0]].weight, rb = nu.atoms()[ob[0]].weight;
  while (i < oa.size() && j < ob.size()) {
    const double m = std::min(ra, rb);
    const double x = mu.space().point(mu.atoms()[oa[i]].index)[0];
    const double y = nu.space().point(nu.atoms()[ob[j]].index)[0];
    if (m > 0.0) {
      out.entries.push_back({oa[i], ob[j], m});
      out.cost += m * std::pow(std::abs(x - y), p);
    }
    ra -= m;
    rb -= m;
    // Advance whichever side ran out; the last atoms absorb rounding residue.
    const bool adv_a = ra <= rb && i + 1 < oa.size();
    const bool adv_b = rb <= ra && j + 1 < ob.size();
    if (!adv_a && !adv_b) break;
    if (adv_a) ra = mu.atoms()[oa[++i]].weight + (adv_b ? 0.0 : ra);
    if (adv_b) rb = nu.atoms()[ob[++j]].weight + (adv_a ? 0.0 : rb);
  }
  return out;
}

}  // namespace

double wasserstein_1d_fast(const DiscreteDistribution& mu, const DiscreteDistribution& nu, double p) {
  require(p >= 1.0, "order p must be at least 1");
  return std::pow(quantile_coupling(mu, nu, p).cost, 1.0 / p);
}

WassersteinResult wasserstein_distance(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                                       const GroundMetric& metric) {
  if (metric.kind() == MetricKind::kAbsolute1d) {
    require(mu.dimension() == nu.dimension(), "distributions have different dimensions");
    auto q = quantile_coupling(mu, nu, metric.order());
    WassersteinResult r;
    r.plan.entries = std::move(q.entries);
    r.plan.total_cost = q.cost;
    r.value = std::pow(q.cost, 1.0 / metric.order());
    return r;
  }
  return wasserstein_distance_lp(mu, nu, metric);
}

std::string_view to_string(PhiKind kind) {
  switch (kind) {
    case PhiKind::kKl: return "kl";
    case PhiKind::kBurg: return "burg";
    case PhiKind::kChi2: return "chi2";
    case PhiKind::kModifiedChi2: return "modified-chi2";
    case PhiKind::kHellinger: return "hellinger";
    case PhiKind::kTv: return "tv";
  }
  return "?";
}

PhiKind parse_phi_kind(std::string_view name) {
  for (auto k : {PhiKind::kKl, PhiKind::kBurg, PhiKind::kChi2, PhiKind::kModifiedChi2, PhiKind::kHellinger,
                 PhiKind::kTv})
    if (name == to_string(k)) return k;
  if (name == "modified_chi2") return PhiKind::kModifiedChi2;
  fail(ErrorCode::kInvalidArgument, "unknown phi-divergence kind '" + std::string(name) + "'");
}

double phi_value(PhiKind kind, double t) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (t < 0.0) return inf;
  switch (kind) {
    case PhiKind::kKl: return t == 0.0 ? 0.0 : t * std::log(t);
    case PhiKind::kBurg: return t == 0.0 ? inf : -std::log(t);
    case PhiKind::kChi2: return t == 0.0 ? inf : (t - 1.0) * (t - 1.0) / t;
    case PhiKind::kModifiedChi2: return (t - 1.0) * (t - 1.0);
    case PhiKind::kHellinger: return (std::sqrt(t) - 1.0) * (std::sqrt(t) - 1.0);
    case PhiKind::kTv: return std::abs(t - 1.0);
  }
  return inf;
}

double phi_recession(PhiKind kind) {
  switch (kind) {
    case PhiKind::kKl:
    case PhiKind::kModifiedChi2: return std::numeric_limits<double>::infinity();
    case PhiKind::kBurg: return 0.0;
    case PhiKind::kChi2:
    case PhiKind::kHellinger:
    case PhiKind::kTv: return 1.0;
  }
  return 0.0;
}

double phi_divergence(std::span<const double> p, std::span<const double> q, PhiKind kind) {
  require(p.size() == q.size(), "phi-divergence needs vectors of equal length");
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    require(p[j] >= 0.0 && q[j] >= 0.0, "phi-divergence needs nonnegative entries");
    if (q[j] == 0.0) {
      if (p[j] > 0.0) s += p[j] * phi_recession(kind);
      continue;
    }
    s += q[j] * phi_value(kind, p[j] / q[j]);
  }
  return s;
}

double expectation_gap_bound(double lipschitz, double offset, double theta, double p) {
  require(lipschitz >= 0.0 && offset >= 0.0 && theta >= 0.0, "bound arguments must be nonnegative");
  require(p >= 1.0, "order p must be at least 1");
  return lipschitz * std::pow(theta, p) + offset;
}

}  // namespace drso
