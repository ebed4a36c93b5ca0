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
#include <random>

#include "drso/applications.hpp"
#include "drso/error.hpp"
#include "drso/phi.hpp"

namespace drso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Right end of the conjugate's domain (phi* is +inf beyond it).
double domain_end(PhiKind kind) {
  switch (kind) {
    case PhiKind::kBurg: return 0.0;
    case PhiKind::kChi2:
    case PhiKind::kHellinger:
    case PhiKind::kTv: return 1.0;
    default: return kInf;
  }
}

}  // namespace

double phi_conjugate(PhiKind kind, double s) {
  switch (kind) {
    case PhiKind::kKl: return std::exp(s - 1.0);
    case PhiKind::kBurg: return s < 0.0 ? -1.0 - std::log(-s) : kInf;
    case PhiKind::kChi2: return s <= 1.0 ? 2.0 - 2.0 * std::sqrt(1.0 - s) : kInf;
    case PhiKind::kModifiedChi2: return s >= -2.0 ? s + 0.25 * s * s : -1.0;
    case PhiKind::kHellinger: return s < 1.0 ? s / (1.0 - s) : kInf;
    case PhiKind::kTv: return s <= -1.0 ? -1.0 : (s <= 1.0 ? s : kInf);
  }
  return kInf;
}

double phi_conjugate_derivative(PhiKind kind, double s) {
  switch (kind) {
    case PhiKind::kKl: return std::exp(s - 1.0);
    case PhiKind::kBurg: return s < 0.0 ? -1.0 / s : kInf;
    case PhiKind::kChi2: return s < 1.0 ? 1.0 / std::sqrt(1.0 - s) : kInf;
    case PhiKind::kModifiedChi2: return std::max(0.0, 1.0 + 0.5 * s);
    case PhiKind::kHellinger: return s < 1.0 ? 1.0 / ((1.0 - s) * (1.0 - s)) : kInf;
    case PhiKind::kTv: return s < -1.0 ? 0.0 : (s == -1.0 ? 0.5 : (s < 1.0 ? 1.0 : kInf));
  }
  return kInf;
}

namespace {

struct Setup {
  std::vector<double> q, psi;
  std::vector<std::size_t> support;
  std::optional<std::size_t> jm;
  double r = 0.0;
};

// p on the support for multipliers (lambda, beta); returns the total mass.
double fill(const Setup& S, PhiKind kind, double lambda, double beta, std::vector<double>& p) {
  double total = 0.0;
  for (std::size_t j : S.support) {
    p[j] = S.q[j] * phi_conjugate_derivative(kind, (S.psi[j] - beta) / lambda);
    total += p[j];
  }
  return total;
}

// Worst case for fixed lambda > 0, including the popping branch.
std::vector<double> primal_at(const Setup& S, PhiKind kind, double lambda, double& beta) {
  const std::size_t n = S.q.size();
  std::vector<double> p(n, 0.0);
  double smax = -kInf, smin = kInf;
  for (std::size_t j : S.support) {
    smax = std::max(smax, S.psi[j]);
    smin = std::min(smin, S.psi[j]);
  }
  if (kind == PhiKind::kKl) {
    double z = 0.0;
    for (std::size_t j : S.support) z += S.q[j] * std::exp((S.psi[j] - smax) / lambda);
    for (std::size_t j : S.support) p[j] = S.q[j] * std::exp((S.psi[j] - smax) / lambda) / z;
    beta = smax + lambda * std::log(z) - lambda;
    return p;
  }
  // total(beta) is decreasing; total(hi) <= 1 because every argument is <= -1.
  const double end = domain_end(kind);
  double lo = std::isinf(end) ? smin : smax - lambda * end;
  double hi = smax + lambda;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)}); ++it) {
    const double mid = 0.5 * (lo + hi);
    (fill(S, kind, lambda, mid, p) > 1.0 ? lo : hi) = mid;
  }
  beta = hi;
  if (S.jm && std::isfinite(S.r)) {
    const double pop = S.psi[*S.jm] - lambda * S.r;
    if (pop > beta) {
      beta = pop;
      const double total = fill(S, kind, lambda, beta, p);
      p[*S.jm] = std::max(0.0, 1.0 - total);
      return p;
    }
  }
  const double total = fill(S, kind, lambda, beta, p);
  for (double& x : p) x /= total;  // remove the bisection residual
  return p;
}

PhiWorstCase tv_worst_case(const Setup& S, double theta) {
  const std::size_t n = S.q.size();
  std::size_t top = S.support.front();
  for (std::size_t j : S.support)
    if (S.psi[j] > S.psi[top]) top = j;
  if (S.jm && S.psi[*S.jm] > S.psi[top]) top = *S.jm;
  PhiWorstCase out;
  out.p_star = S.q;
  std::vector<std::size_t> order;
  for (std::size_t j : S.support)
    if (j != top) order.push_back(j);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return S.psi[a] < S.psi[b]; });
  double left = 0.5 * theta, moved = 0.0, cut = S.psi[top];
  for (std::size_t j : order) {
    if (left <= 0.0) break;
    const double m = std::min(left, S.q[j]);
    out.p_star[j] -= m;
    left -= m;
    moved += m;
    cut = S.psi[j];
  }
  out.p_star[top] += moved;
  out.lambda = left > 0.0 ? 0.0 : 0.5 * (S.psi[top] - cut);
  out.beta = S.psi[top] - out.lambda;
  if (S.jm && top == *S.jm && moved > 0.0) {
    out.popped = top;
    out.popped_mass = moved;
  }
  (void)n;
  return out;
}

}  // namespace

PhiWorstCase phi_worst_case(std::span<const double> q, std::span<const double> psi, double theta, PhiKind kind) {
  require(!q.empty() && q.size() == psi.size(), "q and psi must have the same nonzero length");
  require(theta >= 0.0 && std::isfinite(theta), "theta must be nonnegative");
  double sum = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    require(q[j] >= 0.0 && std::isfinite(psi[j]), "q must be nonnegative and psi finite");
    sum += q[j];
  }
  require(std::abs(sum - 1.0) <= 1e-9, "q must sum to 1");

  Setup S;
  S.q.assign(q.begin(), q.end());
  S.psi.assign(psi.begin(), psi.end());
  S.r = phi_recession(kind);
  PhiWorstCase out;
  {
    std::vector<double> sorted(S.psi);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      double scale = 1.0;
      for (double v : S.psi) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < S.psi.size(); ++j) S.psi[j] += 1e-12 * double(j) * scale;
      out.perturbed = true;
    }
  }
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] > 0.0) {
      S.support.push_back(j);
    } else if (!S.jm || S.psi[j] > S.psi[*S.jm]) {
      S.jm = j;
    }
  }

  auto finish = [&](PhiWorstCase r) {
    r.perturbed = out.perturbed;
    r.divergence = phi_divergence(r.p_star, q, kind);
    r.value = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) r.value += r.p_star[j] * psi[j];
    if (!r.popped && S.jm && r.p_star[*S.jm] > 0.0) {
      r.popped = S.jm;
      r.popped_mass = r.p_star[*S.jm];
    }
    return r;
  };

  if (theta == 0.0) {
    out.p_star = S.q;
    return finish(out);
  }
  if (kind == PhiKind::kTv) return finish(tv_worst_case(S, theta));

  double hi_psi = -kInf, lo_psi = kInf;
  for (std::size_t j : S.support) {
    hi_psi = std::max(hi_psi, S.psi[j]);
    lo_psi = std::min(lo_psi, S.psi[j]);
  }
  if (S.jm && std::isfinite(S.r)) hi_psi = std::max(hi_psi, S.psi[*S.jm]);
  const double spread = hi_psi - lo_psi;
  if (!(spread > 0.0)) {
    out.p_star = S.q;
    return finish(out);
  }
  auto at = [&](double lambda, double& beta) {
    auto p = primal_at(S, kind, lambda, beta);
    return std::make_pair(p, phi_divergence(p, q, kind));
  };
  double beta = 0.0;
  double lo = 1e-12 * spread;
  auto [p_lo, d_lo] = at(lo, beta);
  if (d_lo <= theta) {  // the ball holds the concentrated limit: lambda* = 0
    out.p_star = p_lo;
    out.lambda = 0.0;
    out.beta = beta;
    return finish(out);
  }
  double hi = spread;
  for (int k = 0;; ++k) {
    if (at(hi, beta).second <= theta) break;
    if (k > 200) fail(ErrorCode::kNumerical, "phi worst case: lambda bracket did not close");
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi / lo - 1.0 > 1e-15; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double d = at(mid, beta).second;
    (d > theta ? lo : hi) = mid;
    if (std::abs(d - theta) <= 1e-13 * std::max(1.0, theta)) {
      lo = hi = mid;
      break;
    }
  }
  auto [p, d] = at(hi, beta);
  out.p_star = std::move(p);
  out.lambda = hi;
  out.beta = beta;
  return finish(out);
}

// ------------------------------------------------------------ calibration

double concentration_log_bound(double theta, double delta, double B, double lambda, std::size_t n) {
  require(delta > 0.0 && delta < theta, "delta must lie in (0, theta)");
  const double cover = B / delta;
  return cover * std::max(0.0, std::log(8.0 * std::exp(1.0) * B / delta)) -
         lambda / 8.0 * double(n) * (theta - delta) * (theta - delta);
}

std::pair<double, double> best_delta(double theta, double B, double lambda, std::size_t n, std::size_t grid) {
  require(theta > 0.0 && grid >= 2, "best_delta needs theta > 0 and a grid");
  auto f = [&](double d) { return concentration_log_bound(theta, d, B, lambda, n); };
  std::size_t arg = 1;
  double best = kInf;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double v = f(theta * double(k) / double(grid + 1));
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  // Golden-section refinement between the neighbouring grid points.
  double a = theta * double(arg - 1) / double(grid + 1), b = theta * double(arg + 1) / double(grid + 1);
  a = std::max(a, theta * 1e-9);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && b - a > 1e-14 * theta; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double xr = f1 < f2 ? x1 : x2, fr = std::min(f1, f2);
  if (fr < best) return {fr, xr};
  return {best, theta * double(arg) / double(grid + 1)};
}

double talagrand_lambda(std::span<const double> samples) {
  require(!samples.empty(), "calibration needs samples");
  std::vector<double> pts(samples.begin(), samples.end());
  for (double x : pts) require(std::isfinite(x), "samples must be finite");
  std::vector<double> base(pts);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const double range = base.back() - base.front();
  if (!(range > 0.0)) fail(ErrorCode::kInvalidArgument, "samples are all equal; the Talagrand constant is unbounded");
  const double n = double(pts.size());
  std::vector<double> d2(pts.size());
  auto F = [&](double alpha) {  // (1/alpha)(1 + log mean exp(alpha d^2)) for the current d2
    double m = 0.0;
    for (double v : d2) m = std::max(m, alpha * v);
    double s = 0.0;
    for (double v : d2) s += std::exp(alpha * v - m);
    return (1.0 + m + std::log(s / n)) / alpha;
  };
  const double scale = range * range;
  double best = kInf;
  for (double z0 : base) {
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = (pts[i] - z0) * (pts[i] - z0);
    // log grid over alpha, then golden refinement in log alpha
    const int G = 200;
    double la = std::log(1e-6 / scale), lb = std::log(1e3 / scale);
    int arg = 0;
    double bv = kInf;
    for (int k = 0; k <= G; ++k) {
      const double v = F(std::exp(la + (lb - la) * k / G));
      if (v < bv) {
        bv = v;
        arg = k;
      }
    }
    double a = la + (lb - la) * std::max(0, arg - 1) / G, b = la + (lb - la) * std::min(G, arg + 1) / G;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double x1 = b - g * (b - a), x2 = a + g * (b - a);
      (F(std::exp(x1)) < F(std::exp(x2)) ? b : a) = F(std::exp(x1)) < F(std::exp(x2)) ? x2 : x1;
    }
    best = std::min({best, bv, F(std::exp(0.5 * (a + b)))});
  }
  return 1.0 / best;
}

RadiusCalibration calibrate_radius(std::span<const double> samples, double B, double target) {
  require(B > 0.0, "support bound B must be positive");
  require(target > 0.0 && target < 1.0, "target must lie in (0, 1)");
  for (double x : samples) require(x >= 0.0 && x <= B, "samples must lie in [0, B]");
  RadiusCalibration out;
  out.lambda = talagrand_lambda(samples);
  const std::size_t n = samples.size();
  const double lt = std::log(target);
  auto bound = [&](double th) { return best_delta(th, B, out.lambda, n); };
  if (bound(B).first > lt) fail(ErrorCode::kInfeasible, "target confidence is unreachable with theta <= B");
  double lo = 1e-9 * B, hi = B;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * B; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = bound(mid).first;
    (v > lt ? lo : hi) = mid;
    if (std::abs(v - lt) <= 1e-10) {
      hi = mid;
      break;
    }
  }
  const auto [lb, delta] = bound(hi);
  out.theta = hi;
  out.delta = delta;
  out.bound = std::exp(lb);
  const double t0 = 0.5 * out.theta, t1 = std::min(B, 2.0 * out.theta);
  for (int k = 0; k <= 40; ++k) {
    const double th = t0 + (t1 - t0) * k / 40.0;
    out.curve.push_back({th, std::exp(bound(th).first)});
  }
  return out;
}

// ------------------------------------------------------------ comparison

std::vector<double> demand_samples(const std::string& shape, std::size_t B, std::size_t n, std::uint64_t seed) {
  require(B >= 1 && n >= 1, "demand sampling needs B >= 1 and n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(n);
  if (shape == "binomial") {
    std::binomial_distribution<int> d(static_cast<int>(B), 0.5);
    for (std::size_t i = 0; i < n; ++i) out.push_back(d(rng));
  } else if (shape == "geometric") {
    std::geometric_distribution<int> d(0.1);
    while (out.size() < n) {
      const int k = d(rng);
      if (static_cast<std::size_t>(k) <= B) out.push_back(k);  // truncation by rejection
    }
  } else {
    fail(ErrorCode::kInvalidArgument, "demand shape must be binomial or geometric");
  }
  return out;
}

PhiCompareResult phi_compare(const PhiCompareOptions& o) {
  const auto samples = demand_samples(o.shape, o.B, o.n, o.seed);
  PhiCompareResult out;
  out.wasserstein_theta =
      o.wasserstein_theta ? *o.wasserstein_theta : calibrate_radius(samples, double(o.B), 0.05).theta;
  const auto inst = newsvendor_from_samples(samples, o.B, o.h, o.b, out.wasserstein_theta, 1.0);
  const auto w = newsvendor_solve(inst);
  out.x_wasserstein = w.x_star;
  out.v_wasserstein = w.value;
  std::vector<double> pw(inst.q.size(), 0.0);
  for (const auto& a : w.worst_case.atoms) pw[a.destination] += a.mass;

  auto phi_newsvendor = [&](PhiKind kind, std::size_t& x_best, double& v_best) {
    PhiWorstCase best;
    v_best = kInf;
    for (std::size_t x = 0; x <= o.B; ++x) {
      auto r = phi_worst_case(inst.q, newsvendor_losses(inst, x), o.phi_theta, kind);
      if (r.value < v_best) {
        v_best = r.value;
        x_best = x;
        best = std::move(r);
      }
    }
    return best;
  };
  const auto burg = phi_newsvendor(PhiKind::kBurg, out.x_burg, out.v_burg);
  const auto kl = phi_newsvendor(PhiKind::kKl, out.x_kl, out.v_kl);
  out.kl_absolutely_continuous = true;
  std::size_t off_support = 0;
  for (std::size_t j = 0; j < inst.q.size(); ++j) {
    out.rows.push_back({j, inst.q[j], pw[j], burg.p_star[j], kl.p_star[j]});
    if (inst.q[j] == 0.0 && kl.p_star[j] > 0.0) out.kl_absolutely_continuous = false;
    if (inst.q[j] == 0.0 && burg.p_star[j] > 0.0) {
      ++off_support;
      if (!burg.popped || j != *burg.popped) ++off_support;  // mass away from j_M
    }
  }
  out.burg_single_pop = off_support <= 1;
  out.burg_pop = burg.popped;
  return out;
}

}  // namespace drso
