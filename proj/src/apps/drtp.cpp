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

// Continuum transportation with square-root gain on a cell grid.
//
// The dual is written in (lambda, u) with u_i = lambda v_i and no
// normalization on u, which absorbs the multiplier of the unit-mass
// constraint:
//   D(lambda, u) = lambda theta^p - sum_i w_i u_i + sum_c a_c / (4 g_c),
//   g_c = min_i (lambda d_ci - u_i) > 0.
// D is jointly convex. It is minimized by damped Newton on a soft-min
// smoothing of g_c whose temperature is driven to zero; the smoothed
// stationarity conditions are exactly primal feasibility of
// f_c = 1 / (4 g_c^2) with the soft assignment as transport plan.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "drso/applications.hpp"
#include "drso/error.hpp"
#include "drso/lp.hpp"

namespace drso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ContinuumInstance finish_instance(std::vector<std::vector<double>> centers, double area, DiscreteDistribution nominal,
                                  double theta, double p) {
  require(!centers.empty(), "continuum grid has no cells");
  require(nominal.dimension() == 2, "continuum nominal must live in the plane");
  require(theta > 0.0 && p >= 1.0, "continuum instance needs theta > 0 and p >= 1");
  ContinuumInstance in{std::make_shared<const PointSpace>(std::move(centers)), {}, std::move(nominal), theta, p};
  in.areas.assign(in.grid->size(), area);
  return in;
}

struct Problem {
  std::size_t C = 0, N = 0;
  std::vector<double> a, w, d;  // d is C x N
  double tp = 0.0;
};

// Per-cell soft-min and its derivatives with respect to z = (lambda, u).
struct Eval {
  double value = kInf;
  std::vector<double> grad, hess;  // (N+1), (N+1)^2
  std::vector<double> g;           // smoothed g per cell
};

Eval evaluate(const Problem& P, std::span<const double> z, double tau, bool derivatives) {
  const std::size_t n = P.N + 1;
  Eval ev;
  if (!(z[0] > 0.0)) return ev;
  double val = z[0] * P.tp;
  for (std::size_t i = 0; i < P.N; ++i) val -= P.w[i] * z[1 + i];
  if (derivatives) {
    ev.grad.assign(n, 0.0);
    ev.hess.assign(n * n, 0.0);
    ev.grad[0] = P.tp;
    for (std::size_t i = 0; i < P.N; ++i) ev.grad[1 + i] = -P.w[i];
  }
  ev.g.resize(P.C);
  std::vector<double> e(P.N), s(P.N), m(n);
  for (std::size_t c = 0; c < P.C; ++c) {
    const double* dc = &P.d[c * P.N];
    double emin = kInf;
    for (std::size_t i = 0; i < P.N; ++i) {
      e[i] = z[0] * dc[i] - z[1 + i];
      emin = std::min(emin, e[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < P.N; ++i) sum += (s[i] = std::exp(-(e[i] - emin) / tau));
    const double g = emin - tau * std::log(sum);
    if (!(g > 0.0)) return Eval{};
    ev.g[c] = g;
    val += P.a[c] / (4.0 * g);
    if (!derivatives) continue;
    for (std::size_t i = 0; i < P.N; ++i) s[i] /= sum;
    // grad g = sum_i s_i (d_ci, -e_i)
    m.assign(n, 0.0);
    for (std::size_t i = 0; i < P.N; ++i) {
      m[0] += s[i] * dc[i];
      m[1 + i] = -s[i];
    }
    const double ac = P.a[c];
    const double k1 = ac / (2.0 * g * g * g);   // outer product weight
    const double k2 = ac / (4.0 * tau * g * g); // covariance weight
    for (std::size_t r = 0; r < n; ++r) ev.grad[r] -= ac / (4.0 * g * g) * m[r];
    // Covariance of the vectors (d_ci, -e_i) under s: E[x x^T] - m m^T.
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q) ev.hess[r * n + q] += (k1 - k2) * m[r] * m[q];
    for (std::size_t i = 0; i < P.N; ++i) {
      ev.hess[0] += k2 * s[i] * dc[i] * dc[i];
      ev.hess[1 + i] -= k2 * s[i] * dc[i];
      ev.hess[(1 + i) * n] -= k2 * s[i] * dc[i];
      ev.hess[(1 + i) * n + 1 + i] += k2 * s[i];
    }
  }
  ev.value = val;
  return ev;
}

// Solves H x = b for a small symmetric system with partial pivoting; returns
// false when singular.
bool solve_small(std::vector<double> H, std::vector<double> b, std::size_t n, std::vector<double>& x) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(H[r * n + k]) > std::abs(H[piv * n + k])) piv = r;
    if (!(std::abs(H[piv * n + k]) > 0.0)) return false;
    if (piv != k) {
      for (std::size_t q = 0; q < n; ++q) std::swap(H[k * n + q], H[piv * n + q]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = H[r * n + k] / H[k * n + k];
      for (std::size_t q = k; q < n; ++q) H[r * n + q] -= f * H[k * n + q];
      b[r] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t q = k + 1; q < n; ++q) s -= H[k * n + q] * x[q];
    x[k] = s / H[k * n + k];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

double hard_dual(const Problem& P, std::span<const double> z) {
  double val = z[0] * P.tp;
  for (std::size_t i = 0; i < P.N; ++i) val -= P.w[i] * z[1 + i];
  for (std::size_t c = 0; c < P.C; ++c) {
    double g = kInf;
    for (std::size_t i = 0; i < P.N; ++i) g = std::min(g, z[0] * P.d[c * P.N + i] - z[1 + i]);
    if (!(g > 0.0)) return kInf;
    val += P.a[c] / (4.0 * g);
  }
  return val;
}

double exact_transport(const Problem& P, std::span<const double> mass) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  std::vector<double> supply(mass.begin(), mass.end());
  for (double& s : supply) s /= total;
  return lp::solve_transport(supply, P.w, P.d).cost;
}

}  // namespace

ContinuumInstance square_grid_instance(double lo, double hi, std::size_t n, DiscreteDistribution nominal,
                                       double theta, double p) {
  require(hi > lo && n >= 1, "square grid needs hi > lo and n >= 1");
  const double h = (hi - lo) / double(n);
  std::vector<std::vector<double>> centers;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) centers.push_back({lo + (double(c) + 0.5) * h, lo + (double(r) + 0.5) * h});
  return finish_instance(std::move(centers), h * h, std::move(nominal), theta, p);
}

ContinuumInstance disc_grid_instance(std::span<const double> center, double radius, std::size_t n,
                                     DiscreteDistribution nominal, double theta, double p) {
  require(center.size() == 2 && radius > 0.0 && n >= 1, "disc grid needs a planar center, radius > 0 and n >= 1");
  const double h = 2.0 * radius / double(n);
  std::vector<std::vector<double>> centers;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double x = center[0] - radius + (double(c) + 0.5) * h;
      const double y = center[1] - radius + (double(r) + 0.5) * h;
      if (std::hypot(x - center[0], y - center[1]) <= radius) centers.push_back({x, y});
    }
  return finish_instance(std::move(centers), h * h, std::move(nominal), theta, p);
}

DrtpResult drtp_solve(const ContinuumInstance& in, const DrtpOptions& opt) {
  require(in.grid != nullptr && in.grid->dimension() == 2, "continuum grid must be planar");
  require(in.areas.size() == in.grid->size(), "one area per grid cell is required");
  require(in.nominal.dimension() == 2, "continuum nominal must live in the plane");
  require(in.theta > 0.0 && in.p >= 1.0, "continuum instance needs theta > 0 and p >= 1");
  Problem P;
  P.C = in.grid->size();
  P.N = in.nominal.size();
  P.a = in.areas;
  P.tp = std::pow(in.theta, in.p);
  const auto metric = GroundMetric::euclidean(in.p);
  for (const auto& at : in.nominal.atoms()) P.w.push_back(at.weight);
  P.d.resize(P.C * P.N);
  double area = 0.0;
  for (std::size_t c = 0; c < P.C; ++c) {
    require(P.a[c] > 0.0 && std::isfinite(P.a[c]), "cell areas must be positive");
    area += P.a[c];
    for (std::size_t i = 0; i < P.N; ++i)
      P.d[c * P.N + i] = metric.cost(in.grid->point(c), in.nominal.space().point(in.nominal.atoms()[i].index));
  }
  {
    std::vector<double> uniform(P.a);
    if (exact_transport(P, uniform) <= P.tp)
      fail(ErrorCode::kInfeasible, "theta is too large for the domain: the uniform density is already within the ball");
  }

  const std::size_t n = P.N + 1;
  // Start from v = 0 with a shift keeping every g_c comfortably positive.
  std::vector<double> dmin(P.C, kInf);
  double kappa = 0.0;
  for (std::size_t c = 0; c < P.C; ++c) {
    for (std::size_t i = 0; i < P.N; ++i) dmin[c] = std::min(dmin[c], P.d[c * P.N + i]);
    kappa += P.a[c] * dmin[c] / area;
  }
  kappa = std::max(kappa, 1e-12);
  double mass0 = 0.0;
  for (std::size_t c = 0; c < P.C; ++c) mass0 += P.a[c] / (4.0 * (dmin[c] + kappa) * (dmin[c] + kappa));
  std::vector<double> z(n, 0.0);
  z[0] = std::sqrt(mass0);
  for (std::size_t i = 0; i < P.N; ++i) z[1 + i] = -z[0] * kappa;

  // Reduced coordinates: with fixed potentials all u_i move together.
  const std::size_t m = opt.fix_potentials ? 2 : n;
  auto lift = [&](std::span<const double> y) {
    if (!opt.fix_potentials) return std::vector<double>(y.begin(), y.end());
    std::vector<double> out(n, y[1]);
    out[0] = y[0];
    return out;
  };
  auto reduce = [&](const Eval& ev, std::vector<double>& g, std::vector<double>& H) {
    if (!opt.fix_potentials) {
      g = ev.grad;
      H = ev.hess;
      return;
    }
    g.assign(2, 0.0);
    H.assign(4, 0.0);
    g[0] = ev.grad[0];
    for (std::size_t i = 1; i < n; ++i) g[1] += ev.grad[i];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q) H[(r ? 1 : 0) * 2 + (q ? 1 : 0)] += ev.hess[r * n + q];
  };
  std::vector<double> y = opt.fix_potentials ? std::vector<double>{z[0], z[1]} : z;

  DrtpResult out;
  double tau = 0.05 * z[0] * kappa / std::log(double(P.N) + 1.0);
  const double tau_min = 1e-10 * z[0] * kappa;
  for (;;) {
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
      const Eval ev = evaluate(P, lift(y), tau, true);
      if (!std::isfinite(ev.value)) fail(ErrorCode::kNumerical, "drtp iterate left the positivity domain");
      out.objective_trace.push_back(ev.value);
      std::vector<double> g, H, step;
      reduce(ev, g, H);
      std::vector<double> rhs(m);
      for (std::size_t r = 0; r < m; ++r) rhs[r] = -g[r];
      double decrement = 0.0;
      if (solve_small(H, rhs, m, step)) {
        for (std::size_t r = 0; r < m; ++r) decrement -= g[r] * step[r];
      }
      if (!(decrement > 0.0)) {  // fall back to steepest descent
        step = rhs;
        decrement = 0.0;
        for (double v : g) decrement += v * v;
      }
      ++out.iterations;
      // The decrement is about twice the remaining decrease of the smoothed dual.
      if (decrement <= std::max(opt.gradient_tolerance * opt.gradient_tolerance, 1e-14 * std::abs(ev.value))) break;
      double t = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 80; ++bt, t *= 0.5) {
        std::vector<double> cand(y);
        for (std::size_t r = 0; r < m; ++r) cand[r] += t * step[r];
        const double v = evaluate(P, lift(cand), tau, false).value;
        if (std::isfinite(v) && v <= ev.value - 1e-4 * t * decrement) {
          y = std::move(cand);
          moved = true;
          break;
        }
      }
      if (!moved) break;  // at the resolution of double arithmetic
    }
    if (tau <= tau_min) break;
    tau = std::max(tau * 0.1, tau_min);
  }

  z = lift(y);
  const Eval ev = evaluate(P, z, tau, false);
  out.lambda_star = z[0];
  out.value = hard_dual(P, z);
  out.f_star.resize(P.C);
  std::vector<double> mass(P.C);
  for (std::size_t c = 0; c < P.C; ++c) {
    out.f_star[c] = 1.0 / (4.0 * ev.g[c] * ev.g[c]);
    mass[c] = P.a[c] * out.f_star[c];
    out.integral += mass[c];
  }
  for (std::size_t c = 0; c < P.C; ++c) {
    out.primal_value += P.a[c] * std::sqrt(out.f_star[c]);
    std::size_t best = 0;
    for (std::size_t i = 1; i < P.N; ++i)
      if (z[0] * P.d[c * P.N + i] - z[1 + i] < z[0] * P.d[c * P.N + best] - z[1 + best]) best = i;
    out.assignment_cost += mass[c] * P.d[c * P.N + best];
  }
  out.transport_cost = exact_transport(P, mass);
  out.gap = out.value - out.primal_value;
  out.v_star.resize(P.N);
  double shift = 0.0;
  for (std::size_t i = 0; i < P.N; ++i) {
    out.v_star[i] = z[1 + i] / z[0];
    shift += P.w[i] * out.v_star[i];
  }
  for (double& v : out.v_star) v -= shift;
  return out;
}

}  // namespace drso
