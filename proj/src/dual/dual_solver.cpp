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

#include "drso/dual.hpp"
#include "drso/error.hpp"
#include "dual/internal.hpp"

namespace drso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExistTol = 1e-7;

// Upper envelope of the lines Psi_j - lambda c_j over [lo, hi].
struct Envelope {
  std::vector<std::size_t> lines;  // candidate indices, active left to right
  std::vector<double> breaks;      // breaks[k] separates lines[k] and lines[k+1]
};

double crossing(double ca, double pa, double cb, double pb) { return (pa - pb) / (ca - cb); }

Envelope upper_envelope(std::span<const double> psi, std::span<const double> cost, double lo, double hi) {
  std::vector<std::size_t> idx(psi.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Slope -c ascending, i.e. c descending; equal slopes keep the best intercept.
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (cost[a] != cost[b]) return cost[a] > cost[b];
    if (psi[a] != psi[b]) return psi[a] > psi[b];
    return a < b;
  });
  std::vector<std::size_t> st;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t j = idx[k];
    if (!st.empty() && cost[st.back()] == cost[j]) continue;
    while (st.size() >= 2) {
      const std::size_t l1 = st[st.size() - 2], l2 = st.back();
      const double x12 = crossing(cost[l1], psi[l1], cost[l2], psi[l2]);
      const double x13 = crossing(cost[l1], psi[l1], cost[j], psi[j]);
      if (x13 <= x12)
        st.pop_back();
      else
        break;
    }
    st.push_back(j);
  }
  Envelope env;
  std::size_t k = 0;
  while (k + 1 < st.size() && crossing(cost[st[k]], psi[st[k]], cost[st[k + 1]], psi[st[k + 1]]) <= lo) ++k;
  env.lines.push_back(st[k]);
  for (; k + 1 < st.size(); ++k) {
    const double x = crossing(cost[st[k]], psi[st[k]], cost[st[k + 1]], psi[st[k + 1]]);
    if (x >= hi) break;
    env.breaks.push_back(x);
    env.lines.push_back(st[k + 1]);
  }
  return env;
}

struct Bracket {
  double lo;
  double hi;
};

// Active line at lambda; ties prefer the larger cost (left side) or the
// smaller cost (right side).
std::size_t active_line(const DualInstance& inst, std::size_t i, double lambda, bool prefer_far) {
  const std::size_t m = inst.size();
  std::size_t best = 0;
  double bv = -kInf;
  for (std::size_t j = 0; j < m; ++j) {
    const double v = inst.psi[j] - lambda * inst.c(i, j);
    const double c = inst.c(i, j), cb = inst.c(i, best);
    if (v > bv || (v == bv && (prefer_far ? c > cb : c < cb))) {
      bv = v;
      best = j;
    }
  }
  return best;
}

double golden_search(const DualInstance& inst, Bracket br, double width) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = br.lo, b = br.hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = dual_objective(inst, x1), f2 = dual_objective(inst, x2);
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = dual_objective(inst, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = dual_objective(inst, x2);
    }
  }
  // Exact refinement from the lines active at the bracket ends.
  const double tp = inst.ball.theta_p();
  double ia = 0, sa = tp, ib = 0, sb = tp;
  for (std::size_t i = 0; i < inst.atoms(); ++i) {
    const std::size_t ja = active_line(inst, i, a, true), jb = active_line(inst, i, b, false);
    ia += inst.weight(i) * inst.psi[ja];
    sa -= inst.weight(i) * inst.c(i, ja);
    ib += inst.weight(i) * inst.psi[jb];
    sb -= inst.weight(i) * inst.c(i, jb);
  }
  std::vector<double> cands{a, b};
  if (sb > sa) {
    const double x = (ia - ib) / (sb - sa);
    if (x > a - width && x < b + width) cands.push_back(std::clamp(x, br.lo, br.hi));
  }
  double best = cands[0], fb = dual_objective(inst, best);
  for (double x : cands) {
    const double f = dual_objective(inst, x);
    if (f < fb || (f == fb && x > best)) {
      fb = f;
      best = x;
    }
  }
  return best;
}

}  // namespace

double dual_objective(const DualInstance& inst, double lambda) {
  double s = lambda * inst.ball.theta_p();
  const std::size_t m = inst.size();
  for (std::size_t i = 0; i < inst.atoms(); ++i) {
    double best = -kInf;
    for (std::size_t j = 0; j < m; ++j) best = std::max(best, inst.psi[j] - lambda * inst.c(i, j));
    s += inst.weight(i) * best;
  }
  return s;
}

double dual_objective(const WassersteinBall& ball, const Objective& objective,
                      std::shared_ptr<const PointSpace> candidates, double lambda) {
  require(lambda >= 0.0, "lambda must be nonnegative");
  return dual_objective(*make_instance(ball, objective, std::move(candidates)), lambda);
}

namespace detail {

double psi_scale(const DualInstance& inst) {
  double s = 1.0;
  for (double v : inst.psi) s = std::max(s, std::abs(v));
  return s;
}

RegularizedValue regularize_atom(const DualInstance& inst, std::size_t i, double lambda) {
  const std::size_t m = inst.size();
  RegularizedValue r;
  r.lambda = lambda;
  double phi = kInf;
  for (std::size_t j = 0; j < m; ++j) phi = std::min(phi, lambda * inst.c(i, j) - inst.psi[j]);
  r.phi = phi;
  const double tol = 1e-12 * std::max(1.0, std::abs(phi) + psi_scale(inst));
  bool first = true;
  for (std::size_t j = 0; j < m; ++j) {
    if (lambda * inst.c(i, j) - inst.psi[j] > phi + tol) continue;
    r.argmin.push_back(j);
    r.argmin_cost.push_back(inst.c(i, j));
    r.argmin_psi.push_back(inst.psi[j]);
    if (first || inst.c(i, j) < inst.c(i, r.near)) r.near = j;
    if (first || inst.c(i, j) > inst.c(i, r.far)) r.far = j;
    first = false;
  }
  r.d_min = inst.d(i, r.near);
  r.d_max = inst.d(i, r.far);
  return r;
}

}  // namespace detail

RegularizedValue phi_regularize(const Objective& objective, const GroundMetric& metric,
                                const PointSpace& candidates, double lambda, std::span<const double> zeta) {
  require(candidates.size() > 0, "candidate set must be nonempty");
  require(lambda >= 0.0, "lambda must be nonnegative");
  require(zeta.size() == candidates.dimension(), "zeta has the wrong dimension");
  // A one-atom instance on a private copy keeps the same code path as the solver.
  auto space = std::make_shared<const PointSpace>(candidates.to_vectors(), candidates.labels());
  std::shared_ptr<const PointSpace> zspace = space;
  std::size_t zi = 0;
  if (auto k = space->find(zeta)) {
    zi = *k;
  } else {
    zspace = std::make_shared<const PointSpace>(std::vector<std::vector<double>>{{zeta.begin(), zeta.end()}});
  }
  WassersteinBall ball{DiscreteDistribution(zspace, {{zi, 1.0}}), metric, 0.0};
  if (metric.kind() == MetricKind::kExplicitMatrix)
    require(zspace == space, "explicit-matrix metric needs zeta among the candidates");
  std::vector<double> psi = objective.evaluate(candidates);
  auto obj = Objective::table(space, std::move(psi));
  auto inst = make_instance(ball, obj, space);
  return detail::regularize_atom(*inst, 0, lambda);
}

std::string_view to_string(Existence e) {
  switch (e) {
    case Existence::kExists: return "exists";
    case Existence::kVanishingSequence: return "vanishing-sequence";
    case Existence::kUnbounded: return "unbounded";
  }
  return "?";
}

DualSolution solve_dual(std::shared_ptr<const DualInstance> instance, const DualOptions& options) {
  require(instance != nullptr, "dual solve needs an instance");
  const DualInstance& inst = *instance;
  DualSolution sol;
  sol.instance = instance;
  const double tp = inst.ball.theta_p();
  const std::size_t n = inst.atoms(), m = inst.size();

  if (inst.unbounded_growth && !options.kappa) {
    if (inst.ball.theta > 0.0) {
      sol.kappa_hat = kInf;
      sol.lambda_star = kInf;
      sol.v_dual = kInf;
      sol.existence = Existence::kUnbounded;
      sol.method = "unbounded";
      return sol;
    }
  }
  const double kappa = options.kappa ? *options.kappa : inst.declared_growth.value_or(0.0);
  require(kappa >= 0.0 && std::isfinite(kappa), "growth estimate must be finite and nonnegative");
  sol.kappa_hat = kappa;
  const double lo = kappa;

  auto finish = [&](double lambda) {
    sol.lambda_star = lambda;
    sol.v_dual = dual_objective(inst, lambda);
    sol.per_atom.clear();
    double near_cost = 0.0, far_cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.per_atom.push_back(detail::regularize_atom(inst, i, lambda));
      near_cost += inst.weight(i) * inst.c(i, sol.per_atom.back().near);
      far_cost += inst.weight(i) * inst.c(i, sol.per_atom.back().far);
    }
    sol.left_derivative = tp - far_cost;
    sol.right_derivative = tp - near_cost;
    const double tol = 1e-9 * std::max(1.0, tp);
    if (lambda > kappa + kExistTol) {
      sol.existence = Existence::kExists;
    } else if (kappa > 0.0) {
      sol.existence = (near_cost <= tp + tol && tp <= far_cost + tol) ? Existence::kExists
                                                                      : Existence::kVanishingSequence;
    } else {
      double d0 = 0.0;
      for (std::size_t i = 0; i < n; ++i) d0 += inst.weight(i) * inst.c(i, detail::regularize_atom(inst, i, 0.0).near);
      sol.existence = d0 <= tp + tol ? Existence::kExists : Existence::kVanishingSequence;
    }
  };

  if (inst.ball.theta == 0.0) {
    // The ball is {nu}; the smallest lambda at which every atom's own point
    // is a maximizer attains E_nu Psi.
    double lambda = lo;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double c = inst.c(i, j);
        if (c > 0.0) lambda = std::max(lambda, (inst.psi[j] - inst.nominal_psi[i]) / c);
      }
    }
    sol.method = "theta-zero";
    finish(lambda);
    double ev = 0.0;
    for (std::size_t i = 0; i < n; ++i) ev += inst.weight(i) * inst.nominal_psi[i];
    sol.v_dual = ev;
    sol.existence = Existence::kExists;
    return sol;
  }

  double cmin_total = 0.0, pmin = kInf, pmax = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    double cm = kInf;
    for (std::size_t j = 0; j < m; ++j) cm = std::min(cm, inst.c(i, j));
    cmin_total += inst.weight(i) * cm;
  }
  for (double v : inst.psi) {
    pmin = std::min(pmin, v);
    pmax = std::max(pmax, v);
  }
  const double slack = tp - cmin_total;
  if (slack < -1e-12 * std::max(1.0, tp))
    fail(ErrorCode::kInfeasible, "no distribution on the candidate set lies within the ball");
  if (slack <= 1e-15 * std::max(1.0, tp))
    fail(ErrorCode::kNumerical, "dual minimizer is not attained: the ball only touches the candidate set");
  const double hi = lo + (pmax - pmin) / slack + 1.0;
  sol.lambda_max = hi;

  bool use_golden = options.search == LambdaSearch::kGolden;
  std::vector<Envelope> envs;
  if (!use_golden) {
    envs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      envs.push_back(upper_envelope(inst.psi, std::span<const double>(inst.cost).subspan(i * m, m), lo, hi));
      if (options.search == LambdaSearch::kAuto && envs.back().breaks.size() > options.max_breakpoints) {
        use_golden = true;
        break;
      }
    }
  }

  double lambda = lo;
  if (use_golden) {
    sol.method = "golden";
    lambda = golden_search(inst, {lo, hi}, options.golden_width);
  } else {
    sol.method = "breakpoints";
    struct Event {
      double x;
      std::size_t atom;
      std::size_t line;
    };
    std::vector<Event> events;
    double slope = tp;
    double cscale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = envs[i];
      slope -= inst.weight(i) * inst.c(i, e.lines[0]);
      for (std::size_t k = 0; k < e.breaks.size(); ++k) events.push_back({e.breaks[k], i, e.lines[k + 1]});
      for (std::size_t j : e.lines) cscale = std::max(cscale, inst.c(i, j));
    }
    sol.breakpoints = events.size();
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = envs[i].lines[0];
    const double stol = 1e-12 * std::max({1.0, tp, cscale});
    double cur = lo;
    bool stopped = false;
    for (std::size_t k = 0; k < events.size();) {
      if (slope > stol) {
        stopped = true;
        break;
      }
      cur = events[k].x;
      for (; k < events.size() && events[k].x == cur; ++k) {
        const auto& ev = events[k];
        slope += inst.weight(ev.atom) * (inst.c(ev.atom, active[ev.atom]) - inst.c(ev.atom, ev.line));
        active[ev.atom] = ev.line;
      }
    }
    if (!stopped && slope <= stol) cur = hi;
    lambda = cur;
  }
  if (lambda >= hi && dual_objective(inst, hi) < dual_objective(inst, hi - 1e-6 * std::max(1.0, hi)))
    fail(ErrorCode::kNumerical, "dual objective still decreasing at the bracket end; growth estimate too small");
  finish(lambda);
  return sol;
}

DualSolution solve_dual(const WassersteinBall& ball, const Objective& objective,
                        std::shared_ptr<const PointSpace> candidates, const DualOptions& options) {
  return solve_dual(make_instance(ball, objective, std::move(candidates)), options);
}

}  // namespace drso
