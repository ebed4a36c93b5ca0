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

// Acceptance checks. Prints one PASS/FAIL line per criterion; with an
// argument N only criterion N runs. Exit status is nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drso/applications.hpp"
#include "drso/dual.hpp"
#include "drso/error.hpp"
#include "drso/measures.hpp"
#include "drso/phi.hpp"
#include "drso/process.hpp"
#include "oracles/numeric_oracles.hpp"
#include "oracles/random_instances.hpp"

using namespace drso;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects the first failing observation and the worst value of a metric.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && pass_) {
      pass_ = false;
      first_failure_ = what;
    }
  }
  void note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? "; " : "") << s; }
  Verdict verdict() const { return {pass_, pass_ ? notes_.str() : first_failure_ + " | " + notes_.str()}; }

 private:
  bool pass_ = true;
  std::string first_failure_;
  std::ostringstream notes_;
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::shared_ptr<const PointSpace> grid(double lo, double hi, double step) {
  return std::make_shared<const PointSpace>(PointSpace::grid_1d(lo, hi, step));
}

WassersteinBall point_mass_at_zero(const std::shared_ptr<const PointSpace>& space, double theta) {
  return {DiscreteDistribution(space, {{*space->find(std::vector<double>{0.0}), 1.0}}), GroundMetric::absolute_1d(),
          theta};
}

// ----------------------------------------------------------------------------

Verdict strong_duality() {
  Check c;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < 200; ++t) {
    auto fi = testgen::random_finite_instance(rng, 5, 20);
    const auto sol = solve_dual(fi.ball, fi.objective, fi.space);
    const double gap = std::abs(sol.v_dual - primal_oracle(*sol.instance).value);
    worst = std::max(worst, gap);
    c.expect(gap <= 1e-8, "instance " + std::to_string(t) + " gap " + g(gap));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 10.0, "runtime " + g(secs) + " s");
  c.note("max gap " + g(worst) + ", " + g(secs) + " s");
  return c.verdict();
}

Verdict example_a_negative() {
  Check c;
  auto gr = grid(0, 10, 1e-3);
  const auto sol = solve_dual(point_mass_at_zero(gr, 0.5), Objective::hinge(-1.0), gr);
  c.expect(std::abs(sol.v_dual - 1.5) <= 1e-6, "value " + g(sol.v_dual));
  c.expect(sol.existence == Existence::kExists, "existence " + std::string(to_string(sol.existence)));
  const auto wc = construct_worst_case(sol);
  double mass_at_half = 0.0;
  for (const auto& a : wc.atoms)
    if (std::abs(gr->point(a.destination)[0] - 0.5) <= 1e-12) mass_at_half += a.mass;
  c.expect(std::abs(mass_at_half - 1.0) <= 1e-12, "worst case is not a point mass at 0.5");
  c.note("value " + g(sol.v_dual) + ", lambda " + g(sol.lambda_star));
  return c.verdict();
}

Verdict example_a_positive() {
  Check c;
  const double theta = 0.5, a = 1.0;
  for (double R : {10.0, 100.0, 1000.0}) {
    auto gr = grid(0, R, R / 1000.0);
    const auto sol = solve_dual(point_mass_at_zero(gr, theta), Objective::hinge(a), gr);
    c.expect(sol.existence == Existence::kVanishingSequence, "R " + g(R) + " existence");
    c.expect(std::abs(sol.v_dual - theta) <= 1e-6, "R " + g(R) + " dual " + g(sol.v_dual));
    const auto seq = epsilon_optimal_sequence(sol, 1.0);
    c.expect(seq.achieved >= theta * (1.0 - a / R) - 1e-12, "R " + g(R) + " achieved " + g(seq.achieved));
    c.note("R " + g(R) + ": " + g(seq.achieved));
  }
  return c.verdict();
}

Verdict example_b() {
  Check c;
  auto gr = grid(-5, 5, 1e-3);
  const auto sol = solve_dual(point_mass_at_zero(gr, 0.5), Objective::bump(), gr);
  c.expect(sol.lambda_star == 0.0, "lambda " + g(sol.lambda_star));
  c.expect(std::abs(sol.v_dual - 1.0) <= 1e-12, "value " + g(sol.v_dual));
  const auto wc = construct_worst_case(sol);
  c.expect(wc.atoms.size() == 1 && gr->point(wc.atoms[0].destination)[0] == 0.0, "worst case is not the nominal");
  c.note("lambda 0, value " + g(sol.v_dual));
  return c.verdict();
}

Verdict example_c() {
  Check c;
  const double theta = 0.5;
  auto gr = grid(0, 50, 1e-4);
  const auto sol = solve_dual(point_mass_at_zero(gr, theta), Objective::reciprocal_minus(), gr);
  const double expected = 1.0 + 1.0 / ((1.0 + theta) * (1.0 + theta));
  c.expect(std::abs(sol.lambda_star - expected) <= 1e-3, "lambda " + g(sol.lambda_star));
  c.note("lambda " + std::to_string(sol.lambda_star) + " vs " + std::to_string(expected));
  return c.verdict();
}

Verdict structure() {
  Check c;
  std::mt19937_64 rng(6);
  std::size_t max_excess = 0;
  for (int t = 0; t < 500; ++t) {
    auto fi = testgen::random_finite_instance(rng, 5, 20);
    const auto sol = solve_dual(fi.ball, fi.objective, fi.space);
    const auto wc = construct_worst_case(sol);
    const std::size_t n = sol.instance->atoms();
    std::vector<std::size_t> destinations(n, 0);
    std::vector<std::size_t> support;
    for (const auto& a : wc.atoms) {
      ++destinations[a.source];
      support.push_back(a.destination);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    const auto splits = std::count_if(destinations.begin(), destinations.end(), [](std::size_t d) { return d > 1; });
    c.expect(support.size() <= n + 1, "instance " + std::to_string(t) + " support " + std::to_string(support.size()));
    c.expect(splits <= 1, "instance " + std::to_string(t) + " splits " + std::to_string(splits));
    max_excess = std::max(max_excess, support.size() > n ? support.size() - n : 0);
  }
  // Discrete metric, empirical nominal on distinct points, N theta integer.
  std::size_t tv_cases = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 6 + rng() % 10, N = 2 + rng() % 4;
    std::vector<std::vector<double>> pts;
    for (std::size_t k = 0; k < m; ++k) pts.push_back({double(k)});
    auto s = std::make_shared<const PointSpace>(pts);
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < N; ++k) atoms.push_back({idx[k], 1.0 / double(N)});
    std::vector<double> psi(m);
    for (auto& v : psi) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double theta = double(rng() % (N + 1)) / double(N);
    WassersteinBall ball{DiscreteDistribution(s, atoms), GroundMetric::discrete(), theta};
    const auto wc = construct_worst_case(solve_dual(ball, Objective::table(s, psi), s));
    std::vector<std::size_t> dests(N, 0);
    for (const auto& a : wc.atoms) ++dests[a.source];
    c.expect(std::all_of(dests.begin(), dests.end(), [](std::size_t d) { return d <= 1; }),
             "discrete metric instance " + std::to_string(t) + " split");
    ++tv_cases;
  }
  c.note("500 general + " + std::to_string(tv_cases) + " discrete-metric instances");
  return c.verdict();
}

Verdict lipschitz_bound() {
  Check c;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = -1e300;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 5 + rng() % 16;
    std::vector<std::vector<double>> pts;
    for (std::size_t k = 0; k < m; ++k) pts.push_back({U(rng), U(rng)});
    auto s = std::make_shared<const PointSpace>(pts);
    const auto metric = GroundMetric::euclidean(1.0);
    // McShane extension min_k (c_k + d(x, y_k)) is 1-Lipschitz.
    std::vector<std::pair<std::vector<double>, double>> anchors;
    for (int k = 0; k < 4; ++k) anchors.push_back({{U(rng), U(rng)}, U(rng)});
    std::vector<double> psi(m);
    for (std::size_t j = 0; j < m; ++j) {
      psi[j] = 1e300;
      for (const auto& [y, ck] : anchors) psi[j] = std::min(psi[j], ck + metric.distance(s->point(j), y));
    }
    const std::size_t N = 1 + rng() % 5;
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < N; ++i) atoms.push_back({rng() % m, 1.0 / double(N)});
    const double theta = 0.5 * (U(rng) + 1.0);
    WassersteinBall ball{DiscreteDistribution(s, atoms), metric, theta};
    const auto inst = make_instance(ball, Objective::table(s, psi), s);
    const auto pr = primal_oracle(*inst);
    double nominal = 0.0, achieved = 0.0;
    for (const auto& a : ball.nominal.atoms()) nominal += a.weight * psi[a.index];
    for (std::size_t j = 0; j < m; ++j) achieved += pr.weights[j] * psi[j];
    c.expect(pr.transport_cost <= theta + 1e-9, "oracle distribution outside the ball");
    c.expect(achieved - nominal <= theta + 1e-9, "instance " + std::to_string(t) + " excess " + g(achieved - nominal - theta));
    worst = std::max(worst, achieved - nominal - theta);
  }
  c.note("max (v - E Psi - theta) " + g(worst));
  return c.verdict();
}

Verdict uq_greedy() {
  Check c;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t N = 1 + rng() % 6;
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < N; ++i) pts.push_back({U(rng), U(rng)});
    auto space = std::make_shared<const PointSpace>(pts);
    std::vector<double> w(N);
    for (double& v : w) v = 0.1 + (U(rng) + 1);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
    const auto nu = DiscreteDistribution::from_dense(space, w);
    const double theta = 0.6 * (U(rng) + 1);
    const double p = t % 3 == 0 ? 2.0 : 1.0;
    std::unique_ptr<Region> region;
    if (t % 2 == 0) {
      region = std::make_unique<DiscRegion>(std::vector<double>{0.2 * U(rng), 0.2 * U(rng)}, 0.6 + 0.5 * (U(rng) + 1));
    } else {
      region = std::make_unique<HalfSpaceRegion>(std::vector<double>{U(rng), U(rng) + 1.5}, 0.5 * U(rng));
    }
    const auto metric = GroundMetric::euclidean(p);
    const double gap = std::abs(uq_solve(nu, *region, theta, metric).wc_probability - uq_oracle(nu, *region, theta, metric));
    worst = std::max(worst, gap);
    c.expect(gap <= 1e-8, "instance " + std::to_string(t) + " gap " + g(gap));
    double inside = 0.0;
    for (const auto& a : nu.atoms())
      if (region->contains(space->point(a.index))) inside += a.weight;
    c.expect(uq_solve(nu, *region, 0.0, metric).wc_probability == inside, "theta = 0 differs from nu(C)");
  }
  c.note("max gap " + g(worst));
  return c.verdict();
}

Verdict process_control() {
  Check c;
  using namespace drso::process;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<SamplePath> paths(1 + rng() % 3);
    for (auto& p : paths) {
      const std::size_t m = rng() % 5;
      for (std::size_t k = 0; k < m; ++k) p.arrivals.push_back(std::round(U(rng) * 1000) / 1000);
      std::sort(p.arrivals.begin(), p.arrivals.end());
    }
    std::vector<double> ends;
    for (std::size_t k = 0; k < 2 * (1 + rng() % 3); ++k) ends.push_back(U(rng));
    std::sort(ends.begin(), ends.end());
    ControlPolicy x;
    for (std::size_t k = 0; k + 1 < ends.size(); k += 2)
      if (ends[k] < ends[k + 1] && (x.intervals.empty() || ends[k] > x.intervals.back().second))
        x.intervals.push_back({ends[k], ends[k + 1]});
    const double theta = 0.2 * U(rng);
    const double gap = std::abs(evaluate_control(x, paths, theta, 1.0).removed - inner_lp_oracle(x, paths, theta));
    worst = std::max(worst, gap);
    c.expect(gap <= 1e-9, "instance " + std::to_string(t) + " gap " + g(gap));
  }
  const auto paths = generate_sinusoid_paths(10, 10.0, 20160101);
  const auto found = optimize_control(paths, 0.01, 10.0);
  const double j = jaccard(found.control, sinusoid_true_control());
  c.expect(j >= 0.5, "jaccard " + g(j));
  c.note("max gap " + g(worst) + ", jaccard " + g(j));
  return c.verdict();
}

Verdict worst_case_var() {
  Check c;
  // Nominal VaR_0.05 of N(0,1) by bisection on erfc, independent of the library.
  double lo = 0.0, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::sqrt(2.0)) > 0.05 ? lo : hi) = mid;
  }
  const double V = 0.5 * (lo + hi);
  VarQuery q{GaussianNominal{{0.0}, {{1.0}}}, {1.0}, 0.05, 0.1, 1.0};
  const auto r = wc_var(q);
  const double f = var_condition(q, r.var_wc);
  c.expect(std::abs(f - 0.1) <= 1e-6, "|f - theta| " + g(std::abs(f - 0.1)));
  const double scan =
      oracle::scan_crossing([&](double x) { return oracle::shade_area(V, x, 1.0, 20000); }, V, 0.1, 1e-2);
  c.expect(std::abs(r.var_wc - scan) <= 1e-5, "scan disagreement " + g(std::abs(r.var_wc - scan)));
  // q* - VaR shrinks like sqrt(2 theta / phi(VaR)), so the limit is read off
  // a decreasing sequence of radii.
  double limit = r.var_wc, prev = r.var_wc;
  for (double th : {1e-4, 1e-8, 1e-12, 1e-16}) {
    q.theta = th;
    limit = wc_var(q).var_wc;
    c.expect(limit <= prev + 1e-12, "q* not decreasing as theta shrinks");
    prev = limit;
  }
  c.expect(std::abs(limit - V) <= 1e-6, "theta -> 0 limit off by " + g(std::abs(limit - V)));
  c.note("q* " + std::to_string(r.var_wc) + ", scan diff " + g(std::abs(r.var_wc - scan)) + ", limit diff " +
         g(std::abs(limit - V)));
  return c.verdict();
}

Verdict newsvendor_and_phi_structure() {
  Check c;
  double worst = 0.0;
  std::mt19937_64 rng(11);
  for (int t = 0; t < 12; ++t) {
    const std::string shape = t % 2 ? "geometric" : "binomial";
    const auto samples = demand_samples(shape, 20, 50, 100 + t);
    const double theta = 0.1 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double b = 1.0 + double(t % 3);
    const auto inst = newsvendor_from_samples(samples, 20, 1.0, b, theta, 1.0);
    const auto res = newsvendor_solve(inst);
    const double gap = std::abs(res.value - newsvendor_oracle(inst, res.x_star));
    worst = std::max(worst, gap);
    c.expect(gap <= 1e-8, "instance " + std::to_string(t) + " gap " + g(gap));
  }
  std::size_t pops = 0;
  for (const char* shape : {"binomial", "geometric"}) {
    for (std::size_t n : {50u, 500u}) {
      PhiCompareOptions o;
      o.shape = shape;
      o.B = 20;
      o.n = n;
      o.wasserstein_theta = 0.5;
      o.phi_theta = 0.5;
      const auto res = phi_compare(o);
      // j_M is an off-support bin of largest loss at the Burg decision;
      // symmetric losses can tie, so any maximizer qualifies.
      auto loss = [&](std::size_t bin) {
        const double d = double(res.x_burg) - double(bin);
        return std::max(o.h * d, -o.b * d);
      };
      double top = -1e300;
      for (const auto& row : res.rows)
        if (row.q == 0.0) top = std::max(top, loss(row.bin));
      std::size_t popped_here = 0;
      for (const auto& row : res.rows) {
        if (row.q > 0.0) continue;
        c.expect(row.p_kl == 0.0, std::string(shape) + " KL mass off the support at bin " + std::to_string(row.bin));
        if (row.p_burg > 0.0) {
          c.expect(loss(row.bin) >= top - 1e-9, std::string(shape) + " Burg mass off j_M at bin " + std::to_string(row.bin));
          ++popped_here;
        }
      }
      c.expect(popped_here <= 1, std::string(shape) + " Burg mass on " + std::to_string(popped_here) + " off-support bins");
      pops += popped_here;
    }
  }
  c.note("max gap " + g(worst) + ", Burg pops " + std::to_string(pops));
  return c.verdict();
}

Verdict calibration() {
  Check c;
  const double B = 100.0, target = 0.05;
  const auto small = demand_samples("binomial", 100, 50, 12);
  const auto large = demand_samples("binomial", 100, 500, 12);
  const auto r50 = calibrate_radius(small, B, target);
  const auto r500 = calibrate_radius(large, B, target);
  for (const auto* r : {&r50, &r500}) {
    const std::size_t n = r == &r50 ? 50 : 500;
    const double at = std::exp(concentration_log_bound(r->theta, r->delta, B, r->lambda, n));
    c.expect(std::abs(at - target) <= 1e-6, "bound at theta* is " + g(at));
    // delta* must minimize the bound: no point of a dense scan does better.
    double scan = 1e300;
    for (int k = 1; k < 20000; ++k)
      scan = std::min(scan, concentration_log_bound(r->theta, r->theta * k / 20000.0, B, r->lambda, n));
    c.expect(std::log(at) <= scan + 1e-9, "delta* is not the minimizer");
  }
  c.expect(r500.theta < r50.theta, "theta*(500) " + g(r500.theta) + " >= theta*(50) " + g(r50.theta));
  c.note("theta*(50) " + g(r50.theta) + ", theta*(500) " + g(r500.theta));
  return c.verdict();
}

Verdict continuum_transport() {
  Check c;
  auto nominal = DiscreteDistribution::from_points({{0.2, 0.3}, {0.7, 0.8}, {0.6, 0.2}}, {0.5, 0.3, 0.2});
  const double theta = 0.1;
  const auto inst = square_grid_instance(0.0, 1.0, 50, nominal, theta, 1.0);
  const auto r = drtp_solve(inst);
  double integral = 0.0, fmin = 1e300;
  std::vector<double> mass(r.f_star.size());
  for (std::size_t k = 0; k < r.f_star.size(); ++k) {
    fmin = std::min(fmin, r.f_star[k]);
    mass[k] = r.f_star[k] * inst.areas[k];
    integral += mass[k];
  }
  c.expect(fmin >= 0.0, "negative density " + g(fmin));
  c.expect(std::abs(integral - 1.0) <= 1e-3, "integral " + g(integral));
  // Independent W_1 through the general transportation path.
  for (double& m : mass) m /= integral;
  const auto f_dist = DiscreteDistribution::from_dense(inst.grid, mass);
  const double w = wasserstein_distance_lp(f_dist, nominal, GroundMetric::euclidean(1.0)).value;
  c.expect(w <= theta + 1e-6, "transport cost " + g(w));
  c.expect(r.transport_cost <= theta + 1e-6, "reported transport cost " + g(r.transport_cost));
  c.expect(std::abs(r.gap) <= 1e-3, "duality gap " + g(r.gap));
  c.note("integral " + g(integral) + ", W1 " + g(w) + ", gap " + g(r.gap) + ", " + std::to_string(r.iterations) + " it");
  return c.verdict();
}

Verdict phi_baseline() {
  Check c;
  const PhiKind kinds[] = {PhiKind::kKl, PhiKind::kBurg, PhiKind::kChi2, PhiKind::kModifiedChi2, PhiKind::kHellinger,
                           PhiKind::kTv};
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0.0, worst_tight = 0.0;
  for (PhiKind k : kinds) {
    for (int t = 0; t < 8; ++t) {
      std::vector<double> q{U(rng) + 0.05, U(rng) + 0.05, t % 2 ? 0.0 : U(rng) + 0.05};
      const double s = q[0] + q[1] + q[2];
      for (double& v : q) v /= s;
      const std::vector<double> psi{U(rng), U(rng), U(rng)};
      const double theta = 0.02 + 0.3 * U(rng);
      const auto r = phi_worst_case(q, psi, theta, k);
      const std::string tag = std::string(to_string(k)) + " #" + std::to_string(t);
      const double diff = std::abs(r.value - oracle::edge_oracle(q, psi, theta, k));
      worst = std::max(worst, diff);
      c.expect(diff <= 1e-4, tag + " brute-force diff " + g(diff));
      c.expect(r.value >= oracle::grid_oracle(q, psi, theta, k) - 1e-9, tag + " grid point beats the solver");
      if (r.lambda > 0.0) {
        const double tight = std::abs(phi_divergence(r.p_star, q, k) - theta);
        worst_tight = std::max(worst_tight, tight);
        c.expect(tight <= 1e-8, tag + " divergence off theta by " + g(tight));
      }
    }
  }
  c.note("max diff " + g(worst) + ", max |I - theta| " + g(worst_tight));
  return c.verdict();
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"strong duality on 200 random finite instances", strong_duality},
      {"hinge a=-1: value 1.5, point-mass worst case", example_a_negative},
      {"hinge a=+1: vanishing sequence reaches theta(1-a/R)", example_a_positive},
      {"truncated parabola: lambda 0, nominal is worst", example_b},
      {"Psi minus: lambda* = 1 + 1/1.5^2", example_c},
      {"worst-case support <= N+1, <= 1 split, none for integer N theta", structure},
      {"1-Lipschitz objectives gain at most theta", lipschitz_bound},
      {"UQ greedy equals the LP; theta 0 gives nu(C)", uq_greedy},
      {"process greedy equals the LP; synthetic Jaccard >= 0.5", process_control},
      {"worst-case VaR condition, scan and theta -> 0 limit", worst_case_var},
      {"newsvendor dual equals bin LP; KL/Burg support structure", newsvendor_and_phi_structure},
      {"radius calibration hits the target and shrinks with N", calibration},
      {"continuum transport on 50x50 with 3 atoms", continuum_transport},
      {"phi worst case against 3-point brute force", phi_baseline},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t only = 0;
  if (argc > 1) only = std::strtoul(argv[1], nullptr, 10);
  bool all_pass = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    if (only && only != i + 1) continue;
    Verdict v;
    try {
      v = criteria()[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    all_pass = all_pass && v.pass;
    std::printf("%s %2zu %s (%s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria()[i].name, v.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
