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
#include <memory>
#include <numeric>
#include <random>

#include "doctest.h"
#include "drso/applications.hpp"
#include "drso/error.hpp"
#include "oracles/numeric_oracles.hpp"

using namespace drso;
using oracle::scan_crossing;
using oracle::shade_area;

namespace {

std::shared_ptr<const PointSpace> planar(const std::vector<std::vector<double>>& pts) {
  return std::make_shared<const PointSpace>(pts);
}

}  // namespace

TEST_CASE("newsvendor with theta 0 and h = b picks a median") {
  NewsvendorInstance in{2.0, 2.0, {0.1, 0.3, 0.05, 0.25, 0.3}, 0.0, 1.0};
  const auto r = newsvendor_solve(in);
  double best = 1e300;
  for (std::size_t x = 0; x <= in.bins(); ++x) {
    double e = 0.0;
    for (std::size_t j = 0; j <= in.bins(); ++j) e += in.q[j] * 2.0 * std::abs(double(x) - double(j));
    best = std::min(best, e);
    CHECK(r.value_by_x[x] == doctest::Approx(e).epsilon(1e-12));
  }
  CHECK(r.value == doctest::Approx(best).epsilon(1e-12));
  double below = 0.0;
  for (std::size_t j = 0; j < r.x_star; ++j) below += in.q[j];
  CHECK(below <= 0.5 + 1e-12);
  CHECK(below + in.q[r.x_star] >= 0.5 - 1e-12);
}

TEST_CASE("newsvendor dual matches the bin LP for every order quantity") {
  NewsvendorInstance in{1.0, 1.0, {0.2, 0.2, 0.2, 0.2, 0.2}, 0.5, 1.0};
  auto r = newsvendor_solve(in);
  for (std::size_t x = 0; x <= in.bins(); ++x)
    CHECK(r.value_by_x[x] == doctest::Approx(newsvendor_oracle(in, x)).epsilon(1e-9));
  CHECK(r.worst_case.value == doctest::Approx(r.value).epsilon(1e-9));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 10; ++t) {
    NewsvendorInstance q{0.5 + U(rng), 0.5 + 2 * U(rng), std::vector<double>(9), 2.0 * U(rng), t % 2 ? 2.0 : 1.0};
    double s = 0.0;
    for (double& v : q.q) s += (v = U(rng) < 0.3 ? 0.0 : U(rng));
    for (double& v : q.q) v /= s;
    r = newsvendor_solve(q);
    CHECK(r.value == doctest::Approx(newsvendor_oracle(q, r.x_star)).epsilon(1e-8));
  }
}

TEST_CASE("newsvendor value is non-decreasing in theta") {
  NewsvendorInstance in{1.0, 3.0, {0.1, 0.0, 0.4, 0.2, 0.0, 0.3}, 0.0, 1.0};
  double prev = -1e300;
  for (double th : {0.0, 0.1, 0.3, 0.7, 1.5, 3.0}) {
    in.theta = th;
    const double v = newsvendor_solve(in).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("newsvendor worst case can use empty bins") {
  NewsvendorInstance in{1.0, 1.0, {0.0, 0.5, 0.0, 0.0, 0.5, 0.0}, 0.0, 1.0};
  bool found = false;
  for (double th : {0.2, 0.5, 1.0, 2.0}) {
    in.theta = th;
    const auto r = newsvendor_solve(in);
    for (const auto& a : r.worst_case.atoms)
      if (in.q[a.destination] == 0.0 && a.mass > 1e-12) found = true;
  }
  CHECK(found);
}

TEST_CASE("newsvendor binning clamps and rounds") {
  const std::vector<double> s{-3.0, 0.4, 1.6, 2.0, 9.0};
  const auto in = newsvendor_from_samples(s, 3, 1, 1, 0.1, 1);
  REQUIRE(in.q.size() == 4);
  CHECK(in.q[0] == doctest::Approx(0.4));
  CHECK(in.q[2] == doctest::Approx(0.4));
  CHECK(in.q[3] == doctest::Approx(0.2));
  CHECK_THROWS_AS(newsvendor_from_samples(s, 0, 1, 1, 0.1, 1), Error);
}

TEST_CASE("uq greedy agrees with the LP on random planar instances") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t N = 1 + rng() % 6;
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < N; ++i) pts.push_back({U(rng), U(rng)});
    auto space = planar(pts);
    std::vector<double> w(N);
    for (double& v : w) v = 0.1 + (U(rng) + 1);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s;
    const auto nu = DiscreteDistribution::from_dense(space, w);
    const double theta = 0.6 * (U(rng) + 1);
    const double p = t % 3 == 0 ? 2.0 : 1.0;
    std::unique_ptr<Region> region;
    GroundMetric metric = GroundMetric::euclidean(p);
    if (t % 2 == 0) {
      region = std::make_unique<DiscRegion>(std::vector<double>{0.2 * U(rng), 0.2 * U(rng)}, 0.6 + 0.5 * (U(rng) + 1));
    } else {
      region = std::make_unique<HalfSpaceRegion>(std::vector<double>{U(rng), U(rng) + 1.5}, 0.5 * U(rng));
      if (t % 4 == 1) metric = GroundMetric::l1(p);
      if (t % 4 == 3) metric = GroundMetric::linf(p);
    }
    const auto r = uq_solve(nu, *region, theta, metric);
    CHECK(r.wc_probability == doctest::Approx(uq_oracle(nu, *region, theta, metric)).epsilon(1e-8));
    std::size_t partial = 0;
    for (const auto& m : r.moves) {
      if (m.mass < nu.atoms()[m.source].weight * (1 - 1e-12)) ++partial;
      CHECK(region->exit_distance(m.destination, metric) <= 1e-12);
      CHECK(metric.distance(nu.space().point(nu.atoms()[m.source].index), m.destination) ==
            doctest::Approx(m.exit_distance).epsilon(1e-9));
    }
    CHECK(partial <= 1);
    CHECK(r.spent <= std::pow(theta, p) + 1e-12);
  }
}

TEST_CASE("uq with theta 0 returns the nominal probability; a large ball empties C") {
  auto space = planar({{0.0, 0.0}, {0.5, 0.0}, {3.0, 0.0}});
  const auto nu = DiscreteDistribution::from_dense(space, std::vector<double>{0.25, 0.25, 0.5});
  DiscRegion disc({0.0, 0.0}, 1.0);
  CHECK(uq_solve(nu, disc, 0.0, GroundMetric::euclidean()).wc_probability == 0.5);
  // exits cost 1 and 0.5 with weight 1/4 each
  CHECK(uq_solve(nu, disc, 0.375 + 1e-12, GroundMetric::euclidean()).wc_probability == 0.0);
  CHECK(uq_solve(nu, disc, 0.25, GroundMetric::euclidean()).wc_probability == doctest::Approx(0.125));
  CHECK_THROWS_AS(uq_solve(nu, disc, 0.1, GroundMetric::l1()), Error);
}

TEST_CASE("uq closed region approaches the open one as exterior candidates close in") {
  auto space = planar({{0.0, 0.0}, {0.3, 0.4}, {-0.6, 0.1}, {0.1, -0.8}});
  const auto nu = DiscreteDistribution::from_dense(space, std::vector<double>{0.25, 0.25, 0.25, 0.25});
  DiscRegion open({0.0, 0.0}, 1.0);
  const double target = uq_solve(nu, open, 0.3, GroundMetric::euclidean()).wc_probability;
  double prev = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    std::vector<std::vector<double>> ring;
    for (int k = 0; k < 3600; ++k) {
      const double a = 2 * M_PI * k / 3600.0;
      ring.push_back({(1 + eps) * std::cos(a), (1 + eps) * std::sin(a)});
    }
    for (const auto& x : space->to_vectors()) {  // radial exits of every atom
      const double r = std::hypot(x[0], x[1]);
      ring.push_back(r > 0 ? std::vector<double>{(1 + eps) * x[0] / r, (1 + eps) * x[1] / r}
                           : std::vector<double>{1 + eps, 1e-9});
    }
    GridRegion closed([](std::span<const double> x) { return std::hypot(x[0], x[1]) <= 1.0; }, planar(ring));
    const double diff = uq_solve(nu, closed, 0.3, GroundMetric::euclidean()).wc_probability - target;
    CHECK(diff >= -1e-12);
    CHECK(diff <= prev + 1e-15);
    prev = diff;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("wc_var for a standard gaussian matches a trapezoid scan") {
  VarQuery q{GaussianNominal{{0.0}, {{1.0}}}, {1.0}, 0.05, 0.1, 1.0};
  const double V = 1.6448536269514722;
  CHECK(var_condition(q, V) == 0.0);
  double prev = 0.0;
  for (double dq : {0.01, 0.1, 0.5, 1.0}) {
    const double f = var_condition(q, V + dq);
    CHECK(f > prev);
    CHECK(f == doctest::Approx(shade_area(V, V + dq, 1.0)).epsilon(1e-8));
    prev = f;
  }
  const auto r = wc_var(q);
  CHECK(r.nominal_var == doctest::Approx(V).epsilon(1e-14));
  CHECK(std::abs(r.certificate - 0.1) <= 1e-6);
  const double scan = scan_crossing([&](double x) { return shade_area(V, x, 1.0, 20000); }, V, 0.1, 1e-2);
  CHECK(std::abs(r.var_wc - scan) <= 1e-6);

  q.theta = 1e-14;
  CHECK(std::abs(wc_var(q).var_wc - V) <= 1e-6);
  q.theta = 0.0;
  CHECK(wc_var(q).var_wc == doctest::Approx(V));
}

TEST_CASE("wc_var quadrature for p = 2 and monotonicity") {
  VarQuery q{GaussianNominal{{0.0}, {{1.0}}}, {1.0}, 0.05, 0.2, 2.0};
  const double V = 1.6448536269514722;
  for (double dq : {0.05, 0.4, 1.3})
    CHECK(var_condition(q, V + dq) == doctest::Approx(shade_area(V, V + dq, 2.0)).epsilon(1e-8));
  const auto r = wc_var(q);
  CHECK(r.certificate == doctest::Approx(0.04).epsilon(1e-6));
  double prev = -1e300;
  for (double th : {0.01, 0.05, 0.2, 0.5}) {
    q.theta = th;
    const double v = wc_var(q).var_wc;
    CHECK(v > prev);
    prev = v;
  }
  prev = -1e300;
  for (double a : {0.2, 0.1, 0.05, 0.01}) {
    q.alpha = a;
    const double v = wc_var(q).var_wc;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("wc_var portfolio reduces to the loss law") {
  GaussianNominal g{{0.01, 0.02}, {{0.04, 0.01}, {0.01, 0.09}}};
  VarQuery q{g, {0.3, 0.7}, 0.1, 0.05, 1.0};
  const double m = -(0.3 * 0.01 + 0.7 * 0.02);
  const double s = std::sqrt(0.09 * 0.04 + 2 * 0.21 * 0.01 + 0.49 * 0.09);
  VarQuery one{GaussianNominal{{-m / s}, {{1.0}}}, {1.0}, 0.1, 0.05 / s, 1.0};
  CHECK(wc_var(q).var_wc == doctest::Approx(s * wc_var(one).var_wc).epsilon(1e-7));
  std::get<GaussianNominal>(q.nominal).covariance = {{0.04, 0.1}, {0.1, 0.09}};
  CHECK_THROWS_AS(wc_var(q), Error);
  q.w = {0.5, 0.6};
  CHECK_THROWS_AS(wc_var(q), Error);
}

TEST_CASE("wc_var on an empirical nominal matches a knapsack scan") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> Z;
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<double>> pts;
    const std::size_t N = 5 + rng() % 20;
    for (std::size_t i = 0; i < N; ++i) pts.push_back({std::round(4 * Z(rng)) / 4});  // ties on purpose
    const auto nu = DiscreteDistribution::from_points(pts, std::vector<double>(N, 1.0 / double(N)));
    const double alpha = 0.05 + 0.3 * (t % 4) / 4.0, theta = 0.05 + 0.1 * (t % 5), p = t % 2 ? 2.0 : 1.0;
    VarQuery q{nu, {1.0}, alpha, theta, p};
    // Losses z = -xi; minimal cost of holding mass alpha strictly above q is
    // reached by lifting the largest losses below q up to q.
    std::vector<std::pair<double, double>> zs;
    for (const auto& a : nu.atoms()) zs.push_back({-nu.space().point(a.index)[0], a.weight});
    std::sort(zs.rbegin(), zs.rend());
    auto cost = [&](double x) {
      double need = alpha, c = 0.0;
      for (const auto& [z, w] : zs) {
        if (need <= 1e-15) break;
        const double take = std::min(w, need);
        if (z <= x) c += take * std::pow(x - z, p);
        need -= take;
      }
      return c;
    };
    const auto r = wc_var(q);
    const double lo = r.nominal_var;
    CHECK(cost(lo) == doctest::Approx(0.0));
    const double scan = scan_crossing(cost, lo, std::pow(theta, p), 1e-2);
    CHECK(r.var_wc == doctest::Approx(scan).epsilon(1e-6));
  }
}

TEST_CASE("affine objective closed form") {
  std::vector<AffineSample> one{{{1.0, 0.0}, 0.0}};
  CHECK(affine_value(one, 0.1, 2.0, std::vector<double>{1.0, 0.0}) == doctest::Approx(1.1));
  std::vector<AffineSample> d{{{1.0, 2.0}, 0.5}, {{-1.0, 0.5}, -0.5}, {{0.0, 1.0}, 1.0}};
  const std::vector<double> x{0.3, -0.7};
  const double mean = (0.3 - 1.4 + 0.5 - 0.3 - 0.35 - 0.5 - 0.7 + 1.0) / 3.0;
  CHECK(affine_value(d, 0.0, 2.0, x) == doctest::Approx(mean));
  // Moving every a by theta along the dual maximizer of y.x attains the bound.
  const double theta = 0.4;
  const std::vector<std::pair<double, std::vector<double>>> dirs{
      {2.0, {0.3 / std::hypot(0.3, 0.7), -0.7 / std::hypot(0.3, 0.7)}},
      {1.0, {1.0, -1.0}},                                          // primal l-inf ball
      {std::numeric_limits<double>::infinity(), {0.0, -1.0}}};     // primal l1 ball
  for (const auto& [qs, y] : dirs) {
    double moved = 0.0;
    for (const auto& s : d) moved += (s.a[0] + theta * y[0]) * x[0] + (s.a[1] + theta * y[1]) * x[1] + s.b;
    CHECK(affine_value(d, theta, qs, x) == doctest::Approx(moved / 3.0));
  }
  const auto r = affine_drso(d, theta, 2.0, {{1, 1}, {0.3, -0.7}, {0, 0}});
  CHECK(r.values.size() == 3);
  CHECK(r.value == *std::min_element(r.values.begin(), r.values.end()));
}

TEST_CASE("affine objective agrees with the dual on a 1-D grid") {
  std::vector<AffineSample> d{{{0.5}, 0.1}, {{-0.25}, -0.2}, {{1.0}, 0.3}};
  for (double x : {-1.5, 0.7}) {
    auto space = std::make_shared<const PointSpace>(PointSpace::grid_1d(-3, 3, 0.001));
    std::vector<Atom> atoms;
    for (const auto& s : d) atoms.push_back({*space->find(s.a), 1.0 / 3.0});
    WassersteinBall ball{DiscreteDistribution(space, atoms), GroundMetric::absolute_1d(), 0.35};
    auto obj = Objective([x](std::span<const double> z) { return z[0] * x; }).with_growth(std::abs(x));
    const double mean_b = (0.1 - 0.2 + 0.3) / 3.0;
    const double v = solve_dual(ball, obj, space).v_dual + mean_b;
    CHECK(v == doctest::Approx(affine_value(d, 0.35, 2.0, std::vector<double>{x})).epsilon(1e-3 * std::abs(x)));
  }
}

TEST_CASE("drtp on a small grid is primal-dual consistent") {
  auto atoms = planar({{0.3, 0.3}, {0.7, 0.4}, {0.5, 0.8}});
  const auto nu = DiscreteDistribution::from_dense(atoms, std::vector<double>{0.5, 0.3, 0.2});
  const auto in = square_grid_instance(0, 1, 24, nu, 0.1);
  const auto r = drtp_solve(in);
  CHECK(std::all_of(r.f_star.begin(), r.f_star.end(), [](double f) { return f >= 0.0; }));
  CHECK(std::abs(r.integral - 1.0) <= 1e-3);
  CHECK(r.transport_cost <= 0.1 + 1e-6);
  CHECK(r.gap >= -1e-6);
  CHECK(r.gap <= 1e-3);
  CHECK(r.lambda_star > 0.0);
  double sv = 0.0;
  for (std::size_t i = 0; i < 3; ++i) sv += nu.atoms()[i].weight * r.v_star[i];
  CHECK(std::abs(sv) <= 1e-12);
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
    CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] + 1e-12 * std::abs(r.objective_trace[k - 1]));
  // Larger balls let the density spread out and raise the gain.
  const auto wider = drtp_solve(square_grid_instance(0, 1, 24, nu, 0.2));
  CHECK(wider.primal_value > r.primal_value);
  CHECK_THROWS_AS(drtp_solve(square_grid_instance(0, 1, 24, nu, 5.0)), Error);
}

TEST_CASE("drtp with one centered atom and fixed potentials is radial") {
  auto c = planar({{0.0, 0.0}});
  const auto nu = DiscreteDistribution::from_dense(c, std::vector<double>{1.0});
  DrtpOptions opt;
  opt.fix_potentials = true;
  const std::vector<double> center{0.0, 0.0};
  const auto in = disc_grid_instance(center, 1.0, 30, nu, 0.2);
  const auto r = drtp_solve(in, opt);
  std::vector<std::pair<double, double>> byr;
  for (std::size_t k = 0; k < in.grid->size(); ++k) {
    const auto x = in.grid->point(k);
    byr.emplace_back(std::hypot(x[0], x[1]), r.f_star[k]);
  }
  std::sort(byr.begin(), byr.end());
  for (std::size_t k = 1; k < byr.size(); ++k) {
    if (byr[k].first - byr[k - 1].first < 1e-12)
      CHECK(byr[k].second == doctest::Approx(byr[k - 1].second).epsilon(1e-9));
    else
      CHECK(byr[k].second <= byr[k - 1].second * (1 + 1e-12));
  }
  CHECK(std::abs(r.integral - 1.0) <= 1e-3);
}
