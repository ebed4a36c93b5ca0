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
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "drso/applications.hpp"
#include "drso/dual.hpp"
#include "drso/error.hpp"
#include "drso/measures.hpp"
#include "drso/phi.hpp"
#include "drso/process.hpp"
#include "service/service.hpp"

namespace drso::service {

namespace {

[[noreturn]] void schema_error(const std::string& what) { fail(ErrorCode::kSchema, what); }

const Json& single_input(const Request& r) {
  if (r.inputs.size() != 1) schema_error("'" + r.command + "' takes exactly one input document");
  return r.inputs.front();
}

// An empty document stands in for "use the generator defaults".
Json input_or_empty(const Request& r) {
  if (r.inputs.empty()) return Json{{"schema", kSchema}};
  return single_input(r);
}

Json header(const Request& r) { return Json{{"schema", kSchema}, {"command", r.command}}; }

std::uint64_t seed_of(const Json& doc, const Request& r) {
  if (!doc.contains("seed")) return r.seed;
  const Json& v = doc.at("seed");
  if (!v.is_number_unsigned()) schema_error("field 'seed' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<std::string> coordinate_columns(std::size_t dim) {
  if (dim == 1) return {"x"};
  std::vector<std::string> c;
  for (std::size_t k = 0; k < dim; ++k) c.push_back("x" + std::to_string(k));
  return c;
}

// ---------------------------------------------------------- finite problems

struct Problem {
  std::shared_ptr<const PointSpace> candidates;
  WassersteinBall ball;
  Objective objective;
  std::size_t oracle_budget;
  Json echo;  // the document as solved, for replaying generated instances
};

Objective read_objective(const Json& doc, const std::shared_ptr<const PointSpace>& candidates) {
  const Json& o = field(doc, "objective");
  const std::string kind = text_or(o, "kind", "");
  auto make = [&]() -> Objective {
    if (kind == "table") return Objective::table(candidates, numbers(field(o, "values"), "objective.values"));
    if (kind == "hinge") return Objective::hinge(number(o, "a"));
    if (kind == "bump") return Objective::bump();
    if (kind == "reciprocal_plus") return Objective::reciprocal_plus();
    if (kind == "reciprocal_minus") return Objective::reciprocal_minus();
    schema_error("objective.kind must be one of table, hinge, bump, reciprocal_plus, reciprocal_minus");
  };
  Objective obj = make();
  if (o.contains("growth")) {
    const Json& g = o.at("growth");
    if (g.is_string() && g.get<std::string>() == "unbounded") {
      obj.with_unbounded_growth();
    } else if (g.is_number()) {
      obj.with_growth(g.get<double>());
    } else {
      schema_error("objective.growth must be a number or \"unbounded\"");
    }
  }
  return obj;
}

// Seeded instance with at most 20 planar candidates and 5 nominal atoms.
Json random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t m = 2 + rng() % 19;
  const std::size_t n = 1 + rng() % std::min<std::size_t>(5, m);
  static const char* kinds[] = {"euclidean", "l1", "linf"};
  Json points = Json::array(), values = Json::array(), atoms = Json::array(), weights = Json::array();
  std::vector<std::vector<double>> pts;
  for (std::size_t j = 0; j < m; ++j) {
    pts.push_back({std::round(U(rng) * 1e6) / 1e6, std::round(U(rng) * 1e6) / 1e6});
    points.push_back(pts.back());
    values.push_back(2.0 * U(rng) - 1.0);
  }
  std::vector<std::size_t> order(m);
  for (std::size_t j = 0; j < m; ++j) order[j] = j;
  std::shuffle(order.begin(), order.end(), rng);
  double total = 0.0;
  std::vector<double> w(n);
  for (auto& x : w) total += (x = 0.1 + U(rng));
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back(pts[order[i]]);
    weights.push_back(w[i] / total);
  }
  const char* metric = kinds[rng() % 3];
  const double p = 1.0 + double(rng() % 2);
  const double theta = 0.01 + 0.5 * U(rng);
  return Json{{"schema", kSchema},
              {"candidates", {{"points", points}}},
              {"metric", {{"kind", metric}, {"p", p}}},
              {"nominal", {{"points", atoms}, {"weights", weights}}},
              {"theta", theta},
              {"objective", {{"kind", "table"}, {"values", values}}}};
}

Problem read_problem(const Request& r) {
  const Json doc = r.inputs.empty() ? random_problem(r.seed) : single_input(r);
  auto candidates = read_space(field(doc, "candidates"));
  WassersteinBall ball{read_distribution_on(field(doc, "nominal"), candidates), read_metric(doc), number(doc, "theta")};
  return {candidates, std::move(ball), read_objective(doc, candidates), count_or(doc, "oracle_budget", 40000), doc};
}

DualSolution solve_problem(const Problem& pr, const Request& r) {
  DualOptions opt;
  if (r.tolerance) opt.golden_width = *r.tolerance;
  auto sol = solve_dual(make_instance(pr.ball, pr.objective, pr.candidates), opt);
  if (sol.existence == Existence::kUnbounded) fail(ErrorCode::kInfeasible, "the dual is unbounded (infinite growth rate)");
  return sol;
}

// Dual value of the finite candidate problem itself (no growth
// extrapolation); this is what the primal LP must match.
double finite_dual(const DualSolution& sol) {
  DualOptions opt;
  opt.kappa = 0.0;
  return solve_dual(sol.instance, opt).v_dual;
}

Report dual_solve(const Request& r) {
  const Problem pr = read_problem(r);
  const DualSolution sol = solve_problem(pr, r);
  Report rep;
  Json& j = rep.json = header(r);
  j["lambda_star"] = sol.lambda_star;
  j["value"] = sol.v_dual;
  j["existence"] = std::string(to_string(sol.existence));
  j["kappa_hat"] = sol.kappa_hat;
  j["method"] = sol.method;
  j["left_derivative"] = sol.left_derivative;
  j["right_derivative"] = sol.right_derivative;
  j["breakpoints"] = sol.breakpoints;
  Json per = Json::array();
  const auto& cand = *pr.candidates;
  for (std::size_t i = 0; i < sol.per_atom.size(); ++i) {
    const auto& a = sol.per_atom[i];
    per.push_back({{"atom", i}, {"near", point_json(cand, a.near)}, {"far", point_json(cand, a.far)},
                   {"d_min", a.d_min}, {"d_max", a.d_max}, {"phi", a.phi}});
  }
  j["per_atom"] = per;
  if (r.inputs.empty()) j["instance"] = pr.echo;
  if (r.check_oracle) {
    const double primal = primal_oracle(*sol.instance, pr.oracle_budget).value;
    j["oracle_value"] = primal;
    j["truncation"] = sol.v_dual - primal;
    rep.oracle_gap = std::abs(finite_dual(sol) - primal);
  }
  return rep;
}

void emit_distribution(Report& rep, const WorstCaseDistribution& wc, std::size_t nominal_atoms) {
  const auto& cand = *wc.candidates;
  Json atoms = Json::array();
  rep.columns = {"source"};
  for (const auto& c : coordinate_columns(cand.dimension())) rep.columns.push_back(c);
  rep.columns.push_back("mass");
  for (const auto& a : wc.atoms) {
    atoms.push_back({{"source", a.source}, {"point", point_json(cand, a.destination)}, {"fraction", a.fraction},
                     {"mass", a.mass}});
    std::vector<double> row{double(a.source)};
    for (double x : cand.point(a.destination)) row.push_back(x);
    row.push_back(a.mass);
    rep.rows.push_back(std::move(row));
  }
  Json& j = rep.json;
  j["value"] = wc.value;
  j["transport_cost"] = wc.transport_cost;
  j["atoms"] = atoms;
  j["support_size"] = wc.support_size();
  j["split_source"] = wc.split_source ? Json(*wc.split_source) : Json(nullptr);
  j["structure"] = {{"max_support", nominal_atoms + 1},
                    {"splits", wc.split_source ? 1 : 0},
                    {"holds", wc.support_size() <= nominal_atoms + 1}};
}

Report worst_case(const Request& r) {
  const Problem pr = read_problem(r);
  const DualSolution sol = solve_problem(pr, r);
  Report rep;
  rep.json = header(r);
  rep.json["existence"] = std::string(to_string(sol.existence));
  rep.json["lambda_star"] = sol.lambda_star;
  rep.json["dual_value"] = sol.v_dual;
  double achieved = 0.0;
  if (sol.existence == Existence::kExists) {
    const auto wc = construct_worst_case(sol);
    emit_distribution(rep, wc, sol.instance->atoms());
    achieved = wc.value;
  } else {
    const Json doc = r.inputs.empty() ? Json::object() : r.inputs.front();
    const double eps = number_or(doc, "epsilon", std::numeric_limits<double>::max());
    const auto seq = epsilon_optimal_sequence(sol, eps);
    emit_distribution(rep, seq.distribution, sol.instance->atoms());
    rep.json["slack"] = seq.slack;
    rep.json["truncated_lambda"] = seq.truncated_lambda;
    achieved = seq.achieved;
  }
  if (r.inputs.empty()) rep.json["instance"] = pr.echo;
  // The certificate: the distribution's value against the primal LP optimum.
  if (r.check_oracle) rep.oracle_gap = std::abs(achieved - primal_oracle(*sol.instance, pr.oracle_budget).value);
  return rep;
}

Report oracle(const Request& r) {
  const Problem pr = read_problem(r);
  const auto inst = make_instance(pr.ball, pr.objective, pr.candidates);
  const auto res = primal_oracle(*inst, pr.oracle_budget);
  Report rep;
  rep.json = header(r);
  rep.json["value"] = res.value;
  rep.json["transport_cost"] = res.transport_cost;
  const auto& cand = *pr.candidates;
  rep.columns = coordinate_columns(cand.dimension());
  rep.columns.push_back("weight");
  Json support = Json::array();
  for (std::size_t j = 0; j < res.weights.size(); ++j) {
    if (res.weights[j] <= 0.0) continue;
    support.push_back({{"point", point_json(cand, j)}, {"weight", res.weights[j]}});
    std::vector<double> row(cand.point(j).begin(), cand.point(j).end());
    row.push_back(res.weights[j]);
    rep.rows.push_back(std::move(row));
  }
  rep.json["support"] = support;
  if (r.inputs.empty()) rep.json["instance"] = pr.echo;
  if (r.check_oracle) rep.oracle_gap = std::abs(res.value - finite_dual(solve_problem(pr, r)));
  return rep;
}

// -------------------------------------------------------------- wasserstein

Report wasserstein(const Request& r) {
  Json mu_doc, nu_doc;
  GroundMetric metric = GroundMetric::euclidean();
  if (r.inputs.size() == 2) {
    mu_doc = r.inputs[0];
    nu_doc = r.inputs[1];
    metric = read_metric(r.inputs[0]);
  } else {
    const Json& doc = single_input(r);
    mu_doc = field(doc, "mu");
    nu_doc = field(doc, "nu");
    metric = read_metric(doc);
  }
  const auto mu = read_distribution(mu_doc);
  const auto nu = read_distribution(nu_doc);
  const auto res = wasserstein_distance(mu, nu, metric);
  Report rep;
  rep.json = header(r);
  rep.json["distance"] = res.value;
  rep.json["cost"] = res.plan.total_cost;
  rep.json["p"] = metric.order();
  Json plan = Json::array();
  rep.columns = {"source", "target", "mass"};
  for (const auto& e : res.plan.entries) {
    plan.push_back({{"source", e.source}, {"target", e.target}, {"mass", e.mass}});
    rep.rows.push_back({double(e.source), double(e.target), e.mass});
  }
  rep.json["plan"] = plan;
  if (r.check_oracle) rep.oracle_gap = std::abs(res.value - wasserstein_distance_lp(mu, nu, metric).value);
  return rep;
}

// --------------------------------------------------------------- newsvendor

NewsvendorInstance read_newsvendor(const Json& doc, const Request& r) {
  const double h = number_or(doc, "h", 1.0), b = number_or(doc, "b", 1.0);
  const double theta = number_or(doc, "theta", 0.0), p = number_or(doc, "p", 1.0);
  if (doc.contains("q")) return {h, b, numbers(doc.at("q"), "q"), theta, p};
  if (doc.contains("samples"))
    return newsvendor_from_samples(numbers(doc.at("samples"), "samples"), count_or(doc, "B", 0), h, b, theta, p);
  // Seeded demand: Binomial(B, 0.5) or truncated Geometric(0.1).
  const std::size_t B = count_or(doc, "B", 20);
  const auto samples = demand_samples(text_or(doc, "shape", "binomial"), B, count_or(doc, "n", 50), seed_of(doc, r));
  return newsvendor_from_samples(samples, B, h, b, theta, p);
}

Report newsvendor(const Request& r) {
  const auto inst = read_newsvendor(input_or_empty(r), r);
  const auto res = newsvendor_solve(inst);
  Report rep;
  rep.json = header(r);
  rep.json["x_star"] = res.x_star;
  rep.json["value"] = res.value;
  rep.json["theta"] = inst.theta;
  rep.json["lambda_star"] = res.solution.lambda_star;
  std::vector<double> pw(inst.q.size(), 0.0);
  for (const auto& a : res.worst_case.atoms) pw[a.destination] += a.mass;
  rep.json["worst_case"] = to_json(pw);
  rep.json["value_by_x"] = to_json(res.value_by_x);
  rep.columns = {"bin", "q", "p_worst", "value_at_x"};
  for (std::size_t j = 0; j < inst.q.size(); ++j) rep.rows.push_back({double(j), inst.q[j], pw[j], res.value_by_x[j]});
  if (r.check_oracle) rep.oracle_gap = std::abs(res.value - newsvendor_oracle(inst, res.x_star));
  return rep;
}

// ----------------------------------------------------------------------- uq

std::unique_ptr<Region> read_region(const Json& doc) {
  const Json& g = field(doc, "region");
  const std::string kind = text_or(g, "kind", "");
  if (kind == "disc") return std::make_unique<DiscRegion>(numbers(field(g, "center"), "region.center"), number(g, "radius"));
  if (kind == "halfspace") return std::make_unique<HalfSpaceRegion>(numbers(field(g, "a"), "region.a"), number(g, "b"));
  schema_error("region.kind must be disc or halfspace");
}

Report uq(const Request& r) {
  const Json& doc = single_input(r);
  const auto nominal = read_distribution(field(doc, "nominal"));
  const auto region = read_region(doc);
  const auto metric = read_metric(doc);
  const double theta = number(doc, "theta");
  const auto res = uq_solve(nominal, *region, theta, metric);
  Report rep;
  rep.json = header(r);
  rep.json["wc_probability"] = res.wc_probability;
  rep.json["nominal_probability"] = res.nominal_probability;
  rep.json["spent"] = res.spent;
  rep.json["split_source"] = res.split_source ? Json(*res.split_source) : Json(nullptr);
  Json moves = Json::array();
  rep.columns = {"source", "mass", "exit_distance"};
  for (const auto& m : res.moves) {
    moves.push_back({{"source", m.source}, {"destination", to_json(m.destination)}, {"mass", m.mass},
                     {"exit_distance", m.exit_distance}});
    rep.rows.push_back({double(m.source), m.mass, m.exit_distance});
  }
  rep.json["moves"] = moves;
  if (r.check_oracle) rep.oracle_gap = std::abs(res.wc_probability - uq_oracle(nominal, *region, theta, metric));
  return rep;
}

// ---------------------------------------------------------------------- var

Report var(const Request& r) {
  const Json& doc = single_input(r);
  VarQuery q;
  const Json& nom = field(doc, "nominal");
  const std::string kind = text_or(nom, "kind", "gaussian");
  if (kind == "gaussian") {
    q.nominal = GaussianNominal{numbers(field(nom, "mean"), "nominal.mean"),
                                point_rows(field(nom, "covariance"), "nominal.covariance")};
  } else if (kind == "empirical") {
    q.nominal = read_distribution(nom);
  } else {
    schema_error("nominal.kind must be gaussian or empirical");
  }
  q.w = numbers(field(doc, "w"), "w");
  q.alpha = number_or(doc, "alpha", 0.05);
  q.theta = number(doc, "theta");
  q.p = number_or(doc, "p", 1.0);
  if (r.tolerance) q.tolerance = *r.tolerance;
  const auto res = wc_var(q);
  Report rep;
  rep.json = header(r);
  rep.json["var_wc"] = res.var_wc;
  rep.json["nominal_var"] = res.nominal_var;
  rep.json["certificate"] = res.certificate;
  rep.json["target"] = res.target;
  rep.json["iterations"] = res.iterations;
  // The robustness condition evaluated afresh at the returned threshold.
  if (r.check_oracle) rep.oracle_gap = std::abs(var_condition(q, res.var_wc) - res.target);
  return rep;
}

// ------------------------------------------------------------------- affine

Report affine(const Request& r) {
  const Json& doc = single_input(r);
  std::vector<AffineSample> data;
  for (const auto& s : field(doc, "samples")) data.push_back({numbers(field(s, "a"), "samples.a"), number_or(s, "b", 0.0)});
  if (data.empty()) schema_error("samples must be nonempty");
  const double theta = number(doc, "theta");
  double q = 2.0;
  if (doc.contains("dual_order")) {
    const Json& v = doc.at("dual_order");
    q = v.is_string() && v.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity() : number(doc, "dual_order");
  }
  const auto candidates = point_rows(field(doc, "candidates"), "candidates");
  const auto res = affine_drso(data, theta, q, candidates);
  Report rep;
  rep.json = header(r);
  rep.json["x_index"] = res.x_index;
  rep.json["x_star"] = to_json(res.x_star);
  rep.json["value"] = res.value;
  rep.json["values"] = to_json(res.values);
  rep.columns = {"candidate", "value"};
  for (std::size_t k = 0; k < res.values.size(); ++k) rep.rows.push_back({double(k), res.values[k]});
  if (r.check_oracle) {
    // Primal certificate: push the first sample along the dual-norm direction
    // of x* with the whole budget and evaluate the resulting mean.
    const auto& x = res.x_star;
    const std::size_t n = data.size(), d = x.size();
    std::vector<double> u(d, 0.0);
    const double xn = lp_norm(x, q);
    if (xn > 0.0) {
      if (std::isinf(q)) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < d; ++i)
          if (std::abs(x[i]) > std::abs(x[k])) k = i;
        u[k] = x[k] > 0 ? 1.0 : -1.0;
      } else if (q == 1.0) {
        for (std::size_t i = 0; i < d; ++i) u[i] = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
      } else {
        for (std::size_t i = 0; i < d; ++i)
          u[i] = std::copysign(std::pow(std::abs(x[i]) / xn, q - 1.0), x[i]);
      }
    }
    double achieved = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double v = data[s].b;
      for (std::size_t i = 0; i < d; ++i) v += (data[s].a[i] + (s == 0 ? double(n) * theta * u[i] : 0.0)) * x[i];
      achieved += v / double(n);
    }
    rep.oracle_gap = std::abs(res.value - achieved);
  }
  return rep;
}

// ------------------------------------------------------------------ process

std::vector<process::SamplePath> read_paths(const Json& value) {
  if (!value.is_array()) schema_error("paths must be an array of arrays");
  std::vector<process::SamplePath> out;
  for (const auto& p : value) out.push_back({numbers(p, "paths[]")});
  return out;
}

process::ControlPolicy read_control(const Json& value) {
  if (!value.is_array()) schema_error("control must be an array of [lo, hi] pairs");
  process::ControlPolicy c;
  for (const auto& iv : value) {
    const auto v = numbers(iv, "control[]");
    if (v.size() != 2) schema_error("control intervals must be [lo, hi] pairs");
    c.intervals.emplace_back(v[0], v[1]);
  }
  return c;
}

Json paths_json(const std::vector<process::SamplePath>& paths) {
  Json a = Json::array();
  for (const auto& p : paths) a.push_back(to_json(p.arrivals));
  return a;
}

Json control_json(const process::ControlPolicy& c) {
  Json a = Json::array();
  for (const auto& [lo, hi] : c.intervals) a.push_back(Json::array({lo, hi}));
  return a;
}

std::vector<process::SamplePath> generated_paths(const Json& doc, const Request& r) {
  return process::generate_sinusoid_paths(count_or(doc, "n", 10), number_or(doc, "rate", 10.0), seed_of(doc, r));
}

Report process_eval(const Request& r) {
  const Json& doc = single_input(r);
  const auto paths = read_paths(field(doc, "paths"));
  const auto control = read_control(field(doc, "control"));
  const double theta = number(doc, "theta"), c = number(doc, "c");
  const auto ev = process::evaluate_control(control, paths, theta, c);
  Report rep;
  rep.json = header(r);
  rep.json["value"] = ev.value;
  rep.json["on_cost"] = ev.on_cost;
  rep.json["revenue"] = ev.revenue;
  rep.json["removed"] = ev.removed;
  rep.json["spent"] = ev.transport.spent;
  rep.json["available"] = ev.transport.available;
  Json removals = Json::array();
  rep.columns = {"path", "arrival", "interval", "to_lower", "distance", "fraction"};
  for (const auto& m : ev.transport.removals) {
    removals.push_back({{"path", m.path}, {"arrival", m.arrival}, {"interval", m.interval}, {"to_lower", m.to_lower},
                        {"distance", m.distance}, {"fraction", m.fraction}});
    rep.rows.push_back({double(m.path), double(m.arrival), double(m.interval), m.to_lower ? 1.0 : 0.0, m.distance,
                        m.fraction});
  }
  rep.json["removals"] = removals;
  if (r.check_oracle)
    rep.oracle_gap = std::abs(ev.removed - process::inner_lp_oracle(control, paths, theta, count_or(doc, "oracle_budget", 5000)));
  return rep;
}

Report process_opt(const Request& r) {
  const Json doc = input_or_empty(r);
  const bool generated = !doc.contains("paths");
  const auto paths = generated ? generated_paths(doc, r) : read_paths(doc.at("paths"));
  const double theta = number_or(doc, "theta", 0.01), c = number_or(doc, "c", 10.0);
  process::SearchOptions opt;
  opt.offset_steps = count_or(doc, "offset_steps", opt.offset_steps);
  opt.max_rounds = count_or(doc, "max_rounds", opt.max_rounds);
  if (r.tolerance) opt.min_width = *r.tolerance;
  const auto res = process::optimize_control(paths, theta, c, opt);
  Report rep;
  rep.json = header(r);
  rep.json["value"] = res.value;
  rep.json["saa_value"] = res.saa_value;
  rep.json["control"] = control_json(res.control);
  rep.json["on_length"] = res.control.on_length();
  rep.json["rounds"] = res.rounds;
  rep.json["evaluations"] = res.evaluations;
  if (generated) rep.json["jaccard_to_truth"] = process::jaccard(res.control, process::sinusoid_true_control());
  rep.columns = {"lo", "hi"};
  for (const auto& [lo, hi] : res.control.intervals) rep.rows.push_back({lo, hi});
  if (r.check_oracle) {
    const auto ev = process::evaluate_control(res.control, paths, theta, c);
    rep.oracle_gap = std::abs(ev.removed - process::inner_lp_oracle(res.control, paths, theta, count_or(doc, "oracle_budget", 5000)));
  }
  return rep;
}

Report process_gen(const Request& r) {
  const Json doc = input_or_empty(r);
  const auto paths = generated_paths(doc, r);
  Report rep;
  rep.json = header(r);
  rep.json["paths"] = paths_json(paths);
  rep.json["true_control"] = control_json(process::sinusoid_true_control());
  rep.columns = {"path", "t"};
  for (std::size_t k = 0; k < paths.size(); ++k)
    for (double t : paths[k].arrivals) rep.rows.push_back({double(k), t});
  return rep;
}

// --------------------------------------------------------------------- drtp

Report drtp(const Request& r) {
  const Json& doc = single_input(r);
  const Json& g = field(doc, "grid");
  const std::string kind = text_or(g, "kind", "square");
  auto nominal = read_distribution(field(doc, "nominal"));
  const double theta = number(doc, "theta"), p = number_or(doc, "p", 1.0);
  const std::size_t n = count_or(g, "n", 50);
  ContinuumInstance inst = [&] {
    if (kind == "square") return square_grid_instance(number_or(g, "lo", 0.0), number_or(g, "hi", 1.0), n, nominal, theta, p);
    if (kind == "disc") {
      const auto center = numbers(field(g, "center"), "grid.center");
      return disc_grid_instance(center, number(g, "radius"), n, nominal, theta, p);
    }
    schema_error("grid.kind must be square or disc");
  }();
  DrtpOptions opt;
  opt.max_iterations = count_or(doc, "max_iterations", opt.max_iterations);
  if (r.tolerance) opt.gradient_tolerance = *r.tolerance;
  const auto res = drtp_solve(inst, opt);
  Report rep;
  rep.json = header(r);
  rep.json["value"] = res.value;
  rep.json["primal_value"] = res.primal_value;
  rep.json["gap"] = res.gap;
  rep.json["lambda_star"] = res.lambda_star;
  rep.json["v_star"] = to_json(res.v_star);
  rep.json["integral"] = res.integral;
  rep.json["transport_cost"] = res.transport_cost;
  rep.json["assignment_cost"] = res.assignment_cost;
  rep.json["iterations"] = res.iterations;
  rep.columns = {"x", "y", "area", "f"};
  for (std::size_t k = 0; k < inst.grid->size(); ++k) {
    const auto x = inst.grid->point(k);
    rep.rows.push_back({x[0], x[1], inst.areas[k], res.f_star[k]});
  }
  if (r.check_oracle) rep.oracle_gap = std::abs(res.gap);
  return rep;
}

// ---------------------------------------------------------------------- phi

Report phi_compare_cmd(const Request& r) {
  const Json doc = input_or_empty(r);
  PhiCompareOptions o;
  o.shape = text_or(doc, "shape", o.shape);
  o.B = count_or(doc, "B", o.B);
  o.n = count_or(doc, "n", o.n);
  o.seed = seed_of(doc, r);
  o.h = number_or(doc, "h", o.h);
  o.b = number_or(doc, "b", o.b);
  if (doc.contains("wasserstein_theta")) o.wasserstein_theta = number(doc, "wasserstein_theta");
  o.phi_theta = number_or(doc, "phi_theta", o.phi_theta);
  const auto res = phi_compare(o);
  Report rep;
  rep.json = header(r);
  rep.json["seed"] = o.seed;
  rep.json["wasserstein_theta"] = res.wasserstein_theta;
  rep.json["x"] = {{"wasserstein", res.x_wasserstein}, {"burg", res.x_burg}, {"kl", res.x_kl}};
  rep.json["value"] = {{"wasserstein", res.v_wasserstein}, {"burg", res.v_burg}, {"kl", res.v_kl}};
  rep.json["kl_absolutely_continuous"] = res.kl_absolutely_continuous;
  rep.json["burg_single_pop"] = res.burg_single_pop;
  rep.json["burg_pop"] = res.burg_pop ? Json(*res.burg_pop) : Json(nullptr);
  rep.columns = {"bin", "q", "p*_wasserstein", "p*_burg", "p*_kl"};
  for (const auto& row : res.rows) rep.rows.push_back({double(row.bin), row.q, row.p_wasserstein, row.p_burg, row.p_kl});
  if (r.check_oracle) {
    const auto samples = demand_samples(o.shape, o.B, o.n, o.seed);
    const auto inst = newsvendor_from_samples(samples, o.B, o.h, o.b, res.wasserstein_theta, 1.0);
    rep.oracle_gap = std::abs(res.v_wasserstein - newsvendor_oracle(inst, res.x_wasserstein));
  }
  return rep;
}

Report calibrate(const Request& r) {
  const Json doc = input_or_empty(r);
  const double B = number_or(doc, "B", 100.0);
  std::vector<double> samples;
  if (doc.contains("samples")) {
    samples = numbers(doc.at("samples"), "samples");
  } else {
    samples = demand_samples(text_or(doc, "shape", "binomial"), static_cast<std::size_t>(B), count_or(doc, "n", 500),
                             seed_of(doc, r));
  }
  const double target = number_or(doc, "target", 0.05);
  const auto res = calibrate_radius(samples, B, target);
  Report rep;
  rep.json = header(r);
  rep.json["theta"] = res.theta;
  rep.json["delta"] = res.delta;
  rep.json["lambda"] = res.lambda;
  rep.json["bound"] = res.bound;
  rep.json["target"] = target;
  rep.columns = {"theta", "bound"};
  for (const auto& [t, b] : res.curve) rep.rows.push_back({t, b});
  if (r.check_oracle) rep.oracle_gap = std::abs(res.bound - target);
  return rep;
}

using Handler = std::function<Report(const Request&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"wasserstein", wasserstein},   {"dual-solve", dual_solve},     {"worst-case", worst_case},
      {"oracle", oracle},             {"newsvendor", newsvendor},     {"uq", uq},
      {"var", var},                   {"affine", affine},             {"process-eval", process_eval},
      {"process-opt", process_opt},   {"process-gen", process_gen},   {"drtp", drtp},
      {"phi-compare", phi_compare_cmd}, {"calibrate", calibrate},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

Report run(const Request& request) {
  const auto it = handlers().find(request.command);
  if (it == handlers().end()) fail(ErrorCode::kInvalidArgument, "unknown subcommand '" + request.command + "'");
  Report rep = it->second(request);
  if (rep.oracle_gap) rep.json["oracle_gap"] = *rep.oracle_gap;
  return rep;
}

}  // namespace drso::service
