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
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "drso/error.hpp"
#include "drso/lp.hpp"
#include "drso/process.hpp"

namespace drso::process {

double ControlPolicy::on_length() const {
  double s = 0.0;
  for (const auto& [lo, hi] : intervals) s += hi - lo;
  return s;
}

std::optional<std::size_t> ControlPolicy::find(double t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](double x, const std::pair<double, double>& iv) { return x < iv.first; });
  if (it == intervals.begin()) return std::nullopt;
  --it;
  if (t <= it->second) return static_cast<std::size_t>(it - intervals.begin());
  return std::nullopt;
}

void validate(const ControlPolicy& control) {
  double prev = -1.0;
  for (const auto& [lo, hi] : control.intervals) {
    require(std::isfinite(lo) && std::isfinite(hi) && 0.0 <= lo && lo < hi && hi <= 1.0,
            "control intervals need 0 <= lo < hi <= 1");
    require(lo > prev, "control intervals must be sorted with strict gaps");
    prev = hi;
  }
}

void validate(const std::vector<SamplePath>& paths) {
  require(!paths.empty(), "at least one sample path is required");
  for (const auto& p : paths) {
    require(std::is_sorted(p.arrivals.begin(), p.arrivals.end()), "arrival times must be sorted");
    for (double t : p.arrivals) require(std::isfinite(t) && t >= 0.0 && t <= 1.0, "arrival times must lie in [0, 1]");
  }
}

namespace {

struct Inside {
  std::size_t path, arrival, interval;
  bool to_lower;
  double d_lower, d_upper;
  double d() const { return to_lower ? d_lower : d_upper; }
};

std::vector<Inside> inside_arrivals(const ControlPolicy& control, const std::vector<SamplePath>& paths) {
  std::vector<Inside> out;
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t t = 0; t < paths[i].arrivals.size(); ++t) {
      const double x = paths[i].arrivals[t];
      if (const auto j = control.find(x)) {
        const auto [lo, hi] = control.intervals[*j];
        out.push_back({i, t, *j, x - lo <= hi - x, x - lo, hi - x});
      }
    }
  return out;
}

}  // namespace

Evaluation evaluate_control(const ControlPolicy& control, const std::vector<SamplePath>& paths, double theta,
                            double cost_rate) {
  validate(control);
  validate(paths);
  require(theta >= 0.0 && std::isfinite(theta), "theta must be nonnegative");
  require(cost_rate >= 0.0 && std::isfinite(cost_rate), "cost rate must be nonnegative");
  const double N = double(paths.size());
  auto in = inside_arrivals(control, paths);
  std::stable_sort(in.begin(), in.end(), [](const Inside& a, const Inside& b) { return a.d() < b.d(); });
  Evaluation ev;
  ev.on_cost = cost_rate * control.on_length();
  ev.revenue = double(in.size()) / N;
  const double budget = N * theta;
  double removed = 0.0;
  for (const auto& a : in) ev.transport.available += a.d();
  for (const auto& a : in) {
    if (!(ev.transport.spent < budget)) break;
    const double d = a.d();
    const double f = d > 0.0 ? std::min(1.0, (budget - ev.transport.spent) / d) : 1.0;
    ev.transport.spent = f < 1.0 ? budget : ev.transport.spent + d;
    removed += f;
    ev.transport.removals.push_back({a.path, a.arrival, a.interval, a.to_lower, d, f});
  }
  ev.removed = removed / N;
  ev.value = -ev.on_cost + ev.revenue - ev.removed;
  return ev;
}

double inner_lp_oracle(const ControlPolicy& control, const std::vector<SamplePath>& paths, double theta,
                       std::size_t budget) {
  validate(control);
  validate(paths);
  require(theta >= 0.0, "theta must be nonnegative");
  const auto in = inside_arrivals(control, paths);
  if (in.empty()) return 0.0;
  if (2 * in.size() > budget) fail(ErrorCode::kBudgetExceeded, "process LP exceeds the decision budget");
  const double N = double(paths.size());
  lp::Problem P;
  P.num_vars = 2 * in.size();
  P.maximize = true;
  P.objective.assign(P.num_vars, 1.0 / N);
  lp::Constraint spend;
  spend.rhs = theta;
  for (std::size_t k = 0; k < in.size(); ++k) {
    P.constraints.push_back({{{2 * k, 1.0}, {2 * k + 1, 1.0}}, lp::Sense::kLessEqual, 1.0});
    spend.terms.push_back({2 * k, in[k].d_lower / N});
    spend.terms.push_back({2 * k + 1, in[k].d_upper / N});
  }
  P.constraints.push_back(std::move(spend));
  const auto sol = lp::solve(P);
  if (sol.status != lp::Status::kOptimal) fail(ErrorCode::kNumerical, "process LP did not reach optimality");
  return sol.value;
}

std::size_t thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DRSO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

using Intervals = std::vector<std::pair<double, double>>;

// Sorts, clamps and merges overlapping or touching intervals.
ControlPolicy normalize(Intervals iv) {
  for (auto& [lo, hi] : iv) {
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
  }
  std::sort(iv.begin(), iv.end());
  ControlPolicy out;
  for (const auto& [lo, hi] : iv) {
    if (!(hi > lo)) continue;
    if (!out.intervals.empty() && lo <= out.intervals.back().second)
      out.intervals.back().second = std::max(out.intervals.back().second, hi);
    else
      out.intervals.push_back({lo, hi});
  }
  return out;
}

std::pair<double, double> micro(double x, double width) { return {x - 0.5 * width, x + 0.5 * width}; }

// Best theta = 0 control with endpoints on data points, by dynamic programming.
ControlPolicy saa_start(const std::vector<double>& pts, const std::vector<double>& count, double N, double c,
                        double width) {
  const std::size_t P = pts.size();
  std::vector<double> prefix(P + 1, 0.0), best(P + 1, 0.0);
  for (std::size_t k = 0; k < P; ++k) prefix[k + 1] = prefix[k] + count[k];
  std::vector<std::size_t> from(P + 1, 0);  // 0: no interval ends here
  for (std::size_t b = 1; b <= P; ++b) {
    best[b] = best[b - 1];
    for (std::size_t a = 1; a <= b; ++a) {
      const double len = a == b ? width : pts[b - 1] - pts[a - 1];
      const double v = best[a - 1] + (prefix[b] - prefix[a - 1]) / N - c * len;
      if (v > best[b]) {
        best[b] = v;
        from[b] = a;
      }
    }
  }
  Intervals iv;
  for (std::size_t b = P; b > 0;) {
    if (from[b] == 0) {
      --b;
      continue;
    }
    const std::size_t a = from[b];
    iv.push_back(a == b ? micro(pts[a - 1], width) : std::make_pair(pts[a - 1], pts[b - 1]));
    b = a - 1;
  }
  return normalize(std::move(iv));
}

// Best control when every interval faces the whole adversary budget on its
// own; a conservative separable surrogate used as a second starting point.
ControlPolicy separable_start(const std::vector<double>& all, const std::vector<double>& ends, double N, double theta,
                              double c) {
  const std::size_t E = ends.size();
  const double budget = N * theta;
  std::vector<double> best(E + 1, 0.0);
  std::vector<std::size_t> from(E + 1, 0);
  std::vector<double> d;
  for (std::size_t b = 1; b <= E; ++b) {
    best[b] = best[b - 1];
    for (std::size_t a = 1; a < b; ++a) {
      const double lo = ends[a - 1], hi = ends[b - 1];
      auto first = std::lower_bound(all.begin(), all.end(), lo);
      auto last = std::upper_bound(all.begin(), all.end(), hi);
      d.clear();
      for (auto it = first; it != last; ++it) d.push_back(std::min(*it - lo, hi - *it));
      std::sort(d.begin(), d.end());
      double spent = 0.0, removed = 0.0;
      for (double x : d) {
        if (!(spent < budget)) break;
        const double f = x > 0.0 ? std::min(1.0, (budget - spent) / x) : 1.0;
        spent = f < 1.0 ? budget : spent + x;
        removed += f;
      }
      // a - 1 ends strictly before lo, so the gap to the previous interval stays open
      const std::size_t prev = a >= 2 ? a - 1 : 0;
      const double v = best[prev] + (double(d.size()) - removed) / N - c * (hi - lo);
      if (v > best[b]) {
        best[b] = v;
        from[b] = a;
      }
    }
  }
  Intervals iv;
  for (std::size_t b = E; b > 0;) {
    if (from[b] == 0) {
      --b;
      continue;
    }
    iv.push_back({ends[from[b] - 1], ends[b - 1]});
    b = from[b] >= 2 ? from[b] - 1 : 0;
  }
  return normalize(std::move(iv));
}


struct Climb {
  ControlPolicy control;
  double value = 0.0;
  std::size_t rounds = 0, evaluations = 0;
};

// Best-improvement local search over endpoint moves, drops, merges and
// micro-interval additions. Ties go to the lowest move id.
Climb climb(ControlPolicy cur, const std::vector<double>& pts, const std::vector<double>& cand,
            const std::vector<SamplePath>& paths, double theta, double cost_rate, const SearchOptions& options,
            std::size_t threads) {
  auto value = [&](const ControlPolicy& c) { return evaluate_control(c, paths, theta, cost_rate).value; };
  Climb out;
  double cur_v = value(cur);
  for (; out.rounds < options.max_rounds; ++out.rounds) {
    std::vector<Intervals> moves;
    const auto& iv = cur.intervals;
    const std::size_t M = iv.size();
    for (std::size_t j = 0; j < M; ++j) {
      const double left = j ? iv[j - 1].second : -1.0;
      const double right = j + 1 < M ? iv[j + 1].first : 2.0;
      for (double e : cand) {
        if (e > left && e < iv[j].second && e != iv[j].first) {
          moves.push_back(iv);
          moves.back()[j].first = e;
        }
        if (e > iv[j].first && e < right && e != iv[j].second) {
          moves.push_back(iv);
          moves.back()[j].second = e;
        }
      }
      Intervals drop(iv);
      drop.erase(drop.begin() + static_cast<std::ptrdiff_t>(j));
      moves.push_back(std::move(drop));
      if (j + 1 < M) {
        Intervals merged(iv);
        merged[j].second = merged[j + 1].second;
        merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(j + 1));
        moves.push_back(std::move(merged));
      }
    }
    for (double x : pts) {
      if (cur.find(x)) continue;
      Intervals add(iv);
      add.push_back(micro(x, options.min_width));
      moves.push_back(std::move(add));
    }

    std::vector<double> vals(moves.size());
    std::vector<ControlPolicy> normalized(moves.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        normalized[k] = normalize(moves[k]);
        vals[k] = value(normalized[k]);
      }
    };
    const std::size_t T = std::min(threads, std::max<std::size_t>(1, moves.size() / 64));
    if (T <= 1) {
      work(0, moves.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (moves.size() + T - 1) / T;
      for (std::size_t t = 0; t < T; ++t)
        pool.emplace_back(work, std::min(moves.size(), t * chunk), std::min(moves.size(), (t + 1) * chunk));
      for (auto& th : pool) th.join();
    }
    out.evaluations += moves.size();
    std::size_t best = moves.size();
    for (std::size_t k = 0; k < moves.size(); ++k)
      if (best == moves.size() ? vals[k] > cur_v : vals[k] > vals[best]) best = k;
    if (best == moves.size() || vals[best] <= cur_v + 1e-12 * std::max(1.0, std::abs(cur_v))) break;
    cur = std::move(normalized[best]);
    cur_v = vals[best];
  }
  out.control = std::move(cur);
  out.value = cur_v;
  return out;
}

}  // namespace

SearchResult optimize_control(const std::vector<SamplePath>& paths, double theta, double cost_rate,
                              const SearchOptions& options) {
  validate(paths);
  require(theta >= 0.0 && cost_rate >= 0.0, "theta and cost rate must be nonnegative");
  require(options.min_width > 0.0, "micro-interval width must be positive");
  std::vector<double> all;
  for (const auto& p : paths) all.insert(all.end(), p.arrivals.begin(), p.arrivals.end());
  require(!all.empty(), "the sample paths contain no arrivals");
  std::sort(all.begin(), all.end());
  std::vector<double> pts, count;
  for (double t : all) {
    if (pts.empty() || t != pts.back()) {
      pts.push_back(t);
      count.push_back(0.0);
    }
    count.back() += 1.0;
  }
  const double N = double(paths.size());

  std::vector<double> cand{0.0, 1.0};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t s = 0; s <= (theta > 0.0 ? options.offset_steps : 0); ++s) {
      cand.push_back(pts[k] - double(s) * theta);
      cand.push_back(pts[k] + double(s) * theta);
    }
    cand.push_back(pts[k] - 0.5 * options.min_width);
    cand.push_back(pts[k] + 0.5 * options.min_width);
    if (k + 1 < pts.size()) cand.push_back(0.5 * (pts[k] + pts[k + 1]));
  }
  for (double& x : cand) x = std::clamp(x, 0.0, 1.0);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // Starts: the theta = 0 optimum and the separable robust surrogate.
  std::vector<ControlPolicy> starts{saa_start(pts, count, N, cost_rate, options.min_width)};
  if (theta > 0.0) {
    std::vector<double> ends;
    for (std::size_t k = 0; k < pts.size(); ++k)
      for (double off : {0.0, theta, 2.0 * theta}) {
        ends.push_back(std::clamp(pts[k] - off, 0.0, 1.0));
        ends.push_back(std::clamp(pts[k] + off, 0.0, 1.0));
      }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    // The budget is shared across intervals, so also try smaller shares.
    for (double share : {1.0, 0.5, 0.25, 0.125}) starts.push_back(separable_start(all, ends, N, share * theta, cost_rate));
  }
  const std::size_t threads = thread_count(options.threads);
  SearchResult res;
  res.saa_value = evaluate_control(starts[0], paths, theta, cost_rate).value;
  std::optional<Climb> best;
  for (auto& s : starts) {
    Climb c = climb(std::move(s), pts, cand, paths, theta, cost_rate, options, threads);
    res.rounds += c.rounds;
    res.evaluations += c.evaluations;
    if (!best || c.value > best->value) best = std::move(c);
  }

  // Intervals without data points only cost money.
  ControlPolicy pruned;
  for (const auto& [lo, hi] : best->control.intervals) {
    auto it = std::lower_bound(pts.begin(), pts.end(), lo);
    if (it != pts.end() && *it <= hi) pruned.intervals.push_back({lo, hi});
  }
  res.control = std::move(pruned);
  res.value = evaluate_control(res.control, paths, theta, cost_rate).value;
  return res;
}

double sinusoid_density(double t) { return (1.1 + std::cos(5.0 * M_PI * t)) / 1.1; }

ControlPolicy sinusoid_true_control() { return {{{0.0, 0.1}, {0.3, 0.5}, {0.7, 0.9}}}; }

std::vector<SamplePath> generate_sinusoid_paths(std::size_t n, double rate, std::uint64_t seed) {
  require(n >= 1 && rate > 0.0, "generator needs n >= 1 and a positive rate");
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> count(rate);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double bound = 2.1 / 1.1;
  std::vector<SamplePath> out(n);
  for (auto& p : out) {
    const int m = count(rng);
    while (p.arrivals.size() < static_cast<std::size_t>(m)) {
      const double t = U(rng);
      if (U(rng) * bound <= sinusoid_density(t)) p.arrivals.push_back(t);
    }
    std::sort(p.arrivals.begin(), p.arrivals.end());
  }
  return out;
}

double jaccard(const ControlPolicy& a, const ControlPolicy& b) {
  double inter = 0.0;
  for (const auto& [l1, h1] : a.intervals)
    for (const auto& [l2, h2] : b.intervals) inter += std::max(0.0, std::min(h1, h2) - std::max(l1, l2));
  const double uni = a.on_length() + b.on_length() - inter;
  return uni > 0.0 ? inter / uni : 1.0;
}

}  // namespace drso::process
