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

#include "drso/error.hpp"
#include "drso/lp.hpp"

namespace drso::lp {
namespace {

// Row-major tableau. Column `width - 1` holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t width) : rows_(rows), width_(width), data_(rows * width, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double* row(std::size_t r) { return data_.data() + r * width_; }
  std::size_t rows() const { return rows_; }
  std::size_t width() const { return width_; }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = row(pr);
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* rr = row(r);
      const double f = rr[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) rr[c] -= f * prow[c];
      rr[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_, width_;
  std::vector<double> data_;
};

// Minimizes the objective held in row `obj` (reduced costs; rhs column holds
// minus the current value) over columns [0, active_cols). Rows other than the
// objective rows are constraints with basis[r].
Status run_simplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t first_row, std::size_t obj,
                   std::size_t active_cols, const Options& opt, std::size_t& iterations) {
  const std::size_t rhs = t.width() - 1;
  while (true) {
    if (iterations >= opt.max_iterations) return Status::kIterationLimit;
    std::size_t enter = active_cols;
    for (std::size_t c = 0; c < active_cols; ++c) {
      if (t.at(obj, c) < -opt.cost_tolerance) {
        enter = c;
        break;
      }
    }
    if (enter == active_cols) return Status::kOptimal;
    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = first_row; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tolerance) continue;
      const double ratio = std::max(t.at(r, rhs), 0.0) / a;
      if (leave == t.rows()) {
        leave = r;
        best = ratio;
        continue;
      }
      const double tie = 1e-14 * std::max(1.0, best);
      if (ratio < best - tie) {
        leave = r;
        best = ratio;
      } else if (ratio <= best + tie && basis[r] < basis[leave]) {
        leave = r;
      }
    }
    if (leave == t.rows()) return Status::kUnbounded;
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace

Solution solve(const Problem& problem, const Options& opt) {
  const std::size_t n = problem.num_vars;
  require(problem.objective.size() == n, "objective length must equal the variable count");
  const std::size_t m = problem.constraints.size();

  // Normalize rows to nonnegative right-hand sides.
  struct Row {
    std::vector<double> coef;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(m);
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& con : problem.constraints) {
    Row r{std::vector<double>(n, 0.0), con.sense, con.rhs};
    for (const auto& [j, a] : con.terms) {
      require(j < n, "constraint references an unknown variable");
      r.coef[j] += a;
    }
    if (r.rhs < 0.0) {
      for (auto& a : r.coef) a = -a;
      r.rhs = -r.rhs;
      if (r.sense == Sense::kLessEqual)
        r.sense = Sense::kGreaterEqual;
      else if (r.sense == Sense::kGreaterEqual)
        r.sense = Sense::kLessEqual;
    }
    if (r.sense != Sense::kEqual) ++n_slack;
    if (r.sense != Sense::kLessEqual) ++n_art;
    rows.push_back(std::move(r));
  }

  // Columns: structural | slack/surplus | artificial | rhs.
  const std::size_t art0 = n + n_slack;
  const std::size_t width = art0 + n_art + 1;
  const std::size_t rhs = width - 1;
  // Row 0: phase-2 objective, row 1: phase-1 objective, rows 2..: constraints.
  Tableau t(m + 2, width);
  std::vector<std::size_t> basis(m + 2, 0);
  std::size_t slack = n, art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = i + 2;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = rows[i].coef[j];
    t.at(r, rhs) = rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::kLessEqual:
        t.at(r, slack) = 1.0;
        basis[r] = slack++;
        break;
      case Sense::kGreaterEqual:
        t.at(r, slack++) = -1.0;
        t.at(r, art) = 1.0;
        basis[r] = art++;
        break;
      case Sense::kEqual:
        t.at(r, art) = 1.0;
        basis[r] = art++;
        break;
    }
  }
  const double sign = problem.maximize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) t.at(0, j) = sign * problem.objective[j];
  // Phase-1 objective: sum of artificials, expressed in nonbasic terms.
  for (std::size_t r = 2; r < m + 2; ++r) {
    if (basis[r] < art0) continue;
    for (std::size_t c = 0; c < width; ++c)
      if (c < art0 || c == rhs) t.at(1, c) -= t.at(r, c);
  }

  Solution sol;
  if (n_art > 0) {
    const Status s1 = run_simplex(t, basis, 2, 1, art0, opt, sol.iterations);
    if (s1 == Status::kIterationLimit) {
      sol.status = s1;
      return sol;
    }
    double scale = 1.0;
    for (const auto& r : rows) scale = std::max(scale, r.rhs);
    if (-t.at(1, rhs) > 1e-9 * scale) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive remaining zero-level artificials out of the basis where possible.
    for (std::size_t r = 2; r < m + 2; ++r) {
      if (basis[r] < art0) continue;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(t.at(r, c)) > 1e-9) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }
  // Express the phase-2 objective in terms of the nonbasic variables.
  for (std::size_t r = 2; r < m + 2; ++r) {
    const std::size_t b = basis[r];
    if (b >= art0) continue;  // redundant row; its artificial stays at zero
    const double f = t.at(0, b);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c < width; ++c) t.at(0, c) -= f * t.at(r, c);
    t.at(0, b) = 0.0;
  }
  // Artificials still basic belong to redundant rows; keep them from moving by
  // excluding their columns from entering (active_cols = art0).
  sol.status = run_simplex(t, basis, 2, 0, art0, opt, sol.iterations);
  if (sol.status != Status::kOptimal) return sol;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 2; r < m + 2; ++r)
    if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, t.at(r, rhs));
  double v = 0.0;
  for (std::size_t j = 0; j < n; ++j) v += problem.objective[j] * sol.x[j];
  sol.value = v;
  return sol;
}

}  // namespace drso::lp
