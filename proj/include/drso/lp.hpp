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

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace drso::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Constraint {
  std::vector<std::pair<std::size_t, double>> terms;  // (variable, coefficient)
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

/// Optimizes objective . x subject to the constraints and x >= 0.
struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  bool maximize = false;
  std::vector<Constraint> constraints;
};

struct Solution {
  Status status = Status::kIterationLimit;
  double value = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

struct Options {
  double pivot_tolerance = 1e-11;
  double cost_tolerance = 1e-11;
  std::size_t max_iterations = 1'000'000;
};

/// Dense two-phase tableau simplex with Bland's rule.
Solution solve(const Problem& problem, const Options& options = {});

struct TransportCell {
  std::size_t row;
  std::size_t col;
  double flow;
};

struct TransportResult {
  std::vector<TransportCell> basis;  // m + n - 1 cells, degenerate zeros included
  double cost = 0.0;
  std::size_t iterations = 0;
};

/// Balanced transportation problem min sum c_ij x_ij, row sums = supply,
/// column sums = demand. `cost` is row-major m x n. Supply and demand totals
/// must agree; the last demand entry absorbs rounding differences.
TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost);

}  // namespace drso::lp
