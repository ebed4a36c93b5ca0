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
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace drso::process {

/// Arrival times of one realization on [0, 1], sorted ascending.
struct SamplePath {
  std::vector<double> arrivals;
};

/// On-intervals [lo, hi], sorted, with strict gaps between them.
struct ControlPolicy {
  std::vector<std::pair<double, double>> intervals;

  double on_length() const;
  /// Index of the interval containing t, if any.
  std::optional<std::size_t> find(double t) const;
};

void validate(const ControlPolicy& control);
void validate(const std::vector<SamplePath>& paths);

struct Removal {
  std::size_t path;
  std::size_t arrival;
  std::size_t interval;
  bool to_lower;       // exits through lo (otherwise hi)
  double distance;
  double fraction;     // share of the arrival removed, in [0, 1]
};

struct GreedyTransport {
  std::vector<Removal> removals;  // only entries with fraction > 0
  double spent = 0.0;             // sum of fraction * distance (undivided by N)
  double available = 0.0;         // sum of all exit distances
};

struct Evaluation {
  double value = 0.0;
  double on_cost = 0.0;       // c * on-length
  double revenue = 0.0;       // in-interval arrivals / N
  double removed = 0.0;       // removed revenue / N
  GreedyTransport transport;
};

/// Worst-case profit of a control via the greedy inner algorithm.
Evaluation evaluate_control(const ControlPolicy& control, const std::vector<SamplePath>& paths, double theta,
                            double cost_rate);

/// Removed revenue from the dense LP over lower/upper exit fractions.
double inner_lp_oracle(const ControlPolicy& control, const std::vector<SamplePath>& paths, double theta,
                       std::size_t budget = 5000);

struct SearchOptions {
  std::size_t offset_steps = 4;    // candidate offsets k * theta, k <= offset_steps
  std::size_t max_rounds = 200;
  std::size_t threads = 0;         // 0: DRSO_THREADS or hardware concurrency
  double min_width = 1e-6;         // width of a micro-interval around a single point
};

struct SearchResult {
  ControlPolicy control;
  double value = 0.0;
  double saa_value = 0.0;          // worst-case value of the starting control
  std::size_t rounds = 0;
  std::size_t evaluations = 0;
};

/// Heuristic local search over interval controls with data-driven endpoints.
SearchResult optimize_control(const std::vector<SamplePath>& paths, double theta, double cost_rate,
                              const SearchOptions& options = {});

/// Intensity shape (1.1 + cos(5 pi t)) / 1.1 on [0, 1].
double sinusoid_density(double t);
/// The region {10 f(t) > 10}: [0, 0.1] u [0.3, 0.5] u [0.7, 0.9].
ControlPolicy sinusoid_true_control();

/// N paths with Poisson(rate) arrivals i.i.d. from sinusoid_density.
std::vector<SamplePath> generate_sinusoid_paths(std::size_t n, double rate, std::uint64_t seed);

/// Lebesgue Jaccard index of two controls' on-sets.
double jaccard(const ControlPolicy& a, const ControlPolicy& b);

std::size_t thread_count(std::size_t requested);

}  // namespace drso::process
