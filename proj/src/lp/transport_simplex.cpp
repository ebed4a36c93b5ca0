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

#include "drso/error.hpp"
#include "drso/lp.hpp"

namespace drso::lp {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Basis tree over m row nodes and n column nodes (column node id = m + j).
struct BasisTree {
  std::size_t m, n;
  std::vector<TransportCell> cells;
  std::vector<std::vector<std::size_t>> adj;  // node -> cell positions

  void rebuild_adjacency() {
    adj.assign(m + n, {});
    for (std::size_t k = 0; k < cells.size(); ++k) {
      adj[cells[k].row].push_back(k);
      adj[m + cells[k].col].push_back(k);
    }
  }

  std::size_t other(std::size_t k, std::size_t node) const {
    return node < m ? m + cells[k].col : cells[k].row;
  }

  // u_i + v_j = c_ij on every basic cell, with u_0 = 0.
  void potentials(std::span<const double> cost, std::vector<double>& u, std::vector<double>& v) const {
    std::vector<double> pot(m + n, 0.0);
    std::vector<char> seen(m + n, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::size_t node = queue[h];
      for (std::size_t k : adj[node]) {
        const std::size_t nb = other(k, node);
        if (seen[nb]) continue;
        seen[nb] = 1;
        pot[nb] = cost[cells[k].row * n + cells[k].col] - pot[node];
        queue.push_back(nb);
      }
    }
    u.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(m));
    v.assign(pot.begin() + static_cast<std::ptrdiff_t>(m), pot.end());
  }

  // Cell positions on the tree path from row node `from` to column node `to`.
  std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> via(m + n, kNone);
    std::vector<char> seen(m + n, 0);
    std::vector<std::size_t> queue{from};
    seen[from] = 1;
    for (std::size_t h = 0; h < queue.size() && !seen[to]; ++h) {
      const std::size_t node = queue[h];
      for (std::size_t k : adj[node]) {
        const std::size_t nb = other(k, node);
        if (seen[nb]) continue;
        seen[nb] = 1;
        via[nb] = k;
        queue.push_back(nb);
      }
    }
    if (!seen[to]) fail(ErrorCode::kNumerical, "transportation basis is not a spanning tree");
    std::vector<std::size_t> out;
    for (std::size_t node = to; node != from;) {
      const std::size_t k = via[node];
      out.push_back(k);
      node = other(k, node);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace

TransportResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                std::span<const double> cost) {
  const std::size_t m = supply.size(), n = demand.size();
  require(m > 0 && n > 0, "transportation problem needs nonempty supply and demand");
  require(cost.size() == m * n, "cost matrix must be supply x demand");
  const double ts = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double td = std::accumulate(demand.begin(), demand.end(), 0.0);
  require(std::abs(ts - td) <= 1e-9 * std::max(1.0, ts), "transportation problem is unbalanced");

  // North-west corner start: exactly m + n - 1 cells.
  BasisTree tree{m, n, {}, {}};
  std::vector<double> a(supply.begin(), supply.end()), b(demand.begin(), demand.end());
  b[n - 1] += ts - td;
  for (std::size_t i = 0, j = 0;;) {
    const double x = std::max(0.0, std::min(a[i], b[j]));
    tree.cells.push_back({i, j, x});
    a[i] -= x;
    b[j] -= x;
    if (i == m - 1 && j == n - 1) break;
    if (j == n - 1 || (i < m - 1 && a[i] <= b[j]))
      ++i;
    else
      ++j;
  }
  tree.rebuild_adjacency();

  double scale = 0.0;
  for (double c : cost) scale = std::max(scale, std::abs(c));
  const double tol = 1e-12 * std::max(1.0, scale);

  TransportResult res;
  std::vector<double> u, v;
  std::vector<char> basic(m * n, 0);
  for (const auto& c : tree.cells) basic[c.row * n + c.col] = 1;
  const std::size_t max_iter = 50 * (m + n) * (m + n) + 1000;
  while (true) {
    tree.potentials(cost, u, v);
    // Bland: first nonbasic cell in row-major order with negative reduced cost.
    std::size_t enter = kNone;
    for (std::size_t i = 0; i < m && enter == kNone; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t id = i * n + j;
        if (!basic[id] && cost[id] - u[i] - v[j] < -tol) {
          enter = id;
          break;
        }
      }
    }
    if (enter == kNone) break;
    if (++res.iterations > max_iter) fail(ErrorCode::kNumerical, "transportation simplex did not converge");
    const std::size_t ei = enter / n, ej = enter % n;
    // Cycle: entering (+), then alternating -, + along the tree path.
    const auto cyc = tree.path(ei, m + ej);
    // Path from row ei to column ej starts with a cell in row ei: that cell is
    // the first "-" position.
    std::size_t leave = kNone;
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cyc.size(); k += 2) {
      const auto& c = tree.cells[cyc[k]];
      const std::size_t id = c.row * n + c.col;
      if (c.flow < step || (c.flow == step && id < tree.cells[leave].row * n + tree.cells[leave].col)) {
        step = c.flow;
        leave = cyc[k];
      }
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      auto& c = tree.cells[cyc[k]];
      c.flow += (k % 2 == 0) ? -step : step;
      if (c.flow < 0.0) c.flow = 0.0;
    }
    auto& lc = tree.cells[leave];
    basic[lc.row * n + lc.col] = 0;
    lc = {ei, ej, step};
    basic[enter] = 1;
    tree.rebuild_adjacency();
  }
  for (const auto& c : tree.cells) res.cost += c.flow * cost[c.row * n + c.col];
  res.basis = std::move(tree.cells);
  return res;
}

}  // namespace drso::lp
