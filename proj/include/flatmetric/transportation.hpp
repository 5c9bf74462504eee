// Copyright 2026 The flatmetric Authors
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

#ifndef FLATMETRIC_TRANSPORTATION_HPP_
#define FLATMETRIC_TRANSPORTATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatmetric {

// Balanced transportation problem on an explicit bipartite arc set:
//   min sum_e cost_e * x_e
//   s.t. sum over arcs leaving row r of x   == supply[r]
//        sum over arcs entering col c of x  == demand[c]
//        x >= 0
// sum(supply) must equal sum(demand) and initial_basis must list
// rows+cols-1 arc indices forming a spanning tree whose unique flow
// assignment is nonnegative (the caller owns that construction).
struct BalancedTransportProblem {
  struct Arc {
    int32_t row;
    int32_t col;
    double cost;
  };
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<Arc> arcs;
  std::vector<int32_t> initial_basis;
};

// Optimal basic solution. Potentials satisfy u[row] + v[col] == cost exactly
// on basic arcs and u[row] + v[col] <= cost + tolerance on all arcs.
struct BalancedTransportSolution {
  double cost = 0.0;
  std::vector<double> flow;
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  std::int64_t pivots = 0;
};

namespace internal {

// Primal network simplex specialized to bipartite transportation graphs.
// Entering arc: most negative reduced cost, lowest arc index on ties; a run
// of degenerate pivots switches to Bland's rule (first improving index)
// until a nondegenerate pivot happens, which excludes cycling. Flows are
// recomputed from scratch on the final tree so the reported solution does
// not accumulate pivot-update roundoff.
class NetworkSimplex {
 public:
  explicit NetworkSimplex(const BalancedTransportProblem& p)
      : p_(p),
        n_rows_(p.supply.size()),
        n_cols_(p.demand.size()),
        n_nodes_(n_rows_ + n_cols_) {}

  BalancedTransportSolution Solve() {
    Validate();
    BuildInitialTree();
    RecomputeTreeLabels();
    RecomputeTreeFlows(/*require_feasible=*/true);

    const double tol = PivotTolerance();
    const std::int64_t pivot_cap =
        4096 + 64 * static_cast<std::int64_t>(n_nodes_ + p_.arcs.size());
    std::int64_t pivots = 0;
    int degenerate_run = 0;
    bool bland = false;

    for (;;) {
      const int32_t entering = SelectEntering(tol, bland);
      if (entering < 0) break;
      if (++pivots > pivot_cap) {
        throw std::logic_error("NetworkSimplex: pivot cap exceeded");
      }
      const double delta = Pivot(entering);
      if (delta > 0.0) {
        degenerate_run = 0;
        bland = false;
      } else if (!bland && ++degenerate_run > 2 * static_cast<int>(n_nodes_)) {
        bland = true;
      }
      RecomputeTreeLabels();
    }

    RecomputeTreeFlows(/*require_feasible=*/false);
    BalancedTransportSolution out;
    out.flow.assign(p_.arcs.size(), 0.0);
    double cost = 0.0;
    for (std::size_t a = 0; a < p_.arcs.size(); ++a) {
      if (basic_[a]) {
        out.flow[a] = flow_[a];
        cost += flow_[a] * p_.arcs[a].cost;
      }
    }
    out.cost = cost;
    out.row_potential.assign(potential_.begin(), potential_.begin() + n_rows_);
    out.col_potential.assign(potential_.begin() + n_rows_, potential_.end());
    out.pivots = pivots;
    return out;
  }

 private:
  std::size_t ColNode(int32_t col) const { return n_rows_ + col; }

  void Validate() const {
    if (n_rows_ == 0 || n_cols_ == 0) {
      throw std::invalid_argument("NetworkSimplex: empty side");
    }
    double s = 0.0, d = 0.0;
    for (double v : p_.supply) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("NetworkSimplex: bad supply");
      }
      s += v;
    }
    for (double v : p_.demand) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("NetworkSimplex: bad demand");
      }
      d += v;
    }
    const double scale = std::max({1.0, s, d});
    if (std::abs(s - d) > 1e-9 * scale) {
      throw std::invalid_argument("NetworkSimplex: unbalanced totals");
    }
    for (const auto& arc : p_.arcs) {
      if (arc.row < 0 || arc.row >= static_cast<int32_t>(n_rows_) ||
          arc.col < 0 || arc.col >= static_cast<int32_t>(n_cols_) ||
          !std::isfinite(arc.cost)) {
        throw std::invalid_argument("NetworkSimplex: bad arc");
      }
    }
    if (p_.initial_basis.size() != n_nodes_ - 1) {
      throw std::invalid_argument("NetworkSimplex: initial basis size");
    }
  }

  void BuildInitialTree() {
    basic_.assign(p_.arcs.size(), false);
    flow_.assign(p_.arcs.size(), 0.0);
    adjacency_.assign(n_nodes_, {});
    for (int32_t a : p_.initial_basis) {
      if (a < 0 || a >= static_cast<int32_t>(p_.arcs.size()) || basic_[a]) {
        throw std::invalid_argument("NetworkSimplex: bad initial basis arc");
      }
      basic_[a] = true;
      adjacency_[p_.arcs[a].row].push_back(a);
      adjacency_[ColNode(p_.arcs[a].col)].push_back(a);
    }
  }

  // BFS from node 0 assigning parents, depths and potentials; also records
  // the traversal order (parents before children) used by the flow peel.
  void RecomputeTreeLabels() {
    parent_.assign(n_nodes_, -1);
    parent_arc_.assign(n_nodes_, -1);
    depth_.assign(n_nodes_, 0);
    potential_.assign(n_nodes_, 0.0);
    order_.clear();
    order_.reserve(n_nodes_);
    order_.push_back(0);
    std::vector<char> seen(n_nodes_, 0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const std::size_t u = order_[head];
      for (int32_t a : adjacency_[u]) {
        const auto& arc = p_.arcs[a];
        const std::size_t row = arc.row;
        const std::size_t col = ColNode(arc.col);
        const std::size_t w = (row == u) ? col : row;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_[w] = static_cast<int32_t>(u);
        parent_arc_[w] = a;
        depth_[w] = depth_[u] + 1;
        // Basic arcs price out to zero: cost == u_row + v_col.
        potential_[w] = arc.cost - potential_[u];
        order_.push_back(w);
      }
    }
    if (order_.size() != n_nodes_) {
      throw std::invalid_argument("NetworkSimplex: basis is not spanning");
    }
  }

  // Unique tree flow: peel leaves in reverse BFS order. Tiny negative values
  // are roundoff and clamped; real negatives mean the caller's basis was not
  // primal feasible (initial call) or an internal bug (final call).
  void RecomputeTreeFlows(bool require_feasible) {
    std::vector<double> net(n_nodes_);
    for (std::size_t r = 0; r < n_rows_; ++r) net[r] = p_.supply[r];
    for (std::size_t c = 0; c < n_cols_; ++c) net[ColNode(c)] = -p_.demand[c];
    double scale = 1.0;
    for (double v : p_.supply) scale = std::max(scale, v);
    for (double v : p_.demand) scale = std::max(scale, v);
    const double feas_tol = 1e-7 * scale;
    for (std::size_t i = n_nodes_; i-- > 1;) {
      const std::size_t u = order_[i];
      const int32_t a = parent_arc_[u];
      const auto& arc = p_.arcs[a];
      const bool u_is_row = static_cast<std::size_t>(arc.row) == u;
      double f = u_is_row ? net[u] : -net[u];
      if (f < 0.0) {
        if (f < -feas_tol) {
          if (require_feasible) {
            throw std::invalid_argument(
                "NetworkSimplex: initial basis is not feasible");
          }
          throw std::logic_error("NetworkSimplex: negative tree flow " +
                                 std::to_string(f));
        }
        f = 0.0;
      }
      flow_[a] = f;
      net[parent_[u]] += net[u];
      net[u] = 0.0;
    }
  }

  double PivotTolerance() const {
    double c = 1.0;
    for (const auto& arc : p_.arcs) c = std::max(c, std::abs(arc.cost));
    return 1e-11 * c;
  }

  int32_t SelectEntering(double tol, bool bland) const {
    int32_t best = -1;
    double best_rc = -tol;
    for (std::size_t a = 0; a < p_.arcs.size(); ++a) {
      if (basic_[a]) continue;
      const auto& arc = p_.arcs[a];
      const double rc =
          arc.cost - potential_[arc.row] - potential_[ColNode(arc.col)];
      if (rc < best_rc) {
        best = static_cast<int32_t>(a);
        best_rc = rc;
        if (bland) break;
      }
    }
    return best;
  }

  // Pushes flow around the unique tree cycle closed by the entering arc.
  // Returns the amount pushed (0 on a degenerate pivot).
  double Pivot(int32_t entering) {
    const auto& earc = p_.arcs[entering];
    std::size_t ru = earc.row;            // cycle runs entering row -> col
    std::size_t cu = ColNode(earc.col);   // then back through the tree
    cycle_arcs_.clear();
    cycle_signs_.clear();
    // Walk both endpoints up to the least common ancestor. Arcs collected
    // from the col side are traversed with the cycle direction, arcs from
    // the row side against it; signs follow the arc orientation row->col.
    std::size_t a_node = cu, b_node = ru;
    while (depth_[a_node] > depth_[b_node]) {
      const int32_t arc = parent_arc_[a_node];
      cycle_arcs_.push_back(arc);
      cycle_signs_.push_back(
          static_cast<std::size_t>(p_.arcs[arc].row) == a_node ? +1 : -1);
      a_node = parent_[a_node];
    }
    while (depth_[b_node] > depth_[a_node]) {
      const int32_t arc = parent_arc_[b_node];
      cycle_arcs_.push_back(arc);
      cycle_signs_.push_back(
          static_cast<std::size_t>(p_.arcs[arc].row) == b_node ? -1 : +1);
      b_node = parent_[b_node];
    }
    while (a_node != b_node) {
      {
        const int32_t arc = parent_arc_[a_node];
        cycle_arcs_.push_back(arc);
        cycle_signs_.push_back(
            static_cast<std::size_t>(p_.arcs[arc].row) == a_node ? +1 : -1);
        a_node = parent_[a_node];
      }
      {
        const int32_t arc = parent_arc_[b_node];
        cycle_arcs_.push_back(arc);
        cycle_signs_.push_back(
            static_cast<std::size_t>(p_.arcs[arc].row) == b_node ? -1 : +1);
        b_node = parent_[b_node];
      }
    }

    double delta = std::numeric_limits<double>::infinity();
    int32_t leaving = -1;
    for (std::size_t i = 0; i < cycle_arcs_.size(); ++i) {
      if (cycle_signs_[i] > 0) continue;
      const int32_t arc = cycle_arcs_[i];
      if (flow_[arc] < delta ||
          (flow_[arc] == delta && (leaving < 0 || arc < leaving))) {
        delta = flow_[arc];
        leaving = arc;
      }
    }
    if (leaving < 0) {
      throw std::logic_error("NetworkSimplex: unbounded cycle");
    }
    for (std::size_t i = 0; i < cycle_arcs_.size(); ++i) {
      flow_[cycle_arcs_[i]] += cycle_signs_[i] > 0 ? delta : -delta;
    }
    flow_[entering] = delta;
    flow_[leaving] = 0.0;

    basic_[leaving] = false;
    basic_[entering] = true;
    DropAdjacency(p_.arcs[leaving].row, leaving);
    DropAdjacency(ColNode(p_.arcs[leaving].col), leaving);
    adjacency_[earc.row].push_back(entering);
    adjacency_[cu].push_back(entering);
    return delta;
  }

  void DropAdjacency(std::size_t node, int32_t arc) {
    auto& list = adjacency_[node];
    list.erase(std::find(list.begin(), list.end(), arc));
  }

  const BalancedTransportProblem& p_;
  const std::size_t n_rows_;
  const std::size_t n_cols_;
  const std::size_t n_nodes_;

  std::vector<char> basic_;
  std::vector<double> flow_;
  std::vector<std::vector<int32_t>> adjacency_;
  std::vector<int32_t> parent_;
  std::vector<int32_t> parent_arc_;
  std::vector<int32_t> depth_;
  std::vector<double> potential_;
  std::vector<std::size_t> order_;
  std::vector<int32_t> cycle_arcs_;
  std::vector<int8_t> cycle_signs_;
};

}  // namespace internal

inline BalancedTransportSolution solve_balanced_transport(
    const BalancedTransportProblem& p) {
  return internal::NetworkSimplex(p).Solve();
}

}  // namespace flatmetric

#endif  // FLATMETRIC_TRANSPORTATION_HPP_
