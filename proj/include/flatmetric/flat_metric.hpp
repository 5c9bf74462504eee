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

#ifndef FLATMETRIC_FLAT_METRIC_HPP_
#define FLATMETRIC_FLAT_METRIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flatmetric/measure.hpp"
#include "flatmetric/transportation.hpp"

namespace flatmetric {

// Mass below this is treated as zero when emitting plan entries and
// creation/destruction events.
inline constexpr double kMassTolerance = 1e-12;

// Partial transport plan between two measures: pi[gt, det] = mass, with
// row sums bounded by the gt weights and column sums by the det weights.
struct TransportPlan {
  struct Entry {
    int32_t gt;
    int32_t det;
    double mass;
  };
  std::vector<Entry> entries;
};

// Dual certificate: f lives on the gt atoms, g on the det atoms, both
// bounded by lambda in absolute value and |f[n] - g[m]| <= distance(n, m).
// The dual objective sum(a*f) - sum(b*g) matches the metric value at the
// optimum.
struct DualPotentials {
  std::vector<double> f;
  std::vector<double> g;
};

// Optimal plan re-expressed as billed events: mass moves (paired gt/det
// mass at its transport distance), creations (gt mass the detections never
// account for, billed lambda per unit) and destructions (det mass with no
// gt counterpart, billed lambda per unit).
struct TransportDecomposition {
  struct Move {
    int32_t gt;
    int32_t det;
    double mass;
    double distance;
    double cost;
  };
  struct Event {
    int32_t atom;
    double mass;
    double cost;
  };
  std::vector<Move> moves;
  std::vector<Event> creations;
  std::vector<Event> destructions;
  double total_cost = 0.0;
};

struct FlatMetricResult {
  double value = 0.0;
  double lambda = 0.0;
  double duality_gap = 0.0;
  TransportPlan plan;
  DualPotentials potentials;
  TransportDecomposition decomposition;
};

// Transportation problem equivalent to the unbalanced relaxation:
//   min sum(edge cost * x) + constant
//   s.t. x >= 0, row sums <= row_capacity, col sums <= col_capacity,
// keeping only pairs closer than 2*lambda (any mass moved further is
// never cheaper than deleting it on one side and recreating it on the
// other, so those pairs can be dropped without changing the optimum).
struct ReducedTransportProblem {
  struct Edge {
    int32_t gt;
    int32_t det;
    double distance;
    double cost;  // distance - 2*lambda, strictly negative
  };
  std::vector<Edge> edges;  // lexicographic in (gt, det)
  std::vector<double> row_capacity;
  std::vector<double> col_capacity;
  double lambda = 0.0;
  double constant = 0.0;  // lambda * (mass(mu) + mass(nu))
};

namespace internal {

inline void check_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw std::invalid_argument("lambda must be finite and > 0, got " +
                                std::to_string(lambda));
  }
}

inline void check_dims(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  // A measure with no atoms is the zero measure in every dimension.
  if (!mu.empty() && !nu.empty() && mu.dim() != nu.dim()) {
    throw std::invalid_argument("measure dimension mismatch");
  }
}

inline double dual_objective(const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu,
                             const DualPotentials& p) {
  double v = 0.0;
  for (std::size_t n = 0; n < mu.size(); ++n) v += mu.weight(n) * p.f[n];
  for (std::size_t m = 0; m < nu.size(); ++m) v -= nu.weight(m) * p.g[m];
  return v;
}

}  // namespace internal

inline ReducedTransportProblem reduce_to_transportation(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
  internal::check_lambda(lambda);
  internal::check_dims(mu, nu);
  ReducedTransportProblem out;
  out.lambda = lambda;
  out.row_capacity = mu.weights();
  out.col_capacity = nu.weights();
  out.constant = lambda * (total_mass(mu) + total_mass(nu));
  const double cutoff = 2.0 * lambda;
  if (!mu.empty() && !nu.empty()) {
    const DistanceMatrix d = distance_matrix(mu, nu);
    for (std::size_t n = 0; n < mu.size(); ++n) {
      for (std::size_t m = 0; m < nu.size(); ++m) {
        const double dist = d(n, m);
        if (dist < cutoff) {
          out.edges.push_back({static_cast<int32_t>(n),
                               static_cast<int32_t>(m), dist,
                               dist - cutoff});
        }
      }
    }
  }
  return out;
}

namespace internal {

struct ReducedSolve {
  TransportPlan plan;
  double reduced_cost = 0.0;     // sum(edge cost * flow), no constant
  std::vector<double> u;         // row potentials on gt atoms
  std::vector<double> v;         // col potentials on det atoms
  double u_dummy = 0.0;          // potential of the overflow row
  double v_dummy = 0.0;          // potential of the overflow col
};

// Embeds the capacity-bounded reduction into a balanced problem by adding
// one overflow row (absorbing unmet col capacity), one overflow col and a
// zero-cost corner arc, then solves it exactly. The all-overflow basis is
// feasible and spanning, so no artificial costs are needed.
inline ReducedSolve solve_reduced(const ReducedTransportProblem& r) {
  const std::size_t n_rows = r.row_capacity.size();
  const std::size_t n_cols = r.col_capacity.size();
  const std::size_t n_edges = r.edges.size();
  if (n_edges == 0) {
    ReducedSolve out;
    out.u.assign(n_rows, 0.0);
    out.v.assign(n_cols, 0.0);
    return out;
  }

  double row_mass = 0.0, col_mass = 0.0;
  for (double w : r.row_capacity) row_mass += w;
  for (double w : r.col_capacity) col_mass += w;

  BalancedTransportProblem p;
  p.supply = r.row_capacity;
  p.supply.push_back(col_mass);
  p.demand = r.col_capacity;
  p.demand.push_back(row_mass);
  p.arcs.reserve(n_edges + n_rows + n_cols + 1);
  for (const auto& e : r.edges) {
    if (e.gt < 0 || static_cast<std::size_t>(e.gt) >= n_rows || e.det < 0 ||
        static_cast<std::size_t>(e.det) >= n_cols) {
      throw std::invalid_argument("reduced problem: edge index out of range");
    }
    p.arcs.push_back({e.gt, e.det, e.cost});
  }
  const int32_t overflow_row = static_cast<int32_t>(n_rows);
  const int32_t overflow_col = static_cast<int32_t>(n_cols);
  for (std::size_t n = 0; n < n_rows; ++n) {
    p.arcs.push_back({static_cast<int32_t>(n), overflow_col, 0.0});
  }
  for (std::size_t m = 0; m < n_cols; ++m) {
    p.arcs.push_back({overflow_row, static_cast<int32_t>(m), 0.0});
  }
  p.arcs.push_back({overflow_row, overflow_col, 0.0});
  p.initial_basis.resize(n_rows + n_cols + 1);
  for (std::size_t i = 0; i < p.initial_basis.size(); ++i) {
    p.initial_basis[i] = static_cast<int32_t>(n_edges + i);
  }

  const BalancedTransportSolution sol = solve_balanced_transport(p);
  ReducedSolve out;
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (sol.flow[e] > kMassTolerance) {
      out.plan.entries.push_back({r.edges[e].gt, r.edges[e].det, sol.flow[e]});
    }
    out.reduced_cost += sol.flow[e] * r.edges[e].cost;
  }
  out.u.assign(sol.row_potential.begin(), sol.row_potential.end() - 1);
  out.v.assign(sol.col_potential.begin(), sol.col_potential.end() - 1);
  out.u_dummy = sol.row_potential.back();
  out.v_dummy = sol.col_potential.back();
  return out;
}

}  // namespace internal

inline TransportPlan solve_transportation(const ReducedTransportProblem& r) {
  return internal::solve_reduced(r).plan;
}

inline TransportDecomposition decompose_plan(const DiscreteMeasure& mu,
                                             const DiscreteMeasure& nu,
                                             const TransportPlan& plan,
                                             double lambda) {
  internal::check_lambda(lambda);
  internal::check_dims(mu, nu);
  std::vector<double> row_used(mu.size(), 0.0);
  std::vector<double> col_used(nu.size(), 0.0);
  TransportDecomposition out;
  for (const auto& e : plan.entries) {
    if (e.gt < 0 || static_cast<std::size_t>(e.gt) >= mu.size() || e.det < 0 ||
        static_cast<std::size_t>(e.det) >= nu.size()) {
      throw std::invalid_argument("decompose_plan: entry index out of range");
    }
    if (!std::isfinite(e.mass) || e.mass < 0.0) {
      throw std::invalid_argument("decompose_plan: bad entry mass");
    }
    row_used[e.gt] += e.mass;
    col_used[e.det] += e.mass;
    if (e.mass > kMassTolerance) {
      const double dist = euclidean_distance(mu.point(e.gt), nu.point(e.det));
      out.moves.push_back({e.gt, e.det, e.mass, dist, e.mass * dist});
    }
  }
  for (std::size_t n = 0; n < mu.size(); ++n) {
    const double res = mu.weight(n) - row_used[n];
    if (res < -1e-9 * std::max(1.0, mu.weight(n))) {
      throw std::invalid_argument(
          "decompose_plan: plan exceeds gt marginal at atom " +
          std::to_string(n));
    }
    if (res > kMassTolerance) {
      out.creations.push_back({static_cast<int32_t>(n), res, lambda * res});
    }
  }
  for (std::size_t m = 0; m < nu.size(); ++m) {
    const double res = nu.weight(m) - col_used[m];
    if (res < -1e-9 * std::max(1.0, nu.weight(m))) {
      throw std::invalid_argument(
          "decompose_plan: plan exceeds det marginal at atom " +
          std::to_string(m));
    }
    if (res > kMassTolerance) {
      out.destructions.push_back({static_cast<int32_t>(m), res, lambda * res});
    }
  }
  double total = 0.0;
  for (const auto& mv : out.moves) total += mv.cost;
  for (const auto& ev : out.creations) total += ev.cost;
  for (const auto& ev : out.destructions) total += ev.cost;
  out.total_cost = total;
  return out;
}

namespace internal {

// Rebuilds dual potentials as single-source shortest-path distances over
// the residual graph of an optimal plan: a bank node is linked to every
// atom at cost lambda both ways, every gt/det pair is linked at its
// distance both ways, and active plan mass / active creations and
// destructions contribute the negated reverse arcs. Any distance labeling
// from the bank node is then feasible for the dual box and Lipschitz
// constraints and tight on every active primal event, which forces the
// dual objective to equal the primal value. Optimality of the plan rules
// out negative cycles, so Bellman-Ford converges.
inline DualPotentials rebuild_potentials_from_plan(const DiscreteMeasure& mu,
                                                   const DiscreteMeasure& nu,
                                                   const TransportPlan& plan,
                                                   double lambda) {
  const std::size_t n_gt = mu.size();
  const std::size_t n_det = nu.size();
  const std::size_t bank = n_gt + n_det;
  struct Arc {
    int32_t from;
    int32_t to;
    double cost;
  };
  std::vector<Arc> arcs;
  arcs.reserve(2 * n_gt * n_det + 2 * (n_gt + n_det) + plan.entries.size());
  const DistanceMatrix d =
      (n_gt && n_det) ? distance_matrix(mu, nu) : DistanceMatrix{};
  for (std::size_t n = 0; n < n_gt; ++n) {
    for (std::size_t m = 0; m < n_det; ++m) {
      const int32_t gt = static_cast<int32_t>(n);
      const int32_t det = static_cast<int32_t>(n_gt + m);
      arcs.push_back({det, gt, d(n, m)});
      arcs.push_back({gt, det, d(n, m)});
    }
  }
  for (std::size_t n = 0; n < n_gt; ++n) {
    arcs.push_back({static_cast<int32_t>(bank), static_cast<int32_t>(n),
                    lambda});
    arcs.push_back({static_cast<int32_t>(n), static_cast<int32_t>(bank),
                    lambda});
  }
  for (std::size_t m = 0; m < n_det; ++m) {
    arcs.push_back({static_cast<int32_t>(bank),
                    static_cast<int32_t>(n_gt + m), lambda});
    arcs.push_back({static_cast<int32_t>(n_gt + m),
                    static_cast<int32_t>(bank), lambda});
  }
  std::vector<double> row_used(n_gt, 0.0), col_used(n_det, 0.0);
  for (const auto& e : plan.entries) {
    row_used[e.gt] += e.mass;
    col_used[e.det] += e.mass;
    if (e.mass > kMassTolerance) {
      arcs.push_back({e.gt, static_cast<int32_t>(n_gt + e.det),
                      -d(e.gt, e.det)});
    }
  }
  for (std::size_t n = 0; n < n_gt; ++n) {
    if (mu.weight(n) - row_used[n] > kMassTolerance) {
      arcs.push_back({static_cast<int32_t>(n), static_cast<int32_t>(bank),
                      -lambda});
    }
  }
  for (std::size_t m = 0; m < n_det; ++m) {
    if (nu.weight(m) - col_used[m] > kMassTolerance) {
      arcs.push_back({static_cast<int32_t>(bank),
                      static_cast<int32_t>(n_gt + m), -lambda});
    }
  }

  const std::size_t n_nodes = bank + 1;
  std::vector<double> dist(n_nodes, std::numeric_limits<double>::infinity());
  dist[bank] = 0.0;
  bool changed = true;
  for (std::size_t pass = 0; pass < n_nodes && changed; ++pass) {
    changed = false;
    for (const auto& a : arcs) {
      if (dist[a.from] + a.cost < dist[a.to] - 1e-15 * lambda) {
        dist[a.to] = dist[a.from] + a.cost;
        changed = true;
      }
    }
  }
  if (changed) {
    throw std::logic_error("dual rebuild: residual graph has a negative cycle");
  }
  DualPotentials out;
  out.f.resize(n_gt);
  out.g.resize(n_det);
  for (std::size_t n = 0; n < n_gt; ++n) {
    out.f[n] = std::clamp(dist[n], -lambda, lambda);
  }
  for (std::size_t m = 0; m < n_det; ++m) {
    out.g[m] = std::clamp(dist[n_gt + m], -lambda, lambda);
  }
  return out;
}

// True when the potentials satisfy the box and both Lipschitz sides within
// tolerance.
inline bool potentials_feasible(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu,
                                const DualPotentials& p, double lambda,
                                double tol) {
  for (double f : p.f) {
    if (std::abs(f) > lambda + tol) return false;
  }
  for (double g : p.g) {
    if (std::abs(g) > lambda + tol) return false;
  }
  if (!mu.empty() && !nu.empty()) {
    const DistanceMatrix d = distance_matrix(mu, nu);
    for (std::size_t n = 0; n < mu.size(); ++n) {
      for (std::size_t m = 0; m < nu.size(); ++m) {
        if (std::abs(p.f[n] - p.g[m]) > d(n, m) + tol) return false;
      }
    }
  }
  return true;
}

inline bool measure_precedes(const DiscreteMeasure& a,
                             const DiscreteMeasure& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point& pa = a.point(i);
    const Point& pb = b.point(i);
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    if (pa.z != pb.z) return pa.z < pb.z;
    if (a.weight(i) != b.weight(i)) return a.weight(i) < b.weight(i);
  }
  return false;
}

inline FlatMetricResult flat_metric_oriented(const DiscreteMeasure& mu,
                                             const DiscreteMeasure& nu,
                                             double lambda) {
  const ReducedTransportProblem reduced =
      reduce_to_transportation(mu, nu, lambda);
  FlatMetricResult out;
  out.lambda = lambda;

  ReducedSolve solved = solve_reduced(reduced);
  out.value = solved.reduced_cost + reduced.constant;
  out.plan = std::move(solved.plan);

  // First dual candidate: simplex node potentials folded through the
  // overflow arcs, clamped into the lambda box. The clamp keeps the box and
  // the upper Lipschitz side; the lower side can break on degenerate bases
  // and is audited below.
  out.potentials.f.resize(mu.size());
  out.potentials.g.resize(nu.size());
  const double two_lambda = 2.0 * lambda;
  for (std::size_t n = 0; n < mu.size(); ++n) {
    const double alpha =
        std::clamp(-(solved.u[n] + solved.v_dummy), 0.0, two_lambda);
    out.potentials.f[n] = lambda - alpha;
  }
  for (std::size_t m = 0; m < nu.size(); ++m) {
    const double beta =
        std::clamp(-(solved.u_dummy + solved.v[m]), 0.0, two_lambda);
    out.potentials.g[m] = beta - lambda;
  }
  const double feas_tol = 1e-9 * std::max(1.0, lambda);
  if (!potentials_feasible(mu, nu, out.potentials, lambda, feas_tol)) {
    out.potentials = rebuild_potentials_from_plan(mu, nu, out.plan, lambda);
    if (!potentials_feasible(mu, nu, out.potentials, lambda, feas_tol)) {
      throw std::logic_error("flat_metric: dual rebuild is infeasible");
    }
  }

  out.duality_gap = std::abs(out.value - dual_objective(mu, nu, out.potentials));
  if (out.duality_gap > 1e-6 * std::max(1.0, std::abs(out.value))) {
    throw std::logic_error("flat_metric: primal/dual mismatch " +
                           std::to_string(out.duality_gap));
  }

  out.decomposition = decompose_plan(mu, nu, out.plan, lambda);
  if (std::abs(out.decomposition.total_cost - out.value) >
      1e-9 * std::max(1.0, std::abs(out.value))) {
    throw std::logic_error("flat_metric: decomposition does not add up");
  }
  return out;
}

}  // namespace internal

// Flat metric (bounded-Lipschitz distance) between two nonnegative discrete
// measures with scale parameter lambda: the cheapest way to morph nu into mu
// when moving mass is billed at Euclidean distance per unit and creating or
// destroying mass is billed at lambda per unit.
inline FlatMetricResult flat_metric(const DiscreteMeasure& mu,
                                    const DiscreteMeasure& nu, double lambda) {
  internal::check_lambda(lambda);
  internal::check_dims(mu, nu);
  // Solve in a canonical orientation so both argument orders run the exact
  // same pivot sequence and return bitwise identical values.
  if (!internal::measure_precedes(nu, mu)) {
    return internal::flat_metric_oriented(mu, nu, lambda);
  }
  FlatMetricResult t = internal::flat_metric_oriented(nu, mu, lambda);
  FlatMetricResult out;
  out.value = t.value;
  out.lambda = t.lambda;
  out.duality_gap = t.duality_gap;
  out.plan.entries.reserve(t.plan.entries.size());
  for (const auto& e : t.plan.entries) {
    out.plan.entries.push_back({e.det, e.gt, e.mass});
  }
  std::sort(out.plan.entries.begin(), out.plan.entries.end(),
            [](const TransportPlan::Entry& a, const TransportPlan::Entry& b) {
              return a.gt != b.gt ? a.gt < b.gt : a.det < b.det;
            });
  out.potentials.f.reserve(t.potentials.g.size());
  for (double g : t.potentials.g) out.potentials.f.push_back(-g);
  out.potentials.g.reserve(t.potentials.f.size());
  for (double f : t.potentials.f) out.potentials.g.push_back(-f);
  out.decomposition.moves.reserve(t.decomposition.moves.size());
  for (const auto& mv : t.decomposition.moves) {
    out.decomposition.moves.push_back(
        {mv.det, mv.gt, mv.mass, mv.distance, mv.cost});
  }
  std::sort(out.decomposition.moves.begin(), out.decomposition.moves.end(),
            [](const TransportDecomposition::Move& a,
               const TransportDecomposition::Move& b) {
              return a.gt != b.gt ? a.gt < b.gt : a.det < b.det;
            });
  out.decomposition.creations = t.decomposition.destructions;
  out.decomposition.destructions = t.decomposition.creations;
  out.decomposition.total_cost = t.decomposition.total_cost;
  return out;
}

// Exact reference value by exhaustive search over partial matchings, for
// uniform atom weights and min(N, M) <= 7. Exponential; test sizes only.
inline double flat_metric_bruteforce(const DiscreteMeasure& mu,
                                     const DiscreteMeasure& nu,
                                     double lambda) {
  internal::check_lambda(lambda);
  internal::check_dims(mu, nu);
  double w = 0.0;
  for (const DiscreteMeasure* side : {&mu, &nu}) {
    for (double wi : side->weights()) {
      if (w == 0.0) {
        w = wi;
      } else if (std::abs(wi - w) > 1e-12 * w) {
        throw std::invalid_argument(
            "flat_metric_bruteforce: weights must be uniform");
      }
    }
  }
  const std::size_t n_small = std::min(mu.size(), nu.size());
  if (n_small > 7) {
    throw std::invalid_argument("flat_metric_bruteforce: min side > 7");
  }
  if (mu.empty() || nu.empty()) {
    return lambda * (total_mass(mu) + total_mass(nu));
  }
  const bool swap = nu.size() < mu.size();
  const DiscreteMeasure& small = swap ? nu : mu;
  const DiscreteMeasure& large = swap ? mu : nu;
  const DistanceMatrix d = distance_matrix(small, large);
  const std::size_t ns = small.size();
  const std::size_t nl = large.size();

  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(nl, 0);
  const double two_lambda = 2.0 * lambda;
  // dfs over the smaller side: each atom either stays unmatched or pairs
  // with an unused atom of the larger side closer than 2*lambda.
  auto dfs = [&](auto&& self, std::size_t i, std::size_t matched,
                 double dist_sum) -> void {
    if (i == ns) {
      const double unmatched =
          static_cast<double>(ns - matched) + static_cast<double>(nl - matched);
      const double cost = w * dist_sum + lambda * w * unmatched;
      best = std::min(best, cost);
      return;
    }
    self(self, i + 1, matched, dist_sum);
    for (std::size_t j = 0; j < nl; ++j) {
      if (used[j] || d(i, j) >= two_lambda) continue;
      used[j] = 1;
      self(self, i + 1, matched + 1, dist_sum + d(i, j));
      used[j] = 0;
    }
  };
  dfs(dfs, 0, 0, 0.0);
  return best;
}

// 1-Wasserstein distance between measures of equal total mass (relative
// tolerance 1e-9; the right-hand weights are rescaled to exact balance).
// Same exact solver as the flat metric, dense arc set, northwest-corner
// start.
inline double wasserstein1(const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu) {
  if (mu.empty() || nu.empty()) {
    throw std::invalid_argument("wasserstein1: measures must be nonzero");
  }
  internal::check_dims(mu, nu);
  const double amass = total_mass(mu);
  const double bmass = total_mass(nu);
  if (std::abs(amass - bmass) > 1e-9 * std::max(amass, bmass)) {
    throw std::invalid_argument("wasserstein1: total masses differ");
  }
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  const DistanceMatrix d = distance_matrix(mu, nu);

  BalancedTransportProblem p;
  p.supply = mu.weights();
  p.demand = nu.weights();
  const double rescale = amass / bmass;
  for (double& b : p.demand) b *= rescale;
  p.arcs.reserve(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      p.arcs.push_back(
          {static_cast<int32_t>(i), static_cast<int32_t>(j), d(i, j)});
    }
  }
  // Northwest-corner walk: exhaust supplies and demands in index order;
  // the visited cells form a spanning staircase tree.
  p.initial_basis.reserve(n + m - 1);
  std::size_t i = 0, j = 0;
  double sa = p.supply[0], sb = p.demand[0];
  for (;;) {
    p.initial_basis.push_back(static_cast<int32_t>(i * m + j));
    if (i == n - 1 && j == m - 1) break;
    if (i < n - 1 && (sa <= sb || j == m - 1)) {
      sb -= sa;
      ++i;
      sa = p.supply[i];
    } else {
      sa -= sb;
      ++j;
      sb = p.demand[j];
    }
  }
  return solve_balanced_transport(p).cost;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_FLAT_METRIC_HPP_
