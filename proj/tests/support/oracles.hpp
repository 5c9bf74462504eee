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
//
// Reference implementations the production code is tested against. These
// deliberately avoid the network-simplex path: the transport values come
// from a dense-tableau LP on the untouched objective (absolute-value
// penalties, no reduction), pairing from exhaustive search.

#ifndef FLATMETRIC_TESTS_SUPPORT_ORACLES_HPP_
#define FLATMETRIC_TESTS_SUPPORT_ORACLES_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flatmetric/dense_lp.hpp"
#include "flatmetric/measure.hpp"
#include "flatmetric/synth.hpp"

namespace flatmetric::testing {

// Flat metric as one monolithic LP over plan variables pi and epigraph
// variables u, v for the absolute-value mass mismatch on each atom:
//   min sum(d * pi) + lambda * (sum u + sum v)
//   s.t. pi >= 0,  u_n >= |a_n - sum_m pi_nm|,  v_m >= |b_m - sum_n pi_nm|.
// No reduction, no thresholding: this also certifies that capping the plan
// by the marginals (what the production reduction does) loses nothing.
inline double oracle_flat_lp(const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, double lambda) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  const std::size_t n_pi = n * m;
  DenseLp lp;
  lp.num_vars = n_pi + n + m;
  lp.objective.assign(lp.num_vars, 0.0);
  if (n && m) {
    const DistanceMatrix d = distance_matrix(mu, nu);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        lp.objective[i * m + j] = d(i, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) lp.objective[n_pi + i] = lambda;
  for (std::size_t j = 0; j < m; ++j) lp.objective[n_pi + n + j] = lambda;

  // row pair per gt atom:  sum_m pi - u <= a   and  -sum_m pi - u <= -a
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> up(lp.num_vars, 0.0), down(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      up[i * m + j] = 1.0;
      down[i * m + j] = -1.0;
    }
    up[n_pi + i] = -1.0;
    down[n_pi + i] = -1.0;
    lp.rows.push_back(std::move(up));
    lp.rhs.push_back(mu.weight(i));
    lp.rows.push_back(std::move(down));
    lp.rhs.push_back(-mu.weight(i));
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> up(lp.num_vars, 0.0), down(lp.num_vars, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      up[i * m + j] = 1.0;
      down[i * m + j] = -1.0;
    }
    up[n_pi + n + j] = -1.0;
    down[n_pi + n + j] = -1.0;
    lp.rows.push_back(std::move(up));
    lp.rhs.push_back(nu.weight(j));
    lp.rows.push_back(std::move(down));
    lp.rhs.push_back(-nu.weight(j));
  }
  const DenseLpSolution sol = solve_dense_lp(lp);
  if (sol.status != DenseLpSolution::Status::kOptimal) {
    throw std::logic_error("oracle_flat_lp: LP not solved");
  }
  return sol.value;
}

// 1-Wasserstein by dense LP with exact marginal equalities.
inline double oracle_w1_lp(const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu) {
  const std::size_t n = mu.size();
  const std::size_t m = nu.size();
  const DistanceMatrix d = distance_matrix(mu, nu);
  DenseLp lp;
  lp.num_vars = n * m;
  lp.objective.assign(lp.num_vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) lp.objective[i * m + j] = d(i, j);
  }
  auto push_eq = [&lp](std::vector<double> row, double rhs) {
    std::vector<double> neg(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) neg[k] = -row[k];
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(rhs);
    lp.rows.push_back(std::move(neg));
    lp.rhs.push_back(-rhs);
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
    push_eq(std::move(row), mu.weight(i));
  }
  // Rescale the demand side to exact balance, mirroring the solver contract.
  const double scale = total_mass(mu) / total_mass(nu);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
    push_eq(std::move(row), nu.weight(j) * scale);
  }
  const DenseLpSolution sol = solve_dense_lp(lp);
  if (sol.status != DenseLpSolution::Status::kOptimal) {
    throw std::logic_error("oracle_w1_lp: LP not solved");
  }
  return sol.value;
}

struct PairingOracle {
  std::size_t max_matches = 0;
  double min_total_distance = 0.0;
};

// Exhaustive search over injective partial matchings within the radius:
// maximize the match count, then minimize the total matched distance.
inline PairingOracle oracle_pairing(const PointList& gt, const PointList& det,
                                    double radius) {
  const std::size_t n = gt.size();
  const std::size_t m = det.size();
  PairingOracle best;
  best.min_total_distance = 0.0;
  std::vector<char> used(m, 0);
  auto consider = [&best](std::size_t count, double dist) {
    if (count > best.max_matches ||
        (count == best.max_matches && dist < best.min_total_distance)) {
      best.max_matches = count;
      best.min_total_distance = dist;
    }
  };
  auto dfs = [&](auto&& self, std::size_t i, std::size_t count,
                 double dist) -> void {
    if (i == n) {
      consider(count, dist);
      return;
    }
    self(self, i + 1, count, dist);
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double dd = euclidean_distance(gt[i], det[j]);
      if (dd > radius) continue;
      used[j] = 1;
      self(self, i + 1, count + 1, dist + dd);
      used[j] = 0;
    }
  };
  dfs(dfs, 0, 0, 0.0);
  return best;
}

// Deterministic random measures for property tests.
inline DiscreteMeasure random_measure(UniformRng& rng, std::size_t n, int dim,
                                      double span, bool uniform_weights,
                                      double uniform_weight = 1.0) {
  PointList pts(dim);
  for (std::size_t i = 0; i < n; ++i) {
    Point p;
    p.x = span * rng.next();
    p.y = span * rng.next();
    if (dim == 3) p.z = span * rng.next();
    pts.push_back(p);
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = uniform_weights ? uniform_weight : 0.05 + rng.next();
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

}  // namespace flatmetric::testing

#endif  // FLATMETRIC_TESTS_SUPPORT_ORACLES_HPP_
