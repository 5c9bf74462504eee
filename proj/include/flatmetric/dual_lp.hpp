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

#ifndef FLATMETRIC_DUAL_LP_HPP_
#define FLATMETRIC_DUAL_LP_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "flatmetric/dense_lp.hpp"
#include "flatmetric/flat_metric.hpp"
#include "flatmetric/measure.hpp"

namespace flatmetric {

struct DualLpResult {
  DualPotentials potentials;
  double value = 0.0;
};

// Solves the dual formulation directly as a dense LP:
//   max sum(a*f) - sum(b*g)
//   s.t. |f| <= lambda, |g| <= lambda, |f[n] - g[m]| <= distance(n, m),
// shifted to box variables F = f + lambda, G = g + lambda in [0, 2*lambda]
// so the all-slack start is feasible. Deliberately shares no code with the
// network-simplex path beyond the measure types; small instances only (the
// tableau is dense in N*M constraints).
inline DualLpResult solve_dual_lp(const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu, double lambda) {
  internal::check_lambda(lambda);
  internal::check_dims(mu, nu);
  const std::size_t n_gt = mu.size();
  const std::size_t n_det = nu.size();
  const double two_lambda = 2.0 * lambda;

  DenseLp lp;
  lp.num_vars = n_gt + n_det;
  lp.objective.assign(lp.num_vars, 0.0);
  for (std::size_t n = 0; n < n_gt; ++n) lp.objective[n] = -mu.weight(n);
  for (std::size_t m = 0; m < n_det; ++m) {
    lp.objective[n_gt + m] = nu.weight(m);
  }
  const std::size_t n_rows = n_gt + n_det + 2 * n_gt * n_det;
  lp.rows.reserve(n_rows);
  lp.rhs.reserve(n_rows);
  for (std::size_t n = 0; n < n_gt; ++n) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[n] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(two_lambda);
  }
  for (std::size_t m = 0; m < n_det; ++m) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[n_gt + m] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(two_lambda);
  }
  if (n_gt && n_det) {
    const DistanceMatrix d = distance_matrix(mu, nu);
    for (std::size_t n = 0; n < n_gt; ++n) {
      for (std::size_t m = 0; m < n_det; ++m) {
        std::vector<double> up(lp.num_vars, 0.0);
        up[n] = 1.0;
        up[n_gt + m] = -1.0;
        lp.rows.push_back(std::move(up));
        lp.rhs.push_back(d(n, m));
        std::vector<double> down(lp.num_vars, 0.0);
        down[n] = -1.0;
        down[n_gt + m] = 1.0;
        lp.rows.push_back(std::move(down));
        lp.rhs.push_back(d(n, m));
      }
    }
  }

  const DenseLpSolution sol = solve_dense_lp(lp);
  if (sol.status != DenseLpSolution::Status::kOptimal) {
    throw std::logic_error("solve_dual_lp: box LP must be solvable");
  }
  DualLpResult out;
  out.potentials.f.resize(n_gt);
  out.potentials.g.resize(n_det);
  for (std::size_t n = 0; n < n_gt; ++n) {
    out.potentials.f[n] = sol.x[n] - lambda;
  }
  for (std::size_t m = 0; m < n_det; ++m) {
    out.potentials.g[m] = sol.x[n_gt + m] - lambda;
  }
  out.value =
      -sol.value - lambda * total_mass(mu) + lambda * total_mass(nu);
  return out;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_DUAL_LP_HPP_
