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

#ifndef FLATMETRIC_DENSE_LP_HPP_
#define FLATMETRIC_DENSE_LP_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace flatmetric {

// Linear program in the form
//   min objective . x    s.t.  rows[i] . x <= rhs[i],  x >= 0.
// rhs entries may be negative; a phase-1 with artificial variables is run
// when the all-slack start is infeasible. Intended for small instances; the
// tableau is dense and pivoting uses Bland's rule throughout, so the method
// terminates without any anti-cycling heuristics.
struct DenseLp {
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> objective;
};

struct DenseLpSolution {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kOptimal;
  double value = 0.0;
  std::vector<double> x;
};

namespace internal {

class DenseSimplex {
 public:
  explicit DenseSimplex(const DenseLp& lp) : lp_(lp) {}

  DenseLpSolution Solve() {
    Build();
    if (n_artificial_ > 0) {
      std::vector<double> phase1(n_cols_, 0.0);
      for (std::size_t j = n_real_; j < n_cols_; ++j) phase1[j] = 1.0;
      Optimize(phase1, /*allow_artificial=*/true);
      if (BasisCost(phase1) > eps_) {
        return {DenseLpSolution::Status::kInfeasible, 0.0, {}};
      }
      DriveOutArtificials();
    }
    std::vector<double> cost(n_cols_, 0.0);
    for (std::size_t j = 0; j < lp_.num_vars; ++j) cost[j] = lp_.objective[j];
    if (!Optimize(cost, /*allow_artificial=*/false)) {
      return {DenseLpSolution::Status::kUnbounded, 0.0, {}};
    }
    DenseLpSolution out;
    out.status = DenseLpSolution::Status::kOptimal;
    out.x.assign(lp_.num_vars, 0.0);
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (basis_[i] < lp_.num_vars) out.x[basis_[i]] = Rhs(i);
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      out.value += lp_.objective[j] * out.x[j];
    }
    return out;
  }

 private:
  double& At(std::size_t i, std::size_t j) { return tableau_[i][j]; }
  double Rhs(std::size_t i) const { return tableau_[i][n_cols_]; }

  void Build() {
    const std::size_t m = lp_.rows.size();
    if (lp_.rhs.size() != m || lp_.objective.size() != lp_.num_vars) {
      throw std::invalid_argument("DenseLp: inconsistent sizes");
    }
    double scale = 1.0;
    for (const auto& row : lp_.rows) {
      if (row.size() != lp_.num_vars) {
        throw std::invalid_argument("DenseLp: row width mismatch");
      }
      for (double v : row) scale = std::max(scale, std::abs(v));
    }
    for (double v : lp_.rhs) scale = std::max(scale, std::abs(v));
    eps_ = 1e-10 * scale;

    n_artificial_ = 0;
    for (double v : lp_.rhs) {
      if (v < 0.0) ++n_artificial_;
    }
    n_real_ = lp_.num_vars + m;
    n_cols_ = n_real_ + n_artificial_;

    tableau_.assign(m, std::vector<double>(n_cols_ + 1, 0.0));
    basis_.assign(m, 0);
    std::size_t next_artificial = n_real_;
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = lp_.rhs[i] < 0.0;
      const double sign = flip ? -1.0 : 1.0;
      for (std::size_t j = 0; j < lp_.num_vars; ++j) {
        At(i, j) = sign * lp_.rows[i][j];
      }
      At(i, lp_.num_vars + i) = sign;  // slack (surplus when flipped)
      At(i, n_cols_) = sign * lp_.rhs[i];
      if (flip) {
        At(i, next_artificial) = 1.0;
        basis_[i] = next_artificial++;
      } else {
        basis_[i] = lp_.num_vars + i;
      }
    }
  }

  double BasisCost(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      v += cost[basis_[i]] * Rhs(i);
    }
    return v;
  }

  // Bland's rule primal simplex on the current tableau. Returns false when
  // the objective is unbounded below.
  bool Optimize(const std::vector<double>& cost, bool allow_artificial) {
    const std::size_t m = tableau_.size();
    std::vector<double> rc(n_cols_);
    for (;;) {
      for (std::size_t j = 0; j < n_cols_; ++j) rc[j] = cost[j];
      for (std::size_t i = 0; i < m; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        const auto& row = tableau_[i];
        for (std::size_t j = 0; j < n_cols_; ++j) rc[j] -= cb * row[j];
      }
      std::size_t enter = n_cols_;
      const std::size_t enter_limit = allow_artificial ? n_cols_ : n_real_;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (rc[j] < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter == n_cols_) return true;

      std::size_t leave_row = m;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = At(i, enter);
        if (a <= eps_) continue;
        const double ratio = Rhs(i) / a;
        if (leave_row == m || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave_row])) {
          best_ratio = ratio;
          leave_row = i;
        }
      }
      if (leave_row == m) return false;
      PivotOn(leave_row, enter);
    }
  }

  void PivotOn(std::size_t row, std::size_t col) {
    auto& prow = tableau_[row];
    const double p = prow[col];
    for (double& v : prow) v /= p;
    prow[col] = 1.0;
    for (std::size_t i = 0; i < tableau_.size(); ++i) {
      if (i == row) continue;
      const double f = At(i, col);
      if (f == 0.0) continue;
      auto& trow = tableau_[i];
      for (std::size_t j = 0; j <= n_cols_; ++j) trow[j] -= f * prow[j];
      trow[col] = 0.0;
      if (trow[n_cols_] < 0.0 && trow[n_cols_] > -eps_) trow[n_cols_] = 0.0;
    }
    basis_[row] = col;
  }

  // After phase 1 an artificial can linger in the basis at level zero; pivot
  // it onto any real column, or drop the row as redundant.
  void DriveOutArtificials() {
    for (std::size_t i = 0; i < tableau_.size();) {
      if (basis_[i] < n_real_) {
        ++i;
        continue;
      }
      std::size_t col = n_real_;
      for (std::size_t j = 0; j < n_real_; ++j) {
        if (std::abs(At(i, j)) > eps_) {
          col = j;
          break;
        }
      }
      if (col < n_real_) {
        PivotOn(i, col);
        ++i;
      } else {
        tableau_.erase(tableau_.begin() + i);
        basis_.erase(basis_.begin() + i);
      }
    }
  }

  const DenseLp& lp_;
  std::vector<std::vector<double>> tableau_;
  std::vector<std::size_t> basis_;
  std::size_t n_real_ = 0;
  std::size_t n_cols_ = 0;
  std::size_t n_artificial_ = 0;
  double eps_ = 1e-10;
};

}  // namespace internal

inline DenseLpSolution solve_dense_lp(const DenseLp& lp) {
  return internal::DenseSimplex(lp).Solve();
}

}  // namespace flatmetric

#endif  // FLATMETRIC_DENSE_LP_HPP_
