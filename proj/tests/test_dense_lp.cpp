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

#include <catch2/catch_amalgamated.hpp>

#include "flatmetric/dense_lp.hpp"

namespace fm = flatmetric;
using Status = fm::DenseLpSolution::Status;

TEST_CASE("dense lp solves a simple bounded maximization") {
  // max 3x + 2y s.t. x + y <= 4, x <= 2  ->  x = 2, y = 2, value 10
  fm::DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {-3.0, -2.0};
  lp.rows = {{1.0, 1.0}, {1.0, 0.0}};
  lp.rhs = {4.0, 2.0};
  const auto sol = fm::solve_dense_lp(lp);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK_THAT(sol.value, Catch::Matchers::WithinAbs(-10.0, 1e-12));
  CHECK_THAT(sol.x[0], Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK_THAT(sol.x[1], Catch::Matchers::WithinAbs(2.0, 1e-12));
}

TEST_CASE("dense lp runs phase 1 for negative right-hand sides") {
  // min x + y s.t. x + y >= 3 (written as -x - y <= -3), x <= 2
  fm::DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 1.0};
  lp.rows = {{-1.0, -1.0}, {1.0, 0.0}};
  lp.rhs = {-3.0, 2.0};
  const auto sol = fm::solve_dense_lp(lp);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK_THAT(sol.value, Catch::Matchers::WithinAbs(3.0, 1e-12));
}

TEST_CASE("dense lp handles equality constraints as inequality pairs") {
  // min 2x + 3y s.t. x + y == 5, x <= 3  ->  x = 3, y = 2, value 12
  fm::DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {2.0, 3.0};
  lp.rows = {{1.0, 1.0}, {-1.0, -1.0}, {1.0, 0.0}};
  lp.rhs = {5.0, -5.0, 3.0};
  const auto sol = fm::solve_dense_lp(lp);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK_THAT(sol.value, Catch::Matchers::WithinAbs(12.0, 1e-12));
  CHECK_THAT(sol.x[0], Catch::Matchers::WithinAbs(3.0, 1e-12));
  CHECK_THAT(sol.x[1], Catch::Matchers::WithinAbs(2.0, 1e-12));
}

TEST_CASE("dense lp reports infeasibility") {
  // x <= 1 and x >= 2
  fm::DenseLp lp;
  lp.num_vars = 1;
  lp.objective = {1.0};
  lp.rows = {{1.0}, {-1.0}};
  lp.rhs = {1.0, -2.0};
  CHECK(fm::solve_dense_lp(lp).status == Status::kInfeasible);
}

TEST_CASE("dense lp reports unboundedness") {
  // min -x with x free upward
  fm::DenseLp lp;
  lp.num_vars = 1;
  lp.objective = {-1.0};
  lp.rows = {{-1.0}};
  lp.rhs = {0.0};
  CHECK(fm::solve_dense_lp(lp).status == Status::kUnbounded);
}

TEST_CASE("dense lp survives a degenerate vertex") {
  // Three constraints meeting at the optimum (0, 1).
  fm::DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {0.0, -1.0};
  lp.rows = {{1.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}};
  lp.rhs = {1.0, 1.0, 1.0};
  const auto sol = fm::solve_dense_lp(lp);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK_THAT(sol.value, Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("dense lp with no constraints and no negative directions") {
  fm::DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 2.0};
  const auto sol = fm::solve_dense_lp(lp);
  REQUIRE(sol.status == Status::kOptimal);
  CHECK(sol.value == 0.0);
}
