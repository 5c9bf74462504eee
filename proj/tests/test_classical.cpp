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
#include <cmath>

#include "flatmetric/classical_metrics.hpp"
#include "flatmetric/measure.hpp"
#include "support/oracles.hpp"

namespace fm = flatmetric;
using fm::testing::oracle_pairing;
using fm::testing::random_measure;

namespace {

fm::PointList points2(std::initializer_list<fm::Point> pts) {
  fm::PointList list(2);
  for (const auto& p : pts) list.push_back(p);
  return list;
}

double total_distance(const fm::PairingResult& pr) {
  double s = 0.0;
  for (const auto& m : pr.matches) s += m.distance;
  return s;
}

}  // namespace

TEST_CASE("pairing matches the obvious one-to-one assignment") {
  const auto gt = points2({{0, 0, 0}, {10, 0, 0}});
  const auto det = points2({{0.5, 0, 0}, {10.5, 0, 0}});
  const auto pr = fm::pair_within_radius(gt, det, 1.0);
  REQUIRE(pr.matches.size() == 2);
  CHECK(pr.matches[0].gt == 0);
  CHECK(pr.matches[0].det == 0);
  CHECK(pr.matches[1].gt == 1);
  CHECK(pr.matches[1].det == 1);
  CHECK_THAT(total_distance(pr), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("pairing prefers more matches over shorter ones") {
  // Greedy nearest-first pairs gt0-det0 at 0.9 and strands gt1: det1 sits
  // 1.1 from gt0 but only 0.1 from gt1. The optimum keeps both rows.
  const auto gt = points2({{0, 0, 0}, {1, 0, 0}});
  const auto det = points2({{0.9, 0, 0}, {1.1, 0, 0}});
  const auto pr = fm::pair_within_radius(gt, det, 1.0);
  REQUIRE(pr.matches.size() == 2);
  CHECK_THAT(total_distance(pr), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("pairing radius is inclusive") {
  const auto gt = points2({{0, 0, 0}});
  const auto det = points2({{3, 4, 0}});
  CHECK(fm::pair_within_radius(gt, det, 5.0).matches.size() == 1);
  CHECK(fm::pair_within_radius(gt, det, 4.999999).matches.empty());
}

TEST_CASE("pairing agrees with exhaustive search on random instances") {
  fm::UniformRng rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(rng.next() * 7);
    const auto m = static_cast<std::size_t>(rng.next() * 7);
    const auto gt = random_measure(rng, n, 2, 3.0, true).support();
    const auto det = random_measure(rng, m, 2, 3.0, true).support();
    const double radius = 0.5 + 2.0 * rng.next();
    const auto pr = fm::pair_within_radius(gt, det, radius);
    const auto want = oracle_pairing(gt, det, radius);
    CHECK(pr.matches.size() == want.max_matches);
    if (pr.matches.size() == want.max_matches) {
      CHECK_THAT(total_distance(pr),
                 Catch::Matchers::WithinAbs(want.min_total_distance, 1e-9));
    }
    // Every reported match stays inside the radius and uses each atom once.
    std::vector<int> gt_used(n, 0), det_used(m, 0);
    for (const auto& mt : pr.matches) {
      CHECK(mt.distance <= radius + 1e-12);
      ++gt_used[mt.gt];
      ++det_used[mt.det];
    }
    for (int c : gt_used) CHECK(c <= 1);
    for (int c : det_used) CHECK(c <= 1);
  }
}

TEST_CASE("panel on disjoint point sets") {
  const auto gt = points2({{0, 0, 0}, {1, 1, 0}});
  const auto det = points2({{50, 50, 0}});
  const auto panel = fm::compute_panel(gt, det, 1.0, 1.0);
  CHECK(panel.tp == 0);
  CHECK(panel.fp == 1);
  CHECK(panel.fn == 2);
  CHECK(panel.jaccard == 0.0);
  CHECK(panel.precision == 0.0);
  CHECK(panel.recall == 0.0);
  CHECK_FALSE(panel.rmse.has_value());
  // No matches: the distance penalty is taken as zero by convention.
  CHECK_THAT(panel.efficiency, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("panel on identical point sets") {
  const auto gt = points2({{0, 0, 0}, {5, 5, 0}, {9, 1, 0}});
  const auto panel = fm::compute_panel(gt, gt, 2.0, 1.0);
  CHECK(panel.tp == 3);
  CHECK(panel.fp == 0);
  CHECK(panel.fn == 0);
  CHECK(panel.jaccard == 100.0);
  CHECK(panel.precision == 100.0);
  CHECK(panel.recall == 100.0);
  REQUIRE(panel.rmse.has_value());
  CHECK(*panel.rmse == 0.0);
  CHECK(panel.efficiency == 100.0);
  REQUIRE(panel.rmsmd.has_value());
  CHECK(*panel.rmsmd == 0.0);
}

TEST_CASE("empty-versus-empty follows the perfect-score convention") {
  const fm::PointList none(2);
  const auto panel = fm::compute_panel(none, none, 1.0, 1.0);
  CHECK(panel.jaccard == 100.0);
  CHECK(panel.precision == 100.0);
  CHECK(panel.recall == 100.0);
  CHECK_FALSE(panel.rmse.has_value());
  CHECK_FALSE(panel.rmsmd.has_value());
  CHECK_THAT(panel.efficiency, Catch::Matchers::WithinAbs(100.0, 1e-12));
}

TEST_CASE("empty detections against real ground truth score zero") {
  const auto gt = points2({{0, 0, 0}});
  const fm::PointList none(2);
  const auto panel = fm::compute_panel(gt, none, 1.0, 1.0);
  CHECK(panel.jaccard == 0.0);
  CHECK(panel.precision == 100.0);  // no false positives were produced
  CHECK(panel.recall == 0.0);
  CHECK(panel.fn == 1);
  CHECK_FALSE(panel.rmsmd.has_value());
}

TEST_CASE("rmse pools squared distances over matches only") {
  const auto gt = points2({{0, 0, 0}, {10, 0, 0}, {40, 40, 0}});
  const auto det = points2({{3, 4, 0}, {10, 1, 0}});
  const auto panel = fm::compute_panel(gt, det, 6.0, 1.0);
  CHECK(panel.tp == 2);
  CHECK(panel.fn == 1);
  CHECK(panel.fp == 0);
  REQUIRE(panel.rmse.has_value());
  // Match distances 5 and 1: rmse = sqrt((25 + 1) / 2).
  CHECK_THAT(*panel.rmse,
             Catch::Matchers::WithinRel(std::sqrt(13.0), 1e-12));
  CHECK_THAT(panel.jaccard, Catch::Matchers::WithinRel(200.0 / 3.0, 1e-12));
}

TEST_CASE("efficiency combines jaccard and rmse with the alpha weight") {
  const auto gt = points2({{0, 0, 0}, {10, 0, 0}});
  const auto det = points2({{3, 4, 0}, {10, 0, 0}});
  const auto panel = fm::compute_panel(gt, det, 6.0, 0.5);
  REQUIRE(panel.rmse.has_value());
  const double rmse = std::sqrt(25.0 / 2.0);
  CHECK_THAT(*panel.rmse, Catch::Matchers::WithinRel(rmse, 1e-12));
  CHECK(panel.jaccard == 100.0);
  const double want = 100.0 - std::sqrt(0.25 * rmse * rmse);
  CHECK_THAT(panel.efficiency, Catch::Matchers::WithinRel(want, 1e-12));
}

TEST_CASE("efficiency can go negative for poor localizations") {
  const auto gt = points2({{0, 0, 0}});
  const auto det = points2({{150, 0, 0}});
  const auto panel = fm::compute_panel(gt, det, 200.0, 1.0);
  CHECK(panel.jaccard == 100.0);
  REQUIRE(panel.rmse.has_value());
  CHECK_THAT(panel.efficiency,
             Catch::Matchers::WithinRel(100.0 - 150.0, 1e-12));
}

TEST_CASE("rmsmd pools both nearest-neighbour directions") {
  const auto gt = points2({{0, 0, 0}, {4, 0, 0}});
  const auto det = points2({{1, 0, 0}});
  // gt->det: 1 and 3; det->gt: 1. Pooled mean of squares (1+9+1)/3.
  const auto r = fm::rmsmd(gt, det);
  REQUIRE(r.has_value());
  CHECK_THAT(*r, Catch::Matchers::WithinRel(std::sqrt(11.0 / 3.0), 1e-12));
  CHECK_FALSE(fm::rmsmd(gt, fm::PointList(2)).has_value());
  CHECK_FALSE(fm::rmsmd(fm::PointList(2), det).has_value());
}

TEST_CASE("panel rejects mismatched dimensions and bad parameters") {
  const auto gt = points2({{0, 0, 0}});
  fm::PointList det3(3);
  det3.push_back({0, 0, 1});
  CHECK_THROWS_AS(fm::compute_panel(gt, det3, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fm::pair_within_radius(gt, gt, -1.0),
                  std::invalid_argument);
}

TEST_CASE("radius zero still matches coincident points") {
  const auto gt = points2({{2, 2, 0}, {3, 3, 0}});
  const auto det = points2({{2, 2, 0}});
  const auto pr = fm::pair_within_radius(gt, det, 0.0);
  REQUIRE(pr.matches.size() == 1);
  CHECK(pr.matches[0].gt == 0);
  CHECK(pr.matches[0].distance == 0.0);
}
