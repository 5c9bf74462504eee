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

#ifndef FLATMETRIC_CLASSICAL_METRICS_HPP_
#define FLATMETRIC_CLASSICAL_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "flatmetric/measure.hpp"
#include "flatmetric/transportation.hpp"

namespace flatmetric {

// Exact one-to-one pairing between ground-truth and detected points:
// maximum number of pairs at distance <= tolerance_radius, and among those
// the minimum total paired distance. Unpaired detections count as false
// positives, unpaired ground-truth points as false negatives.
struct PairingResult {
  struct Match {
    int32_t gt;
    int32_t det;
    double distance;
  };
  std::vector<Match> matches;  // lexicographic in (gt, det)
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double tolerance_radius = 0.0;
};

// Solved as an assignment problem on the radius-thresholded bipartite
// graph with the same exact solver used for transport: every admissible
// pair gets cost distance - K with K large enough that any extra match
// beats any saving in distance, so the optimum is lexicographic in
// (-pairs, total distance). Unit supplies make the optimal flows 0/1.
inline PairingResult pair_within_radius(const PointList& gt,
                                        const PointList& det,
                                        double tolerance_radius) {
  if (!std::isfinite(tolerance_radius) || tolerance_radius < 0.0) {
    throw std::invalid_argument("pair_within_radius: bad tolerance radius");
  }
  if (!gt.empty() && !det.empty() && gt.dim() != det.dim()) {
    throw std::invalid_argument("pair_within_radius: dimension mismatch");
  }
  PairingResult out;
  out.tolerance_radius = tolerance_radius;
  const std::size_t n = gt.size();
  const std::size_t m = det.size();
  out.fp = static_cast<std::int64_t>(m);
  out.fn = static_cast<std::int64_t>(n);
  if (n == 0 || m == 0) return out;

  struct Pair {
    int32_t gt;
    int32_t det;
    double distance;
  };
  std::vector<Pair> admissible;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double dist = euclidean_distance(gt[i], det[j]);
      if (dist <= tolerance_radius) {
        admissible.push_back(
            {static_cast<int32_t>(i), static_cast<int32_t>(j), dist});
      }
    }
  }
  if (admissible.empty()) return out;

  const double bonus =
      (static_cast<double>(std::min(n, m)) + 1.0) * tolerance_radius + 1.0;
  BalancedTransportProblem p;
  p.supply.assign(n, 1.0);
  p.supply.push_back(static_cast<double>(m));
  p.demand.assign(m, 1.0);
  p.demand.push_back(static_cast<double>(n));
  const int32_t overflow_row = static_cast<int32_t>(n);
  const int32_t overflow_col = static_cast<int32_t>(m);
  for (const auto& a : admissible) {
    p.arcs.push_back({a.gt, a.det, a.distance - bonus});
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.arcs.push_back({static_cast<int32_t>(i), overflow_col, 0.0});
  }
  for (std::size_t j = 0; j < m; ++j) {
    p.arcs.push_back({overflow_row, static_cast<int32_t>(j), 0.0});
  }
  p.arcs.push_back({overflow_row, overflow_col, 0.0});
  p.initial_basis.resize(n + m + 1);
  for (std::size_t i = 0; i < p.initial_basis.size(); ++i) {
    p.initial_basis[i] = static_cast<int32_t>(admissible.size() + i);
  }
  const BalancedTransportSolution sol = solve_balanced_transport(p);
  for (std::size_t e = 0; e < admissible.size(); ++e) {
    if (sol.flow[e] > 0.5) {
      out.matches.push_back(
          {admissible[e].gt, admissible[e].det, admissible[e].distance});
    }
  }
  out.tp = static_cast<std::int64_t>(out.matches.size());
  out.fp = static_cast<std::int64_t>(m) - out.tp;
  out.fn = static_cast<std::int64_t>(n) - out.tp;
  return out;
}

// Jaccard index in percent. No ground truth and no detections counts as a
// perfect (if vacuous) reconstruction.
inline double jaccard(const PairingResult& p) {
  const std::int64_t denom = p.tp + p.fp + p.fn;
  return denom == 0 ? 100.0
                    : 100.0 * static_cast<double>(p.tp) /
                          static_cast<double>(denom);
}

inline double precision(const PairingResult& p) {
  const std::int64_t denom = p.tp + p.fp;
  return denom == 0 ? 100.0
                    : 100.0 * static_cast<double>(p.tp) /
                          static_cast<double>(denom);
}

inline double recall(const PairingResult& p) {
  const std::int64_t denom = p.tp + p.fn;
  return denom == 0 ? 100.0
                    : 100.0 * static_cast<double>(p.tp) /
                          static_cast<double>(denom);
}

// Root mean square distance over the matched pairs; undefined without
// matches.
inline std::optional<double> rmse(const PairingResult& p) {
  if (p.matches.empty()) return std::nullopt;
  double ss = 0.0;
  for (const auto& m : p.matches) ss += m.distance * m.distance;
  return std::sqrt(ss / static_cast<double>(p.matches.size()));
}

// Combined detection/localization score: 100 for perfect Jaccard and zero
// localization error, decreasing with both. alpha weighs nanometres of
// RMSE against Jaccard percentage points.
inline double efficiency(double jaccard_pct, double rmse_value, double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("efficiency: bad alpha");
  }
  const double miss = 100.0 - jaccard_pct;
  return 100.0 -
         std::sqrt(miss * miss + alpha * alpha * rmse_value * rmse_value);
}

// Root mean square of nearest-neighbour distances pooled over both
// directions; undefined when either set is empty.
inline std::optional<double> rmsmd(const PointList& a, const PointList& b) {
  if (a.empty() || b.empty()) return std::nullopt;
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("rmsmd: dimension mismatch");
  }
  double ss = 0.0;
  for (const Point& pa : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& pb : b) {
      best = std::min(best, euclidean_distance(pa, pb));
    }
    ss += best * best;
  }
  for (const Point& pb : b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& pa : a) {
      best = std::min(best, euclidean_distance(pa, pb));
    }
    ss += best * best;
  }
  return std::sqrt(ss / static_cast<double>(a.size() + b.size()));
}

// Everything the challenge-style comparison reports for one frame. RMSE
// and RMSMD stay unset when undefined; efficiency then scores RMSE as 0,
// which callers must surface as a convention, not a measurement.
struct MetricPanel {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double jaccard = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double efficiency = 0.0;
  std::optional<double> rmse;
  std::optional<double> rmsmd;
  double sum_squared_match_distance = 0.0;  // for pooling across frames
};

inline MetricPanel compute_panel(const PointList& gt, const PointList& det,
                                 double tolerance_radius, double alpha) {
  const PairingResult pairing = pair_within_radius(gt, det, tolerance_radius);
  MetricPanel panel;
  panel.tp = pairing.tp;
  panel.fp = pairing.fp;
  panel.fn = pairing.fn;
  panel.jaccard = jaccard(pairing);
  panel.precision = precision(pairing);
  panel.recall = recall(pairing);
  panel.rmse = rmse(pairing);
  panel.rmsmd = rmsmd(gt, det);
  for (const auto& m : pairing.matches) {
    panel.sum_squared_match_distance += m.distance * m.distance;
  }
  panel.efficiency = efficiency(panel.jaccard, panel.rmse.value_or(0.0), alpha);
  return panel;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_CLASSICAL_METRICS_HPP_
