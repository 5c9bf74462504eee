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

#ifndef FLATMETRIC_SYNTH_HPP_
#define FLATMETRIC_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "flatmetric/classical_metrics.hpp"
#include "flatmetric/flat_metric.hpp"
#include "flatmetric/measure.hpp"
#include "flatmetric/parallel.hpp"

namespace flatmetric {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stable per-substream seed: every (stream, i, j, k) tuple hashes to its
// own seed, so reordering or parallelizing the consumers cannot change any
// stream's values.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t i = 0, std::uint64_t j = 0,
                                 std::uint64_t k = 0) {
  std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ull);
  s = splitmix64(s ^ stream);
  s = splitmix64(s ^ i);
  s = splitmix64(s ^ j);
  s = splitmix64(s ^ k);
  return s;
}

// mt19937_64 with a hand-rolled uniform double so the byte stream never
// depends on the standard library's distribution implementations.
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53 random bits.
  double next() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

namespace internal {

inline PointList sample_rect(std::size_t n, double width, double height,
                             std::uint64_t seed) {
  UniformRng rng(seed);
  PointList out(2);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = width * rng.next();
    const double y = height * rng.next();
    out.push_back({x, y, 0.0});
  }
  return out;
}

// Uniform subset of exactly k points, input order preserved. Partial
// Fisher-Yates over the index array, then the chosen indices are sorted.
inline PointList sample_subset(const PointList& pts, std::size_t k,
                               std::uint64_t seed) {
  const std::size_t n = pts.size();
  if (k > n) {
    throw std::invalid_argument("sample_subset: k exceeds point count");
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  UniformRng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t span = n - i;
    std::size_t j =
        i + std::min<std::size_t>(
                static_cast<std::size_t>(rng.next() * static_cast<double>(span)),
                span - 1);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  PointList out(pts.dim());
  out.reserve(k);
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

}  // namespace internal

// n independent points, uniform over the square [0, side]^2.
inline PointList sample_ground_truth(std::size_t n, double side,
                                     std::uint64_t seed) {
  if (!std::isfinite(side) || side <= 0.0) {
    throw std::invalid_argument("sample_ground_truth: bad side length");
  }
  return internal::sample_rect(n, side, side, seed);
}

// Keeps round(n * recall_pct / 100) points, chosen uniformly without
// replacement; surviving points keep their input order.
inline PointList apply_recall(const PointList& pts, double recall_pct,
                              std::uint64_t seed) {
  if (!std::isfinite(recall_pct) || recall_pct < 0.0 || recall_pct > 100.0) {
    throw std::invalid_argument("apply_recall: recall must be in [0, 100]");
  }
  const auto k = static_cast<std::size_t>(
      std::lround(static_cast<double>(pts.size()) * recall_pct / 100.0));
  return internal::sample_subset(pts, k, seed);
}

// Displaces every point by an independent vector uniform over the disk of
// the given radius (area-uniform: radius scales with sqrt of a uniform
// draw). Planar data only.
inline PointList perturb_in_disk(const PointList& pts, double radius,
                                 std::uint64_t seed) {
  if (!std::isfinite(radius) || radius < 0.0) {
    throw std::invalid_argument("perturb_in_disk: bad radius");
  }
  if (pts.dim() != 2) {
    throw std::invalid_argument("perturb_in_disk: planar point lists only");
  }
  UniformRng rng(seed);
  PointList out(2);
  out.reserve(pts.size());
  for (const Point& p : pts) {
    const double r = radius * std::sqrt(rng.next());
    const double theta = 2.0 * std::numbers::pi * rng.next();
    out.push_back({p.x + r * std::cos(theta), p.y + r * std::sin(theta), 0.0});
  }
  return out;
}

struct SurfaceConfig {
  std::size_t n_points = 100;
  double side = 6400.0;        // nm
  double lambda = 125.0;       // nm
  double alpha = 1.0;          // per nm, efficiency weighting
  double radius_max = 250.0;   // nm, also the pairing tolerance
  std::size_t radius_steps = 51;
  std::size_t recall_steps = 51;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
};

struct SurfaceCell {
  double radius = 0.0;
  double recall = 0.0;
  double mean_flat = 0.0;
  double mean_efficiency = 0.0;
  double mean_jaccard = 0.0;
  // NaN when no trial had a matched pair (e.g. the recall-0 row).
  double mean_rmse = std::numeric_limits<double>::quiet_NaN();
  std::size_t rmse_trials = 0;
  std::size_t trials = 0;
};

struct SurfaceGrid {
  SurfaceConfig config;
  std::vector<double> radius_axis;
  std::vector<double> recall_axis;
  std::vector<SurfaceCell> cells;  // radius-major

  const SurfaceCell& at(std::size_t radius_index,
                        std::size_t recall_index) const {
    return cells[radius_index * recall_axis.size() + recall_index];
  }
};

namespace internal {

inline std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  std::vector<double> out(steps);
  if (steps == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(steps - 1);
  }
  return out;
}

}  // namespace internal

// Mean metric surfaces over the (perturbation radius, recall) grid. Each
// cell runs `trials` independent draws: fresh ground truth, recall
// thinning, disk perturbation, then the flat metric under uniform
// ground-truth normalization and the classical panel with the pairing
// tolerance fixed at radius_max. Per-cell seeds derive from (seed, cell,
// trial) only, and cells own disjoint output slots, so results are
// identical for every worker count.
inline SurfaceGrid surface_sweep(const SurfaceConfig& cfg, int workers = 1) {
  if (cfg.n_points == 0 || cfg.trials == 0 || cfg.radius_steps == 0 ||
      cfg.recall_steps == 0) {
    throw std::invalid_argument("surface_sweep: empty grid");
  }
  if (!std::isfinite(cfg.side) || cfg.side <= 0.0 ||
      !std::isfinite(cfg.lambda) || cfg.lambda <= 0.0 ||
      !std::isfinite(cfg.radius_max) || cfg.radius_max <= 0.0) {
    throw std::invalid_argument("surface_sweep: bad config");
  }
  SurfaceGrid grid;
  grid.config = cfg;
  grid.radius_axis = internal::linspace(0.0, cfg.radius_max, cfg.radius_steps);
  grid.recall_axis = internal::linspace(0.0, 100.0, cfg.recall_steps);
  grid.cells.resize(cfg.radius_steps * cfg.recall_steps);

  parallel_for(grid.cells.size(), workers, [&](std::size_t cell_index) {
    const std::size_t ri = cell_index / cfg.recall_steps;
    const std::size_t ci = cell_index % cfg.recall_steps;
    const double radius = grid.radius_axis[ri];
    const double recall_pct = grid.recall_axis[ci];
    SurfaceCell cell;
    cell.radius = radius;
    cell.recall = recall_pct;
    cell.trials = cfg.trials;
    double flat_sum = 0.0, eff_sum = 0.0, jac_sum = 0.0, rmse_sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const PointList gt = internal::sample_rect(
          cfg.n_points, cfg.side, cfg.side, derive_seed(cfg.seed, 1, ri, ci, t));
      const PointList kept =
          apply_recall(gt, recall_pct, derive_seed(cfg.seed, 2, ri, ci, t));
      const PointList det =
          perturb_in_disk(kept, radius, derive_seed(cfg.seed, 3, ri, ci, t));
      const auto [mu, nu] = uniform_normalize(gt, det);
      flat_sum += flat_metric(mu, nu, cfg.lambda).value;
      const MetricPanel panel =
          compute_panel(gt, det, cfg.radius_max, cfg.alpha);
      eff_sum += panel.efficiency;
      jac_sum += panel.jaccard;
      if (panel.rmse) {
        rmse_sum += *panel.rmse;
        ++cell.rmse_trials;
      }
    }
    const auto trials = static_cast<double>(cfg.trials);
    cell.mean_flat = flat_sum / trials;
    cell.mean_efficiency = eff_sum / trials;
    cell.mean_jaccard = jac_sum / trials;
    if (cell.rmse_trials > 0) {
      cell.mean_rmse = rmse_sum / static_cast<double>(cell.rmse_trials);
    }
    grid.cells[cell_index] = cell;
  });
  return grid;
}

// Small worked example: a ground truth in the unit-ish rectangle, a
// detection set that misses some points, slightly mislocalizes the rest
// and adds a spurious one, and the solved flat metric between them.
struct ToyExample {
  PointList gt_points;
  PointList det_points;
  DiscreteMeasure gt;
  DiscreteMeasure det;
  FlatMetricResult result;
  double lambda = 0.0;
};

inline ToyExample toy_example(std::size_t n = 15, double lambda = 0.1,
                              std::uint64_t seed = 0) {
  if (n == 0) throw std::invalid_argument("toy_example: n must be positive");
  internal::check_lambda(lambda);
  ToyExample toy;
  toy.lambda = lambda;
  toy.gt_points =
      internal::sample_rect(n, 1.0, 0.5, derive_seed(seed, 10, n, 0, 0));
  const std::size_t missed = std::max<std::size_t>(1, n / 5);
  const std::size_t spurious = std::max<std::size_t>(1, n / 15);
  const PointList kept = internal::sample_subset(toy.gt_points, n - missed,
                                                 derive_seed(seed, 11, n, 0, 0));
  const PointList moved =
      perturb_in_disk(kept, 1.5 * lambda, derive_seed(seed, 12, n, 0, 0));
  const PointList extra = internal::sample_rect(
      spurious, 1.0, 0.5, derive_seed(seed, 13, n, 0, 0));
  toy.det_points = PointList(2);
  toy.det_points.reserve(moved.size() + extra.size());
  for (const Point& p : moved) toy.det_points.push_back(p);
  for (const Point& p : extra) toy.det_points.push_back(p);
  const double w = 1.0 / static_cast<double>(n);
  toy.gt = DiscreteMeasure(toy.gt_points, std::vector<double>(n, w));
  toy.det = DiscreteMeasure(toy.det_points,
                            std::vector<double>(toy.det_points.size(), w));
  toy.result = flat_metric(toy.gt, toy.det, lambda);
  return toy;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_SYNTH_HPP_
