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

#ifndef FLATMETRIC_MEASURE_HPP_
#define FLATMETRIC_MEASURE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flatmetric {

// Coordinates are in nanometres throughout. z is kept at 0 for planar data.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline bool point_is_finite(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline double euclidean_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// A list of localization coordinates with a fixed dimension (2 or 3).
// Coordinates must be finite; dim 2 points carry z == 0.
class PointList {
 public:
  PointList() : dim_(2) {}

  explicit PointList(int dim) : dim_(dim) {
    if (dim != 2 && dim != 3) {
      throw std::invalid_argument("PointList: dim must be 2 or 3, got " +
                                  std::to_string(dim));
    }
  }

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  void push_back(Point p) {
    if (dim_ == 2) p.z = 0.0;
    if (!point_is_finite(p)) {
      throw std::invalid_argument("PointList: non-finite coordinate");
    }
    points_.push_back(p);
  }

  void reserve(std::size_t n) { points_.reserve(n); }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  int dim_;
  std::vector<Point> points_;
};

// Nonnegative discrete measure: finitely many weighted Dirac atoms.
// Weights are strictly positive and finite; support atoms need not be
// distinct (duplicates act as one atom of summed weight in every metric).
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  DiscreteMeasure(PointList support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.size() != weights_.size()) {
      throw std::invalid_argument(
          "DiscreteMeasure: support and weights length mismatch (" +
          std::to_string(support_.size()) + " vs " +
          std::to_string(weights_.size()) + ")");
    }
    for (double w : weights_) {
      if (!std::isfinite(w) || w <= 0.0) {
        throw std::invalid_argument(
            "DiscreteMeasure: weights must be finite and > 0");
      }
    }
  }

  int dim() const { return support_.dim(); }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  const PointList& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& point(std::size_t i) const { return support_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

 private:
  PointList support_;
  std::vector<double> weights_;
};

inline DiscreteMeasure new_measure(PointList support,
                                   std::vector<double> weights) {
  return DiscreteMeasure(std::move(support), std::move(weights));
}

// Total variation mass: plain left-to-right sum of the weights.
inline double total_mass(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (double w : mu.weights()) s += w;
  return s;
}

// Turns a ground-truth / detection point pair into measures weighted
// 1/n_ground_truth on both sides, so the ground truth has unit mass and a
// value of the flat metric reads directly in nanometres.
inline std::pair<DiscreteMeasure, DiscreteMeasure> uniform_normalize(
    const PointList& ground_truth, const PointList& detections) {
  if (ground_truth.empty()) {
    throw std::invalid_argument("uniform_normalize: empty ground truth");
  }
  if (ground_truth.dim() != detections.dim()) {
    throw std::invalid_argument("uniform_normalize: dimension mismatch");
  }
  const double w = 1.0 / static_cast<double>(ground_truth.size());
  DiscreteMeasure mu(ground_truth,
                     std::vector<double>(ground_truth.size(), w));
  if (detections.empty()) {
    return {std::move(mu), DiscreteMeasure(PointList(detections.dim()), {})};
  }
  DiscreteMeasure nu(detections, std::vector<double>(detections.size(), w));
  return {std::move(mu), std::move(nu)};
}

// Dense row-major matrix of pairwise Euclidean distances, rows indexing mu.
struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> d;

  double operator()(std::size_t n, std::size_t m) const {
    return d[n * cols + m];
  }
};

inline DistanceMatrix distance_matrix(const DiscreteMeasure& mu,
                                      const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw std::invalid_argument("distance_matrix: dimension mismatch");
  }
  DistanceMatrix out;
  out.rows = mu.size();
  out.cols = nu.size();
  out.d.resize(out.rows * out.cols);
  for (std::size_t n = 0; n < out.rows; ++n) {
    for (std::size_t m = 0; m < out.cols; ++m) {
      out.d[n * out.cols + m] = euclidean_distance(mu.point(n), nu.point(m));
    }
  }
  return out;
}

}  // namespace flatmetric

#endif  // FLATMETRIC_MEASURE_HPP_
