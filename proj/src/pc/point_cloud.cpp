// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/pc/point_cloud.hpp"

#include "shapekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace shapekit::pc {

PointCloud::PointCloud(std::vector<Point> points, std::vector<Color> colors)
    : points_(std::move(points)), colors_(std::move(colors)) {
  if (!colors_.empty() && colors_.size() != points_.size()) {
    fail(ErrorCode::InvalidConfig, "color count " + std::to_string(colors_.size()) +
                                       " != point count " + std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      fail(ErrorCode::InvalidConfig, "non-finite coordinate at point " + std::to_string(i));
    }
  }
}

PointCloud PointCloud::with_points(std::vector<Point> points) const {
  return PointCloud(std::move(points), colors_);
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<Point> pts;
  std::vector<Color> cols;
  pts.reserve(indices.size());
  if (has_colors()) cols.reserve(indices.size());
  for (std::size_t i : indices) {
    pts.push_back(points_.at(i));
    if (has_colors()) cols.push_back(colors_[i]);
  }
  return PointCloud(std::move(pts), std::move(cols));
}

PointCloud normalize_unit_sphere(const PointCloud& cloud) {
  if (cloud.empty()) fail(ErrorCode::EmptyInput, "normalize_unit_sphere: empty cloud");

  Point centroid = Point::Zero();
  for (const auto& p : cloud.points()) centroid += p;
  centroid /= static_cast<double>(cloud.size());

  std::vector<Point> out;
  out.reserve(cloud.size());
  double max_norm = 0.0;
  for (const auto& p : cloud.points()) {
    out.push_back(p - centroid);
    max_norm = std::max(max_norm, out.back().norm());
  }
  if (max_norm > 0.0) {
    for (auto& p : out) p /= max_norm;
  } else {
    for (auto& p : out) p.setZero();
  }
  return cloud.with_points(std::move(out));
}

SeedSet fps(const PointCloud& cloud, std::size_t n_seeds, std::size_t start_index) {
  const std::size_t n = cloud.size();
  if (n_seeds < 1 || n_seeds > n) {
    fail(ErrorCode::InvalidCount,
         "fps: n_seeds " + std::to_string(n_seeds) + " outside [1, " + std::to_string(n) + "]");
  }
  if (start_index >= n) {
    fail(ErrorCode::InvalidCount,
         "fps: start_index " + std::to_string(start_index) + " out of range");
  }

  const auto& pts = cloud.points();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  SeedSet seeds;
  seeds.indices.reserve(n_seeds);

  std::size_t current = start_index;
  for (std::size_t step = 0; step < n_seeds; ++step) {
    seeds.indices.push_back(current);
    taken[current] = 1;
    if (step + 1 == n_seeds) break;

    std::size_t best = n;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      nearest[i] = std::min(nearest[i], squared_distance(pts[i], pts[current]));
      if (nearest[i] > best_d) {  // strict: earlier index keeps ties
        best_d = nearest[i];
        best = i;
      }
    }
    current = best;
  }
  return seeds;
}

std::vector<Neighborhood> knn_group(const PointCloud& cloud, const SeedSet& seeds, std::size_t k) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) {
    fail(ErrorCode::InvalidCount,
         "knn_group: k " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto& pts = cloud.points();

  std::vector<Neighborhood> groups;
  groups.reserve(seeds.indices.size());
  std::vector<std::size_t> order(n);

  for (std::size_t c : seeds.indices) {
    if (c >= n) fail(ErrorCode::InvalidCount, "knn_group: seed index out of range");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = squared_distance(pts[i], pts[c]);

    std::iota(order.begin(), order.end(), std::size_t{0});
    auto closer = [&](std::size_t a, std::size_t b) {
      if (a == c || b == c) return a == c && b != c;
      if (d[a] != d[b]) return d[a] < d[b];
      return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      closer);

    Neighborhood g;
    g.centroid_index = c;
    g.member_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    g.relative.reserve(k);
    for (std::size_t m : g.member_indices) g.relative.push_back(pts[m] - pts[c]);
    groups.push_back(std::move(g));
  }
  return groups;
}

namespace {

double directed_mean_nn(const std::vector<Point>& from, const std::vector<Point>& to) {
  double sum = 0.0;
  for (const auto& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : to) best = std::min(best, squared_distance(p, q));
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptyInput, "chamfer: empty cloud");
  return directed_mean_nn(a.points(), b.points()) + directed_mean_nn(b.points(), a.points());
}

}  // namespace shapekit::pc
