// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace shapekit::pc {

using Point = Eigen::Vector3d;
using Color = Eigen::Vector3d;

/// Ordered 3D points with optional per-point RGB in [0, 1].
///
/// Construction validates that every coordinate is finite and that colors,
/// when given, match the point count one-to-one.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point> points, std::vector<Color> colors = {});

  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<Color>& colors() const noexcept { return colors_; }
  bool has_colors() const noexcept { return !colors_.empty(); }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  /// Same colors, new coordinates. Sizes must agree.
  PointCloud with_points(std::vector<Point> points) const;
  /// Rows picked by index, colors carried along.
  PointCloud subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Point> points_;
  std::vector<Color> colors_;
};

/// Distinct point indices in selection order.
struct SeedSet {
  std::vector<std::size_t> indices;
};

/// A seed and its k nearest members with centered offsets.
struct Neighborhood {
  std::size_t centroid_index = 0;
  std::vector<std::size_t> member_indices;
  std::vector<Point> relative;
};

inline double squared_distance(const Point& a, const Point& b) noexcept {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

/// Centers on the centroid and scales so the farthest point has norm 1.
/// A cloud whose points all coincide collapses onto the origin.
PointCloud normalize_unit_sphere(const PointCloud& cloud);

/// Farthest point sampling: greedy maximin, ties to the lowest index.
SeedSet fps(const PointCloud& cloud, std::size_t n_seeds, std::size_t start_index = 0);

/// k nearest points per seed (the seed itself first, then ascending squared
/// distance, ties to the lowest index).
std::vector<Neighborhood> knn_group(const PointCloud& cloud, const SeedSet& seeds, std::size_t k);

/// Mean squared nearest-neighbour distance a->b plus b->a.
double chamfer(const PointCloud& a, const PointCloud& b);

}  // namespace shapekit::pc
