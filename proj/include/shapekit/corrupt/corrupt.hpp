// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/pc/point_cloud.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace shapekit::corrupt {

enum class Kind { SingleView, Jitter, Rotate, Augment };

std::string_view kind_name(Kind kind) noexcept;
/// Throws InvalidConfig on an unknown name.
Kind kind_from_name(std::string_view name);

struct CorruptionSpec {
  Kind kind = Kind::Jitter;
  double sigma = 0.01;                    // jitter stddev
  double theta = std::numbers::pi / 6.0;  // rotate / augment Euler bound
  double fov_deg = 60.0;                  // single_view cone (full angle)
  double camera_distance = 2.0;           // single_view
  std::uint32_t bins = 128;               // single_view polar grid per axis
  double scale_min = 2.0 / 3.0;           // augment
  double scale_max = 3.0 / 2.0;
  double translate = 0.2;  // augment, per-axis half range
  std::uint64_t seed = 0;

  /// Throws InvalidConfig when a field is out of range for `kind`.
  void validate() const;
};

/// Adds independent N(0, sigma^2) noise to each coordinate, point-major x,y,z.
pc::PointCloud jitter(const pc::PointCloud& cloud, const CorruptionSpec& spec);

/// R = Rz(gamma) Ry(beta) Rx(alpha), angles drawn alpha, beta, gamma from
/// U(-theta, theta); rotation about the origin.
pc::PointCloud rotate(const pc::PointCloud& cloud, const CorruptionSpec& spec);

Eigen::Matrix3d euler_xyz(double alpha, double beta, double gamma);

struct ViewResult {
  pc::PointCloud cloud;
  std::vector<std::size_t> indices;  // ascending indices into the input
  Eigen::Vector3d camera = Eigen::Vector3d::Zero();
};

/// Simulates one camera: uniform direction on the sphere at
/// `camera_distance`, looking at the origin. Points outside the field-of-view
/// cone are dropped; the rest go into an azimuth x elevation grid spanning
/// the full angle range (2 pi by pi) in the camera frame, and a cell
/// keeps the points within 1% of the cloud's bounding-box diagonal of its
/// nearest range. Throws EmptyView when nothing survives.
ViewResult single_view(const pc::PointCloud& cloud, const CorruptionSpec& spec);

/// rotate(theta), then uniform scale in [scale_min, scale_max], then a
/// translation from U(-translate, translate)^3.
pc::PointCloud augment(const pc::PointCloud& cloud, const CorruptionSpec& spec);

/// Dispatches on spec.kind. single_view drops the index metadata.
pc::PointCloud apply(const pc::PointCloud& cloud, const CorruptionSpec& spec);

}  // namespace shapekit::corrupt
