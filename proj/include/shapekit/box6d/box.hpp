// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shapekit::box6d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Corners = std::array<Vec3, 8>;

/// Canonical corner i has local sign pattern (sx, sy, sz) taken from the bits
/// of i, x most significant: 0 = (-,-,-), 1 = (-,-,+), 2 = (-,+,-), ...,
/// 7 = (+,+,+). Corner i = center + R * (s (*) half_extents).
Vec3 corner_signs(std::size_t i);

struct Pose {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  Mat3 rotation = Mat3::Identity();
};

/// Rectangular parallelepiped: corners as given plus the fitted pose.
class OrientedBox {
 public:
  /// Validates that the points form a box (any order) within `tolerance`
  /// of an exact rectangular fit. Corner order is kept; the pose is fitted
  /// on the canonical reordering.
  static OrientedBox from_corners(const Corners& corners, double tolerance = kTolerance);
  static OrientedBox from_pose(const Pose& pose);

  const Corners& corners() const noexcept { return corners_; }
  const Pose& pose() const noexcept { return pose_; }
  double volume() const noexcept;

  /// Absolute residual allowed between given corners and the fitted box,
  /// scaled by max(1, longest edge).
  static constexpr double kTolerance = 1e-6;
  static constexpr double kMinHalfExtent = 1e-9;

 private:
  OrientedBox(Corners c, Pose p) : corners_(c), pose_(std::move(p)) {}
  Corners corners_{};
  Pose pose_;
};

/// Grammar: '[' triple (',' triple){7} ']' with triple = '[' num ',' num ','
/// num ']'; arbitrary whitespace between tokens. Throws ParseError on
/// grammar violations and InvalidBox on non-rectangular or flat geometry.
OrientedBox parse_box(std::string_view text);

/// "[[x, y, z], [x, y, z], ...]" with 6 fractional digits, no exponents.
std::string format_box(const OrientedBox& box);
std::string format_corners(const Corners& corners);

/// Throws InvalidPose for a non-rotation matrix or non-positive extents.
OrientedBox corners_from_pose(const Vec3& center, const Vec3& half_extents, const Mat3& rotation);

/// Fits center, half extents and a proper rotation. Corners may come in any
/// order; they are canonicalized first.
Pose fit_pose_from_corners(const Corners& corners);

/// Exact intersection-over-union of two oriented boxes, in [0, 1].
double iou(const OrientedBox& a, const OrientedBox& b);

/// Exact volume of a ∩ b.
double intersection_volume(const OrientedBox& a, const OrientedBox& b);

struct GroundingResult {
  std::optional<OrientedBox> predicted;  // empty when the prediction is unusable
  OrientedBox ground_truth;
  double iou = 0.0;
  bool hit = false;
};

struct RegReport {
  double accuracy = 0.0;
  std::size_t hits = 0;
  std::size_t total = 0;
  std::size_t unusable_predictions = 0;
  std::vector<GroundingResult> results;
};

inline constexpr double kRegThreshold = 0.25;

/// Referring-expression grounding accuracy over (prediction, ground truth)
/// box strings. Predictions that fail to parse or validate count as misses.
RegReport reg_accuracy(std::span<const std::pair<std::string, std::string>> pairs,
                       double threshold = kRegThreshold);

}  // namespace shapekit::box6d
