// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/corrupt/corrupt.hpp"

#include "shapekit/error.hpp"
#include "shapekit/rng.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace shapekit::corrupt {

using pc::Point;
using pc::PointCloud;

std::string_view kind_name(Kind kind) noexcept {
  switch (kind) {
    case Kind::SingleView:
      return "single_view";
    case Kind::Jitter:
      return "jitter";
    case Kind::Rotate:
      return "rotate";
    case Kind::Augment:
      return "augment";
  }
  return "unknown";
}

Kind kind_from_name(std::string_view name) {
  for (Kind k : {Kind::SingleView, Kind::Jitter, Kind::Rotate, Kind::Augment}) {
    if (kind_name(k) == name) return k;
  }
  fail(ErrorCode::InvalidConfig, "unknown corruption kind '" + std::string(name) + "'");
}

void CorruptionSpec::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidConfig, what); };
  switch (kind) {
    case Kind::Jitter:
      if (!(sigma >= 0.0) || !std::isfinite(sigma)) bad("sigma must be finite and >= 0");
      break;
    case Kind::Rotate:
      if (!(theta > 0.0 && theta <= std::numbers::pi)) bad("theta must lie in (0, pi]");
      break;
    case Kind::SingleView:
      if (!(fov_deg > 0.0 && fov_deg < 180.0)) bad("fov must lie in (0, 180) degrees");
      if (!(camera_distance > 0.0) || !std::isfinite(camera_distance)) {
        bad("camera distance must be positive");
      }
      if (bins == 0) bad("bins must be positive");
      break;
    case Kind::Augment:
      if (!(theta >= 0.0 && theta <= std::numbers::pi)) bad("theta must lie in [0, pi]");
      if (!(scale_min > 0.0 && scale_min <= scale_max) || !std::isfinite(scale_max)) {
        bad("scale range must satisfy 0 < min <= max");
      }
      if (!(translate >= 0.0) || !std::isfinite(translate)) bad("translation range must be >= 0");
      break;
  }
}

Eigen::Matrix3d euler_xyz(double alpha, double beta, double gamma) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(gamma, Vector3d::UnitZ()) * AngleAxisd(beta, Vector3d::UnitY()) *
          AngleAxisd(alpha, Vector3d::UnitX()))
      .toRotationMatrix();
}

namespace {

Eigen::Matrix3d sample_rotation(SplitMix64& rng, double theta) {
  const double alpha = rng.uniform(-theta, theta);
  const double beta = rng.uniform(-theta, theta);
  const double gamma = rng.uniform(-theta, theta);
  return euler_xyz(alpha, beta, gamma);
}

}  // namespace

PointCloud jitter(const PointCloud& cloud, const CorruptionSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  std::vector<Point> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) {
    Point q = p;
    for (int k = 0; k < 3; ++k) q[k] += spec.sigma * rng.normal();
    out.push_back(q);
  }
  return cloud.with_points(std::move(out));
}

PointCloud rotate(const PointCloud& cloud, const CorruptionSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const Eigen::Matrix3d r = sample_rotation(rng, spec.theta);
  std::vector<Point> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(r * p);
  return cloud.with_points(std::move(out));
}

ViewResult single_view(const PointCloud& cloud, const CorruptionSpec& spec) {
  spec.validate();
  if (cloud.empty()) fail(ErrorCode::EmptyView, "single_view: empty input cloud");

  SplitMix64 rng(spec.seed);
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Eigen::Vector3d dir(r * std::cos(phi), r * std::sin(phi), z);
  const Eigen::Vector3d cam = spec.camera_distance * dir;

  // Camera frame: forward looks at the origin.
  const Eigen::Vector3d forward = -dir;
  const Eigen::Vector3d helper =
      std::abs(forward.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d right = forward.cross(helper).normalized();
  const Eigen::Vector3d up = right.cross(forward);

  Eigen::Vector3d lo = cloud[0], hi = cloud[0];
  for (const auto& p : cloud.points()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double delta = 0.01 * (hi - lo).norm();

  const double half_fov = 0.5 * spec.fov_deg * std::numbers::pi / 180.0;
  const double cos_half = std::cos(half_fov);
  const std::size_t bins = spec.bins;

  struct Hit {
    std::size_t index;
    std::size_t cell;
    double range;
  };
  std::vector<Hit> hits;
  std::vector<double> nearest(bins * bins, std::numeric_limits<double>::infinity());

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d v = cloud[i] - cam;
    const double range = v.norm();
    if (!(range > 0.0)) continue;  // point at the camera centre
    const double a = v.dot(right), b = v.dot(up), c = v.dot(forward);
    if (c / range < cos_half) continue;
    const double azimuth = std::atan2(a, c);
    const double elevation = std::atan2(b, std::hypot(a, c));
    auto bin = [&](double angle, double span) {
      const double t = (angle + 0.5 * span) / span;
      const auto idx = static_cast<std::ptrdiff_t>(std::floor(t * static_cast<double>(bins)));
      return static_cast<std::size_t>(
          std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(bins) - 1));
    };
    const std::size_t cell =
        bin(azimuth, 2.0 * std::numbers::pi) * bins + bin(elevation, std::numbers::pi);
    hits.push_back({i, cell, range});
    nearest[cell] = std::min(nearest[cell], range);
  }

  ViewResult out;
  out.camera = cam;
  for (const auto& h : hits) {
    if (h.range <= nearest[h.cell] + delta) out.indices.push_back(h.index);
  }
  if (out.indices.empty()) fail(ErrorCode::EmptyView, "single_view: no point visible from camera");
  out.cloud = cloud.subset(out.indices);
  return out;
}

PointCloud augment(const PointCloud& cloud, const CorruptionSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const Eigen::Matrix3d r = sample_rotation(rng, spec.theta);
  const double scale = rng.uniform(spec.scale_min, spec.scale_max);
  Eigen::Vector3d shift;
  for (int k = 0; k < 3; ++k) shift[k] = rng.uniform(-spec.translate, spec.translate);

  std::vector<Point> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(scale * (r * p) + shift);
  return cloud.with_points(std::move(out));
}

PointCloud apply(const PointCloud& cloud, const CorruptionSpec& spec) {
  switch (spec.kind) {
    case Kind::Jitter:
      return jitter(cloud, spec);
    case Kind::Rotate:
      return rotate(cloud, spec);
    case Kind::SingleView:
      return single_view(cloud, spec).cloud;
    case Kind::Augment:
      return augment(cloud, spec);
  }
  fail(ErrorCode::InvalidConfig, "unknown corruption kind");
}

}  // namespace shapekit::corrupt
