// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/box6d/box.hpp"

#include "shapekit/detail/numfmt.hpp"
#include "shapekit/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace shapekit::box6d {

namespace {

// Six fractional digits can move each coordinate by half a quantum; after the
// rectangular fit that compounds to at most five half-quanta per coordinate.
constexpr double kDecimalSlack = 5 * 0.5e-6;

double edge_scale(const Vec3& half_extents) { return std::max(1.0, 2.0 * half_extents.maxCoeff()); }

Corners ideal_corners(const Pose& p) {
  Corners out;
  for (std::size_t i = 0; i < 8; ++i) {
    out[i] = p.center + p.rotation * corner_signs(i).cwiseProduct(p.half_extents);
  }
  return out;
}

enum class FitStatus { Ok, Degenerate, LeftHanded, NotRectangular };

// Assumes canonical order. Centre is the corner mean; axis k is the signed
// mean of corners along sign bit k, orthonormalized by polar decomposition.
FitStatus fit_canonical(const Corners& c, double tolerance, Pose& out) {
  Vec3 center = Vec3::Zero();
  Mat3 axes = Mat3::Zero();
  for (std::size_t i = 0; i < 8; ++i) {
    center += c[i];
    const Vec3 s = corner_signs(i);
    for (int k = 0; k < 3; ++k) axes.col(k) += s[k] * c[i];
  }
  center /= 8.0;
  axes /= 8.0;

  Mat3 unit;
  for (int k = 0; k < 3; ++k) {
    const double len = axes.col(k).norm();
    if (!(len > OrientedBox::kMinHalfExtent)) return FitStatus::Degenerate;
    unit.col(k) = axes.col(k) / len;
  }
  Eigen::JacobiSVD<Mat3> svd(unit, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0.0) return FitStatus::LeftHanded;

  Pose pose;
  pose.center = center;
  pose.rotation = rot;
  for (int k = 0; k < 3; ++k) pose.half_extents[k] = rot.col(k).dot(axes.col(k));
  if (!(pose.half_extents.minCoeff() > OrientedBox::kMinHalfExtent)) return FitStatus::Degenerate;

  const Corners ideal = ideal_corners(pose);
  double residual = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    residual = std::max(residual, (c[i] - ideal[i]).cwiseAbs().maxCoeff());
  }
  if (residual > tolerance * edge_scale(pose.half_extents)) return FitStatus::NotRectangular;
  out = pose;
  return FitStatus::Ok;
}

// Finds the box structure in arbitrarily ordered corners: the three edges
// leaving corner 0 span the other seven points. Returns canonical order.
std::optional<Corners> recanonicalize(const Corners& c, double tolerance, bool& degenerate) {
  double extent = 0.0;
  for (const auto& p : c) extent = std::max(extent, (p - c[0]).cwiseAbs().maxCoeff());
  const double match_tol = 10.0 * tolerance * std::max(1.0, extent);

  for (std::size_t a = 1; a < 8; ++a) {
    for (std::size_t b = a + 1; b < 8; ++b) {
      for (std::size_t d = b + 1; d < 8; ++d) {
        Mat3 edges;
        edges.col(0) = c[a] - c[0];
        edges.col(1) = c[b] - c[0];
        edges.col(2) = c[d] - c[0];
        // Right-handed frame: swap the last two axes otherwise.
        const bool swap = edges.determinant() < 0.0;
        if (swap) edges.col(1).swap(edges.col(2));

        Corners ordered;
        std::array<char, 8> used{};
        bool ok = true;
        for (std::size_t m = 0; m < 8 && ok; ++m) {
          const Vec3 s = corner_signs(m);
          Vec3 q = c[0];
          for (int k = 0; k < 3; ++k) {
            if (s[k] > 0) q += edges.col(k);
          }
          std::size_t best = 8;
          double best_d = match_tol;
          for (std::size_t i = 0; i < 8; ++i) {
            if (used[i]) continue;
            const double dist = (c[i] - q).cwiseAbs().maxCoeff();
            if (dist <= best_d) {
              best_d = dist;
              best = i;
            }
          }
          if (best == 8) {
            ok = false;
          } else {
            used[best] = 1;
            ordered[m] = c[best];
          }
        }
        if (!ok) continue;
        Pose pose;
        switch (fit_canonical(ordered, tolerance, pose)) {
          case FitStatus::Ok:
            return ordered;
          case FitStatus::Degenerate:
            degenerate = true;
            break;
          default:
            break;
        }
      }
    }
  }
  return std::nullopt;
}

bool valid_rotation(const Mat3& r) {
  if (!r.allFinite()) return false;
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= 1e-6 && std::abs(r.determinant() - 1.0) <= 1e-6;
}

// --- text grammar ----------------------------------------------------------

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char ch) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != ch) {
      error(std::string("expected '") + ch + "'");
    }
    ++pos_;
  }

  bool peek(char ch) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == ch;
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - from;
    };
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
    std::size_t mantissa = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      error("expected a number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) error("malformed exponent");
    }
    auto v = detail::parse_double(s_.substr(start, pos_ - start));
    if (!v || !std::isfinite(*v)) {
      pos_ = start;
      error("number out of range");
    }
    return *v;
  }

  bool at_end() {
    skip_ws();
    return pos_ == s_.size();
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "box text, offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

void append_fixed(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string_view text(buf);
  if (text == "-0.000000") text = "0.000000";
  out += text;
}

// --- convex polytope clipping ----------------------------------------------

using Face = std::vector<Vec3>;  // counter-clockwise seen from outside
using Polytope = std::vector<Face>;

Polytope box_polytope(const Pose& pose) {
  const Corners c = ideal_corners(pose);
  Polytope faces;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {-1, 1}) {
      Face f;
      // Walk the four corners with this sign on `axis` in cyclic order of
      // the remaining two sign bits.
      const int u = (axis + 1) % 3;
      const int w = (axis + 2) % 3;
      const int cycle[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
      for (const auto& cw : cycle) {
        std::size_t idx = 0;
        int signs[3];
        signs[axis] = sign;
        signs[u] = cw[0];
        signs[w] = cw[1];
        for (int k = 0; k < 3; ++k) {
          if (signs[k] > 0) idx |= std::size_t{1} << (2 - k);
        }
        f.push_back(c[idx]);
      }
      const Vec3 outward = sign * pose.rotation.col(axis);
      if ((f[1] - f[0]).cross(f[2] - f[0]).dot(outward) < 0.0) std::reverse(f.begin(), f.end());
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

// Keeps the part of `poly` with normal.x <= offset.
Polytope clip(const Polytope& poly, const Vec3& normal, double offset, double eps) {
  Polytope out;
  std::vector<Vec3> on_plane;
  bool any_outside = false;
  for (const auto& face : poly) {
    for (const auto& p : face) {
      if (normal.dot(p) - offset > eps) any_outside = true;
    }
  }
  if (!any_outside) return poly;

  for (const auto& face : poly) {
    Face kept;
    const std::size_t n = face.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& p = face[i];
      const Vec3& q = face[(i + 1) % n];
      const double dp = normal.dot(p) - offset;
      const double dq = normal.dot(q) - offset;
      const bool p_in = dp <= eps;
      const bool q_in = dq <= eps;
      if (p_in) {
        kept.push_back(p);
        if (std::abs(dp) <= eps) on_plane.push_back(p);
      }
      if (p_in != q_in) {
        const double t = dp / (dp - dq);
        const Vec3 x = p + t * (q - p);
        kept.push_back(x);
        on_plane.push_back(x);
      }
    }
    if (kept.size() >= 3) out.push_back(std::move(kept));
  }

  // Cap polygon on the cutting plane.
  std::vector<Vec3> cap;
  for (const auto& p : on_plane) {
    bool dup = false;
    for (const auto& q : cap) {
      if ((p - q).cwiseAbs().maxCoeff() <= 10 * eps) {
        dup = true;
        break;
      }
    }
    if (!dup) cap.push_back(p);
  }
  if (cap.size() >= 3) {
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : cap) centroid += p;
    centroid /= static_cast<double>(cap.size());
    const Vec3 n = normal.normalized();
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = n.cross(helper).normalized();
    const Vec3 w = n.cross(u);  // u x w = n
    std::sort(cap.begin(), cap.end(), [&](const Vec3& a, const Vec3& b) {
      return std::atan2(w.dot(a - centroid), u.dot(a - centroid)) <
             std::atan2(w.dot(b - centroid), u.dot(b - centroid));
    });
    out.push_back(std::move(cap));
  }
  return out;
}

double polytope_volume(const Polytope& poly) {
  Vec3 origin = Vec3::Zero();
  std::size_t count = 0;
  for (const auto& f : poly) {
    for (const auto& p : f) {
      origin += p;
      ++count;
    }
  }
  if (count == 0) return 0.0;
  origin /= static_cast<double>(count);
  double six_v = 0.0;
  for (const auto& f : poly) {
    const Vec3 a = f[0] - origin;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      six_v += a.dot((f[i] - origin).cross(f[i + 1] - origin));
    }
  }
  return std::max(0.0, six_v / 6.0);
}

double coordinate_scale(const Pose& a, const Pose& b) {
  return std::max({1.0, a.center.cwiseAbs().maxCoeff() + a.half_extents.sum(),
                   b.center.cwiseAbs().maxCoeff() + b.half_extents.sum()});
}

Polytope clipped(const OrientedBox& a, const OrientedBox& b) {
  const Pose& pa = a.pose();
  const Pose& pb = b.pose();
  const double eps = 1e-12 * coordinate_scale(pa, pb);
  Polytope poly = box_polytope(pa);
  for (int k = 0; k < 3 && !poly.empty(); ++k) {
    const Vec3 n = pb.rotation.col(k);
    const double c = n.dot(pb.center);
    poly = clip(poly, n, c + pb.half_extents[k], eps);
    if (poly.empty()) break;
    poly = clip(poly, -n, -c + pb.half_extents[k], eps);
  }
  return poly;
}

}  // namespace

Vec3 corner_signs(std::size_t i) {
  return Vec3((i & 4) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 1) ? 1.0 : -1.0);
}

double OrientedBox::volume() const noexcept { return 8.0 * pose_.half_extents.prod(); }

OrientedBox OrientedBox::from_corners(const Corners& corners, double tolerance) {
  for (const auto& p : corners) {
    if (!p.allFinite()) fail(ErrorCode::InvalidBox, "non-finite corner coordinate");
  }
  Pose pose;
  switch (fit_canonical(corners, tolerance, pose)) {
    case FitStatus::Ok:
      return OrientedBox(corners, pose);
    default:
      break;
  }
  bool degenerate = false;
  auto ordered = recanonicalize(corners, tolerance, degenerate);
  if (!ordered) {
    fail(ErrorCode::InvalidBox, degenerate ? "box has a degenerate (near-zero) extent"
                                           : "corners do not form a rectangular box");
  }
  fit_canonical(*ordered, tolerance, pose);
  return OrientedBox(corners, pose);
}

OrientedBox OrientedBox::from_pose(const Pose& pose) {
  if (!valid_rotation(pose.rotation)) {
    fail(ErrorCode::InvalidPose, "rotation is not orthonormal with determinant +1");
  }
  if (!pose.center.allFinite() || !pose.half_extents.allFinite() ||
      !(pose.half_extents.minCoeff() > kMinHalfExtent)) {
    fail(ErrorCode::InvalidPose, "half extents must be finite and positive");
  }
  return OrientedBox(ideal_corners(pose), pose);
}

OrientedBox parse_box(std::string_view text) {
  Scanner sc(text);
  Corners corners;
  sc.expect('[');
  for (std::size_t i = 0; i < 8; ++i) {
    if (i > 0) {
      if (sc.peek(']')) sc.error("expected 8 corners, got " + std::to_string(i));
      sc.expect(',');
    }
    sc.expect('[');
    for (int k = 0; k < 3; ++k) {
      if (k > 0) sc.expect(',');
      corners[i][k] = sc.number();
    }
    sc.expect(']');
  }
  if (sc.peek(',')) sc.error("more than 8 corners");
  sc.expect(']');
  if (!sc.at_end()) sc.error("trailing characters");
  return OrientedBox::from_corners(corners, OrientedBox::kTolerance + kDecimalSlack);
}

std::string format_corners(const Corners& corners) {
  std::string out = "[";
  for (std::size_t i = 0; i < 8; ++i) {
    if (i > 0) out += ", ";
    out += '[';
    for (int k = 0; k < 3; ++k) {
      if (k > 0) out += ", ";
      append_fixed(out, corners[i][k]);
    }
    out += ']';
  }
  out += ']';
  return out;
}

std::string format_box(const OrientedBox& box) { return format_corners(box.corners()); }

OrientedBox corners_from_pose(const Vec3& center, const Vec3& half_extents, const Mat3& rotation) {
  return OrientedBox::from_pose(Pose{center, half_extents, rotation});
}

Pose fit_pose_from_corners(const Corners& corners) {
  return OrientedBox::from_corners(corners).pose();
}

double intersection_volume(const OrientedBox& a, const OrientedBox& b) {
  return polytope_volume(clipped(a, b));
}

double iou(const OrientedBox& a, const OrientedBox& b) {
  const Polytope inter_poly = clipped(a, b);
  if (inter_poly.empty()) return 0.0;
  const double inter = polytope_volume(inter_poly);
  const double vol_a = polytope_volume(box_polytope(a.pose()));
  const double vol_b = polytope_volume(box_polytope(b.pose()));
  const double uni = vol_a + vol_b - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

RegReport reg_accuracy(std::span<const std::pair<std::string, std::string>> pairs,
                       double threshold) {
  if (pairs.empty()) fail(ErrorCode::EmptyInput, "reg_accuracy: no prediction/ground-truth pairs");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorCode::InvalidConfig, "IoU threshold must lie in [0, 1]");
  }
  RegReport report;
  report.total = pairs.size();
  for (const auto& [pred_text, gt_text] : pairs) {
    GroundingResult r{std::nullopt, parse_box(gt_text), 0.0, false};
    try {
      r.predicted = parse_box(pred_text);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError && e.code() != ErrorCode::InvalidBox) throw;
      ++report.unusable_predictions;
    }
    if (r.predicted) {
      r.iou = iou(*r.predicted, r.ground_truth);
      r.hit = r.iou >= threshold;
    }
    if (r.hit) ++report.hits;
    report.results.push_back(std::move(r));
  }
  report.accuracy = static_cast<double>(report.hits) / static_cast<double>(report.total);
  return report;
}

}  // namespace shapekit::box6d
