// Copyright 2026 The cogmap Authors
//
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

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "cogmap/error.hpp"

namespace cogmap {

template <typename Scalar>
using Vector3T = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Aabb3T = Eigen::AlignedBox<Scalar, 3>;

using Vector3 = Vector3T<double>;
using Vector2 = Vector2T<double>;
using Aabb3 = Aabb3T<double>;

/// Seconds since epoch held at microsecond resolution.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static Timestamp from_micros(std::int64_t micros);
  /// Sub-microsecond digits are truncated.
  static Timestamp from_seconds(double seconds);
  /// Parses plain decimal seconds ("1305031102.175304"); exponent notation
  /// falls back to from_seconds.
  static Timestamp parse(std::string_view text);

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double seconds() const { return static_cast<double>(micros_) * 1e-6; }
  /// Fixed six-decimal rendering, exact for every representable stamp.
  std::string to_string() const;

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  explicit constexpr Timestamp(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

/// Signed difference a - b in seconds.
inline double seconds_between(Timestamp a, Timestamp b) {
  return static_cast<double>(a.micros() - b.micros()) * 1e-6;
}

/// Camera-to-world rigid transform. Quaternion components are stored by Eigen
/// in (x, y, z, w) order, the same order the trajectory files use.
template <typename Scalar>
struct PoseT {
  Timestamp stamp;
  Eigen::Quaternion<Scalar> rotation = Eigen::Quaternion<Scalar>::Identity();
  Vector3T<Scalar> translation = Vector3T<Scalar>::Zero();
};
using Pose = PoseT<double>;

inline constexpr double kUnitQuaternionTolerance = 1e-6;

template <typename Scalar>
bool is_unit(const Eigen::Quaternion<Scalar>& q,
             Scalar tolerance = Scalar(kUnitQuaternionTolerance)) {
  using std::abs;
  return abs(q.norm() - Scalar(1)) <= tolerance;
}

template <typename Scalar>
void require_valid(const PoseT<Scalar>& pose) {
  if (!is_unit(pose.rotation) || !pose.translation.allFinite()) {
    throw Error(ErrorCode::kInvalidPose,
                "pose at t=" + pose.stamp.to_string() + " has a non-unit quaternion or non-finite translation");
  }
}

/// Maps a camera-frame point into the world frame: R(q) p + t.
template <typename Scalar, typename Derived>
Vector3T<Scalar> rotate_and_translate(const PoseT<Scalar>& pose,
                                      const Eigen::MatrixBase<Derived>& point_camera) {
  require_valid(pose);
  return pose.rotation.toRotationMatrix() * point_camera + pose.translation;
}

/// Inverse of rotate_and_translate: R(q)^T (p - t).
template <typename Scalar, typename Derived>
Vector3T<Scalar> world_to_camera(const PoseT<Scalar>& pose,
                                 const Eigen::MatrixBase<Derived>& point_world) {
  require_valid(pose);
  return pose.rotation.toRotationMatrix().transpose() * (point_world - pose.translation);
}

/// Convention of incoming trajectories. Internally the world frame is z-up.
enum class PoseConvention {
  kZUp,
  /// World axes follow the optical frame: x right, y down, z forward.
  kCameraForward,
};

/// Re-expresses a pose in the z-up world frame.
Pose to_z_up(const Pose& pose, PoseConvention convention);

struct CameraIntrinsics {
  double fx = 525.0;
  double fy = 525.0;
  double cx = 319.5;
  double cy = 239.5;
  int width = 640;
  int height = 480;

  void validate() const;
};

/// Pixel plus depth to a camera-frame point (x right, y down, z along the
/// optical axis).
template <typename Scalar = double>
Vector3T<Scalar> back_project(const CameraIntrinsics& k, const Vector2T<Scalar>& pixel, Scalar depth) {
  if (!(depth > Scalar(0))) {
    throw Error(ErrorCode::kDegenerateDepth, "depth must be positive");
  }
  if (!(pixel.x() >= Scalar(0) && pixel.x() <= Scalar(k.width) && pixel.y() >= Scalar(0) &&
        pixel.y() <= Scalar(k.height))) {
    throw Error(ErrorCode::kBounds, "pixel outside the image");
  }
  return Vector3T<Scalar>(depth * (pixel.x() - Scalar(k.cx)) / Scalar(k.fx),
                          depth * (pixel.y() - Scalar(k.cy)) / Scalar(k.fy), depth);
}

/// Pinhole forward projection of a camera-frame point with positive z.
template <typename Scalar = double>
Vector2T<Scalar> project(const CameraIntrinsics& k, const Vector3T<Scalar>& point_camera) {
  if (!(point_camera.z() > Scalar(0))) {
    throw Error(ErrorCode::kDegenerateDepth, "point behind the camera");
  }
  return Vector2T<Scalar>(Scalar(k.fx) * point_camera.x() / point_camera.z() + Scalar(k.cx),
                          Scalar(k.fy) * point_camera.y() / point_camera.z() + Scalar(k.cy));
}

/// Depth noise standard deviation sigma0 + k d^2.
template <typename Scalar>
Scalar depth_sigma(Scalar depth, Scalar sigma0, Scalar k) {
  if (depth < Scalar(0) || sigma0 < Scalar(0) || k < Scalar(0)) {
    throw Error(ErrorCode::kDomain, "depth_sigma arguments must be non-negative");
  }
  return sigma0 + k * depth * depth;
}

struct DepthNoise {
  double sigma0 = 0.0012;
  double k = 0.0019;
};

/// Probability over object class names. Entries are kept sorted by name.
class ClassDistribution {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  ClassDistribution() = default;

  /// Validates and renormalizes. Sums off by more than `tolerance` are
  /// rejected with a value error.
  static ClassDistribution normalized(Map entries, double tolerance = 1e-3);
  static ClassDistribution certain(std::string name);
  /// Rebuilds a persisted distribution bit for bit: entries are range
  /// checked and the sum is only checked against `tolerance`.
  static ClassDistribution restore(Map entries, double tolerance = 1e-6);

  const Map& entries() const { return entries_; }
  double probability(std::string_view name) const;
  /// Most probable class; ties go to the lexicographically smallest name.
  const std::string& argmax() const;
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const ClassDistribution&, const ClassDistribution&) = default;

 private:
  explicit ClassDistribution(Map entries) : entries_(std::move(entries)) {}
  Map entries_;
};

struct PixelBox {
  double u_min = 0;
  double v_min = 0;
  double u_max = 0;
  double v_max = 0;

  Vector2 center() const { return {0.5 * (u_min + u_max), 0.5 * (v_min + v_max)}; }
  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct TrackedObservation {
  Timestamp stamp;
  std::int64_t track_id = 0;
  PixelBox bbox;
  ClassDistribution class_dist;
  double depth = 0;  // meters, at the bbox centroid

  void validate() const;
};

/// Validated box construction (min <= max, all finite).
Aabb3 make_aabb(const Vector3& min, const Vector3& max);

/// Limits on the inferred depth half-extent of an observed object.
struct ExtentLimits {
  double min_half_depth = 0.02;
  double max_half_depth = 1.0;
};

/// Half-extent along the optical axis for a box of the given metric width and
/// height: half their mean, clamped to the limits.
double depth_half_extent(double metric_width, double metric_height, const ExtentLimits& limits = {});

/// World-frame axis-aligned hull of an observed object. The bbox corners are
/// back-projected at the observed depth (the visible face) and the box is
/// extruded away from the camera by twice the depth half-extent.
Aabb3 observation_to_world_aabb(const TrackedObservation& obs, const Pose& pose,
                                const CameraIntrinsics& intrinsics, const ExtentLimits& limits = {});

/// The eight corners of a box, index bit i selecting max on axis i.
template <typename Scalar>
std::array<Vector3T<Scalar>, 8> corners(const Aabb3T<Scalar>& box) {
  std::array<Vector3T<Scalar>, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = Vector3T<Scalar>((i & 1) ? box.max().x() : box.min().x(),
                              (i & 2) ? box.max().y() : box.min().y(),
                              (i & 4) ? box.max().z() : box.min().z());
  }
  return out;
}

}  // namespace cogmap
