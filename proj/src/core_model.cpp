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

#include "cogmap/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>

namespace cogmap {

Timestamp Timestamp::from_micros(std::int64_t micros) {
  if (micros < 0) {
    throw Error(ErrorCode::kDomain, "timestamps must be non-negative");
  }
  return Timestamp(micros);
}

Timestamp Timestamp::from_seconds(double seconds) {
  if (!std::isfinite(seconds) || seconds < 0) {
    throw Error(ErrorCode::kDomain, "timestamps must be finite and non-negative");
  }
  // Nudge by a fraction of a microsecond so 0.3 (0.29999...) does not truncate to 299999.
  return Timestamp(static_cast<std::int64_t>(std::floor(seconds * 1e6 + 1e-3)));
}

Timestamp Timestamp::parse(std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::kParse, "empty timestamp");
  }
  if (text.find_first_of("eE") != std::string_view::npos) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kParse, "bad timestamp '" + std::string(text) + "'");
    }
    return from_seconds(value);
  }
  if (text.front() == '+') text.remove_prefix(1);
  if (!text.empty() && text.front() == '-') {
    throw Error(ErrorCode::kDomain, "negative timestamp '" + std::string(text) + "'");
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac) || whole.size() > 12) {
    throw Error(ErrorCode::kParse, "bad timestamp '" + std::string(text) + "'");
  }
  std::int64_t seconds = 0;
  for (char c : whole) seconds = seconds * 10 + (c - '0');
  std::int64_t micros = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    micros = micros * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  }
  return Timestamp(seconds * 1'000'000 + micros);
}

std::string Timestamp::to_string() const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(micros_ / 1'000'000),
                static_cast<long long>(micros_ % 1'000'000));
  return buf;
}

Pose to_z_up(const Pose& pose, PoseConvention convention) {
  if (convention == PoseConvention::kZUp) return pose;
  // (x right, y down, z forward) -> (x, z, -y)
  Eigen::Matrix3d permute;
  permute << 1, 0, 0,
             0, 0, 1,
             0, -1, 0;
  Pose out = pose;
  out.rotation = Eigen::Quaterniond(permute * pose.rotation.toRotationMatrix());
  out.rotation.normalize();
  out.translation = permute * pose.translation;
  return out;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0)) {
    throw Error(ErrorCode::kConfiguration, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0 || !(cx >= 0 && cx < width) || !(cy >= 0 && cy < height)) {
    throw Error(ErrorCode::kConfiguration, "principal point must lie inside the image");
  }
}

ClassDistribution ClassDistribution::normalized(Map entries, double tolerance) {
  if (entries.empty()) {
    throw Error(ErrorCode::kValue, "class distribution has no entries");
  }
  double sum = 0;
  for (const auto& [name, p] : entries) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kValue, "probability of '" + name + "' outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorCode::kValue, "class probabilities sum to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (auto& [name, p] : entries) p /= sum;
  }
  return ClassDistribution(std::move(entries));
}

ClassDistribution ClassDistribution::restore(Map entries, double tolerance) {
  double sum = 0;
  for (const auto& [name, p] : entries) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kValue, "probability of '" + name + "' outside [0,1]");
    sum += p;
  }
  if (!entries.empty() && std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorCode::kValue, "class probabilities sum to " + std::to_string(sum));
  }
  return ClassDistribution(std::move(entries));
}

ClassDistribution ClassDistribution::certain(std::string name) {
  Map m;
  m.emplace(std::move(name), 1.0);
  return ClassDistribution(std::move(m));
}

double ClassDistribution::probability(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0.0 : it->second;
}

const std::string& ClassDistribution::argmax() const {
  if (entries_.empty()) {
    throw Error(ErrorCode::kValue, "argmax of an empty class distribution");
  }
  auto best = entries_.begin();
  for (auto it = std::next(best); it != entries_.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

void TrackedObservation::validate() const {
  if (!(bbox.u_min < bbox.u_max) || !(bbox.v_min < bbox.v_max)) {
    throw Error(ErrorCode::kValue, "degenerate bbox for track " + std::to_string(track_id));
  }
  if (!(depth > 0) || !std::isfinite(depth)) {
    throw Error(ErrorCode::kValue, "depth must be positive for track " + std::to_string(track_id));
  }
  if (track_id < 0) {
    throw Error(ErrorCode::kValue, "negative track id");
  }
  if (class_dist.empty()) {
    throw Error(ErrorCode::kValue, "missing class distribution for track " + std::to_string(track_id));
  }
}

Aabb3 make_aabb(const Vector3& min, const Vector3& max) {
  if (!min.allFinite() || !max.allFinite() || (min.array() > max.array()).any()) {
    throw Error(ErrorCode::kValue, "box requires finite min <= max");
  }
  return Aabb3(min, max);
}

double depth_half_extent(double metric_width, double metric_height, const ExtentLimits& limits) {
  return std::clamp(0.25 * (metric_width + metric_height), limits.min_half_depth, limits.max_half_depth);
}

Aabb3 observation_to_world_aabb(const TrackedObservation& obs, const Pose& pose,
                                const CameraIntrinsics& intrinsics, const ExtentLimits& limits) {
  require_valid(pose);
  const Vector3 lo = back_project<double>(intrinsics, {obs.bbox.u_min, obs.bbox.v_min}, obs.depth);
  const Vector3 hi = back_project<double>(intrinsics, {obs.bbox.u_max, obs.bbox.v_max}, obs.depth);
  const double half = depth_half_extent(hi.x() - lo.x(), hi.y() - lo.y(), limits);
  const Aabb3 camera_box(Vector3(lo.x(), lo.y(), obs.depth), Vector3(hi.x(), hi.y(), obs.depth + 2.0 * half));

  const Eigen::Matrix3d rotation = pose.rotation.toRotationMatrix();
  Aabb3 world;  // Eigen default-constructs an empty box
  for (const Vector3& c : corners(camera_box)) {
    world.extend(Vector3(rotation * c + pose.translation));
  }
  return world;
}

}  // namespace cogmap
