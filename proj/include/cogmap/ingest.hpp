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

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cogmap/core_model.hpp"
#include "cogmap/relations.hpp"

namespace cogmap {

struct PoseStream {
  std::vector<Pose> poses;  // strictly increasing stamps
};

struct ObservationFrame {
  Timestamp stamp;
  std::vector<TrackedObservation> observations;  // each stamped with `stamp`
};

struct ObservationStream {
  std::vector<ObservationFrame> frames;  // strictly increasing stamps

  double duration() const;
  std::size_t observation_count() const;
};

/// Trajectory text, one "timestamp tx ty tz qx qy qz qw" per line, '#'
/// comments. Quaternions within 1e-3 of unit norm are renormalized, others
/// rejected. Poses are converted to the z-up world frame.
PoseStream parse_trajectory(std::istream& in, PoseConvention convention = PoseConvention::kZUp);
PoseStream parse_trajectory(std::string_view text, PoseConvention convention = PoseConvention::kZUp);
PoseStream load_trajectory(const std::string& path, PoseConvention convention = PoseConvention::kZUp);
/// Stamps with six decimals; other fields in shortest round-trip form.
void serialize_trajectory(const PoseStream& stream, std::ostream& out);

/// Line-delimited JSON observation records:
///
///     {"stamp": 1.0, "track_id": 7, "u_min": 100, "v_min": 100, "u_max": 200,
///      "v_max": 200, "depth": 1.5, "classes": {"cup": 1.0}}
///
/// `stamp` may be a number or a decimal string. Consecutive records sharing a
/// stamp form one frame. Blank lines are ignored.
ObservationStream parse_observations(std::istream& in);
ObservationStream parse_observations(std::string_view text);
ObservationStream load_observations(const std::string& path);
void serialize_observations(const ObservationStream& stream, std::ostream& out);

struct SyntheticObject {
  std::string class_name;
  Aabb3 initial_box;
  Vector3 velocity = Vector3::Zero();  // m/s
};

/// Declarative scene for controlled experiments. Loaded from JSON:
///
///     {"duration": 20, "native_rate": 30, "seed": 7,
///      "detection_noise": 1.0, "depth_noise": {"sigma0": 0.0012, "k": 0.0019},
///      "class_confusion": 0.1, "dropout": 0.02, "id_switch": 0.01,
///      "label_confidence": 0.8,
///      "camera": {"position": [0, -3, 1], "orientation": [qx, qy, qz, qw]},
///      "objects": [{"class": "table", "min": [..], "max": [..], "velocity": [..]}]}
///
/// Reconstruction assumes the depth extent rule of observation_to_world_aabb,
/// so ground-truth boxes are recovered exactly only when their extent along
/// the optical axis follows it.
struct SyntheticSceneSpec {
  double duration = 10.0;     // s
  double native_rate = 30.0;  // frames per second
  double start_time = 0.0;    // s
  std::vector<SyntheticObject> objects;
  double detection_noise = 0.0;     // pixel std on each bbox edge
  DepthNoise depth_noise{0.0, 0.0};
  double class_confusion = 0.0;     // probability an observation favors a wrong class
  double dropout = 0.0;             // per-object per-frame miss probability
  double id_switch = 0.0;           // probability the tracker issues a fresh id
  double label_confidence = 0.8;    // probability mass on the favored class
  std::uint64_t seed = 0;
  Pose camera = default_camera();
  CameraIntrinsics intrinsics;

  /// 3 m back along -y, 1 m up, looking along +y.
  static Pose default_camera();
  static SyntheticSceneSpec load(const std::string& path);
  static SyntheticSceneSpec from_json_text(std::string_view text);
  void validate() const;
};

struct GroundTruthRelation {
  int subject = 0;  // object index in the scene spec
  std::string relation;
  int object = 0;

  friend auto operator<=>(const GroundTruthRelation&, const GroundTruthRelation&) = default;
};

struct GroundTruthFrame {
  Timestamp stamp;
  std::vector<std::int64_t> track_of_object;  // -1 when out of view
  std::vector<GroundTruthRelation> relations;  // sorted
};

struct SyntheticScene {
  PoseStream poses;
  ObservationStream observations;
  std::vector<GroundTruthFrame> ground_truth;
};

/// Deterministic given the seed. Ground truth uses the same predicates as the
/// mapper, evaluated on the uncorrupted boxes of objects in view, over pairs
/// whose centroids lie within `pairing_radius`.
SyntheticScene generate_synthetic(const SyntheticSceneSpec& spec, const PredicateConfig& predicates = {},
                                  double pairing_radius = 3.0);

void write_ground_truth(const std::vector<GroundTruthFrame>& frames, std::ostream& out);

}  // namespace cogmap
