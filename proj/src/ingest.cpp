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

#include "cogmap/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "cogmap/text_format.hpp"
#include "json.hpp"

namespace cogmap {

using nlohmann::json;

double ObservationStream::duration() const {
  return frames.empty() ? 0.0 : seconds_between(frames.back().stamp, frames.front().stamp);
}

std::size_t ObservationStream::observation_count() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.observations.size();
  return n;
}

namespace {

double parse_double(std::string_view token, std::size_t line_no, std::string_view what) {
  double value = 0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

}  // namespace

PoseStream parse_trajectory(std::istream& in, PoseConvention convention) {
  PoseStream stream;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields{std::string(body)};
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(std::move(t));
    if (tokens.size() != 8) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 8 fields, found " +
                                         std::to_string(tokens.size()));
    }
    Pose pose;
    try {
      pose.stamp = Timestamp::parse(tokens[0]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
    pose.translation = Vector3(parse_double(tokens[1], line_no, "tx"), parse_double(tokens[2], line_no, "ty"),
                               parse_double(tokens[3], line_no, "tz"));
    Eigen::Quaterniond q(parse_double(tokens[7], line_no, "qw"), parse_double(tokens[4], line_no, "qx"),
                         parse_double(tokens[5], line_no, "qy"), parse_double(tokens[6], line_no, "qz"));
    const double deviation = std::abs(q.norm() - 1.0);
    if (deviation > 1e-3) {
      throw Error(ErrorCode::kInvalidRotation,
                  "line " + std::to_string(line_no) + ": quaternion norm deviates from 1 by " + std::to_string(deviation));
    }
    // Leave already-unit quaternions bit-exact so text round trips are stable.
    if (deviation > 1e-12) q.normalize();
    pose.rotation = q;
    if (!stream.poses.empty() && !(stream.poses.back().stamp < pose.stamp)) {
      throw Error(ErrorCode::kOrdering, "line " + std::to_string(line_no) + ": timestamp " + pose.stamp.to_string() +
                                            " does not increase");
    }
    stream.poses.push_back(to_z_up(pose, convention));
  }
  return stream;
}

PoseStream parse_trajectory(std::string_view text, PoseConvention convention) {
  std::istringstream in{std::string(text)};
  return parse_trajectory(in, convention);
}

PoseStream load_trajectory(const std::string& path, PoseConvention convention) {
  auto in = open_or_throw(path);
  return parse_trajectory(in, convention);
}

void serialize_trajectory(const PoseStream& stream, std::ostream& out) {
  out << "# timestamp tx ty tz qx qy qz qw\n";
  for (const auto& p : stream.poses) {
    out << p.stamp.to_string() << ' ' << format_shortest(p.translation.x()) << ' '
        << format_shortest(p.translation.y()) << ' ' << format_shortest(p.translation.z()) << ' '
        << format_shortest(p.rotation.x()) << ' ' << format_shortest(p.rotation.y()) << ' '
        << format_shortest(p.rotation.z()) << ' ' << format_shortest(p.rotation.w()) << '\n';
  }
}

namespace {

const json& required(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": missing field '" + key + "'");
  }
  return *it;
}

double required_number(const json& record, const char* key, std::size_t line_no) {
  const json& v = required(record, key, line_no);
  if (!v.is_number()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": field '" + key + "' is not a number");
  }
  return v.get<double>();
}

}  // namespace

ObservationStream parse_observations(std::istream& in) {
  ObservationStream stream;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object()) throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": not an object");

    TrackedObservation obs;
    const json& stamp = required(record, "stamp", line_no);
    try {
      obs.stamp = stamp.is_string() ? Timestamp::parse(stamp.get<std::string>())
                                    : Timestamp::from_seconds(stamp.get<double>());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": bad stamp: " + e.what());
    }
    const json& track = required(record, "track_id", line_no);
    if (!track.is_number_integer()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": track_id must be an integer");
    }
    obs.track_id = track.get<std::int64_t>();
    obs.bbox = {required_number(record, "u_min", line_no), required_number(record, "v_min", line_no),
                required_number(record, "u_max", line_no), required_number(record, "v_max", line_no)};
    obs.depth = required_number(record, "depth", line_no);
    if (!(obs.depth > 0)) {
      throw Error(ErrorCode::kValue, "line " + std::to_string(line_no) + ": depth must be positive");
    }
    const json& classes = required(record, "classes", line_no);
    if (!classes.is_object()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": classes must map names to probabilities");
    }
    ClassDistribution::Map entries;
    for (const auto& [name, p] : classes.items()) {
      if (!p.is_number()) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": probability of '" + name + "'");
      }
      entries.emplace(name, p.get<double>());
    }
    try {
      obs.class_dist = ClassDistribution::normalized(std::move(entries), 1e-3);
      obs.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kValue, "line " + std::to_string(line_no) + ": " + e.what());
    }

    if (!stream.frames.empty() && stream.frames.back().stamp == obs.stamp) {
      stream.frames.back().observations.push_back(std::move(obs));
    } else if (stream.frames.empty() || stream.frames.back().stamp < obs.stamp) {
      stream.frames.push_back({obs.stamp, {std::move(obs)}});
    } else {
      throw Error(ErrorCode::kOrdering, "line " + std::to_string(line_no) + ": stamp " + obs.stamp.to_string() +
                                            " goes back in time");
    }
  }
  return stream;
}

ObservationStream parse_observations(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_observations(in);
}

ObservationStream load_observations(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_observations(in);
}

void serialize_observations(const ObservationStream& stream, std::ostream& out) {
  for (const auto& frame : stream.frames) {
    for (const auto& o : frame.observations) {
      json classes = json::object();
      for (const auto& [name, p] : o.class_dist.entries()) classes[name] = p;
      json record = {{"stamp", o.stamp.to_string()}, {"track_id", o.track_id}, {"u_min", o.bbox.u_min},
                     {"v_min", o.bbox.v_min},        {"u_max", o.bbox.u_max},   {"v_max", o.bbox.v_max},
                     {"depth", o.depth},             {"classes", classes}};
      out << record.dump() << '\n';
    }
  }
}

Pose SyntheticSceneSpec::default_camera() {
  Pose camera;
  // Optical axes (x right, y down, z forward) expressed in the z-up world.
  Eigen::Matrix3d r;
  r << 1, 0, 0,
       0, 0, 1,
       0, -1, 0;
  camera.rotation = Eigen::Quaterniond(r);
  camera.translation = Vector3(0.0, -3.0, 1.0);
  return camera;
}

void SyntheticSceneSpec::validate() const {
  if (!(duration > 0) || !(native_rate > 0) || !(start_time >= 0)) {
    throw Error(ErrorCode::kConfiguration, "synthetic scene needs positive duration and native_rate");
  }
  for (double p : {class_confusion, dropout, id_switch}) {
    if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::kConfiguration, "synthetic probabilities must lie in [0,1]");
  }
  if (!(label_confidence > 0 && label_confidence <= 1)) {
    throw Error(ErrorCode::kConfiguration, "label_confidence must lie in (0,1]");
  }
  if (!(detection_noise >= 0) || !(depth_noise.sigma0 >= 0) || !(depth_noise.k >= 0)) {
    throw Error(ErrorCode::kConfiguration, "noise parameters must be non-negative");
  }
  require_valid(camera);
  intrinsics.validate();
}

namespace {

Vector3 vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kConfiguration, std::string("'") + what + "' must be a 3-element array");
  }
  return Vector3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

SyntheticSceneSpec SyntheticSceneSpec::from_json_text(std::string_view text) {
  SyntheticSceneSpec spec;
  try {
    const json j = json::parse(text);
    spec.duration = j.value("duration", spec.duration);
    spec.native_rate = j.value("native_rate", spec.native_rate);
    spec.start_time = j.value("start_time", spec.start_time);
    spec.detection_noise = j.value("detection_noise", spec.detection_noise);
    if (j.contains("depth_noise")) {
      spec.depth_noise.sigma0 = j["depth_noise"].value("sigma0", 0.0);
      spec.depth_noise.k = j["depth_noise"].value("k", 0.0);
    }
    spec.class_confusion = j.value("class_confusion", spec.class_confusion);
    spec.dropout = j.value("dropout", spec.dropout);
    spec.id_switch = j.value("id_switch", spec.id_switch);
    spec.label_confidence = j.value("label_confidence", spec.label_confidence);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("camera")) {
      const json& c = j["camera"];
      if (c.contains("position")) spec.camera.translation = vec3(c["position"], "camera.position");
      if (c.contains("orientation")) {
        const json& q = c["orientation"];
        if (!q.is_array() || q.size() != 4) {
          throw Error(ErrorCode::kConfiguration, "'camera.orientation' must be [qx, qy, qz, qw]");
        }
        spec.camera.rotation = Eigen::Quaterniond(q[3].get<double>(), q[0].get<double>(), q[1].get<double>(),
                                                  q[2].get<double>());
      }
    }
    if (j.contains("intrinsics")) {
      const json& k = j["intrinsics"];
      spec.intrinsics.fx = k.value("fx", spec.intrinsics.fx);
      spec.intrinsics.fy = k.value("fy", spec.intrinsics.fy);
      spec.intrinsics.cx = k.value("cx", spec.intrinsics.cx);
      spec.intrinsics.cy = k.value("cy", spec.intrinsics.cy);
      spec.intrinsics.width = k.value("width", spec.intrinsics.width);
      spec.intrinsics.height = k.value("height", spec.intrinsics.height);
    }
    for (const json& o : j.value("objects", json::array())) {
      SyntheticObject obj;
      obj.class_name = o.at("class").get<std::string>();
      obj.initial_box = make_aabb(vec3(o.at("min"), "min"), vec3(o.at("max"), "max"));
      if (o.contains("velocity")) obj.velocity = vec3(o["velocity"], "velocity");
      spec.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfiguration, std::string("synthetic scene: ") + e.what());
  }
  spec.validate();
  return spec;
}

SyntheticSceneSpec SyntheticSceneSpec::load(const std::string& path) {
  auto in = open_or_throw(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

namespace {

struct Projection {
  PixelBox bbox;
  double depth = 0;
};

// Visible face of a world box: camera-frame hull, front plane at its nearest depth.
std::optional<Projection> project_box(const Aabb3& world_box, const Pose& camera, const CameraIntrinsics& k) {
  Aabb3 cam;
  for (const Vector3& c : corners(world_box)) cam.extend(world_to_camera(camera, c));
  const double front = cam.min().z();
  if (front <= 0.05) return std::nullopt;
  const Vector2 lo = project<double>(k, Vector3(cam.min().x(), cam.min().y(), front));
  const Vector2 hi = project<double>(k, Vector3(cam.max().x(), cam.max().y(), front));
  if (hi.x() <= 0 || hi.y() <= 0 || lo.x() >= k.width || lo.y() >= k.height) return std::nullopt;
  return Projection{{lo.x(), lo.y(), hi.x(), hi.y()}, front};
}

Aabb3 box_at(const SyntheticObject& obj, double elapsed) {
  const Vector3 shift = obj.velocity * elapsed;
  return Aabb3(obj.initial_box.min() + shift, obj.initial_box.max() + shift);
}

}  // namespace

SyntheticScene generate_synthetic(const SyntheticSceneSpec& spec, const PredicateConfig& predicates,
                                  double pairing_radius) {
  spec.validate();
  if (spec.objects.empty()) throw Error(ErrorCode::kEmptyScene, "synthetic scene has no objects");

  std::set<std::string> class_set;
  for (const auto& o : spec.objects) class_set.insert(o.class_name);
  const std::vector<std::string> classes(class_set.begin(), class_set.end());

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto frame_count = static_cast<std::size_t>(std::floor(spec.duration * spec.native_rate + 1e-9)) + 1;
  std::vector<std::int64_t> track_ids(spec.objects.size());
  for (std::size_t i = 0; i < track_ids.size(); ++i) track_ids[i] = static_cast<std::int64_t>(i);
  std::int64_t next_track = static_cast<std::int64_t>(spec.objects.size());

  SyntheticScene scene;
  const double k_w = spec.intrinsics.width;
  const double k_h = spec.intrinsics.height;
  Timestamp previous_stamp;
  for (std::size_t f = 0; f < frame_count; ++f) {
    const double elapsed = static_cast<double>(f) / spec.native_rate;
    const Timestamp stamp = Timestamp::from_seconds(spec.start_time + elapsed);
    if (f > 0 && !(previous_stamp < stamp)) continue;  // rates beyond 1 MHz collapse
    previous_stamp = stamp;

    Pose pose = spec.camera;
    pose.stamp = stamp;
    scene.poses.poses.push_back(pose);

    ObservationFrame frame{stamp, {}};
    GroundTruthFrame truth{stamp, std::vector<std::int64_t>(spec.objects.size(), -1), {}};
    std::vector<std::optional<Aabb3>> visible(spec.objects.size());

    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const SyntheticObject& obj = spec.objects[i];
      const Aabb3 box = box_at(obj, elapsed);
      // Fixed draw count per object keeps streams aligned across parameter changes.
      const double drop_draw = unit(rng);
      const double noise[5] = {gauss(rng), gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
      const double confuse_draw = unit(rng);
      const double wrong_draw = unit(rng);
      const double switch_draw = unit(rng);

      const auto projection = project_box(box, spec.camera, spec.intrinsics);
      if (!projection) continue;
      visible[i] = box;
      if (switch_draw < spec.id_switch) track_ids[i] = next_track++;
      truth.track_of_object[i] = track_ids[i];
      if (drop_draw < spec.dropout) continue;

      TrackedObservation obs;
      obs.stamp = stamp;
      obs.track_id = track_ids[i];
      PixelBox b = projection->bbox;
      b.u_min = std::clamp(b.u_min + spec.detection_noise * noise[0], 0.0, k_w);
      b.v_min = std::clamp(b.v_min + spec.detection_noise * noise[1], 0.0, k_h);
      b.u_max = std::clamp(b.u_max + spec.detection_noise * noise[2], 0.0, k_w);
      b.v_max = std::clamp(b.v_max + spec.detection_noise * noise[3], 0.0, k_h);
      if (!(b.u_min < b.u_max) || !(b.v_min < b.v_max)) continue;
      obs.bbox = b;
      const double sigma = depth_sigma(projection->depth, spec.depth_noise.sigma0, spec.depth_noise.k);
      obs.depth = std::max(projection->depth + sigma * noise[4], 0.05);

      std::string favored = obj.class_name;
      if (classes.size() > 1 && confuse_draw < spec.class_confusion) {
        std::vector<std::string> others;
        std::copy_if(classes.begin(), classes.end(), std::back_inserter(others),
                     [&](const std::string& c) { return c != obj.class_name; });
        const auto pick = std::min(others.size() - 1, static_cast<std::size_t>(wrong_draw * others.size()));
        favored = others[pick];
      }
      if (classes.size() == 1 || spec.label_confidence >= 1.0) {
        obs.class_dist = ClassDistribution::certain(favored);
      } else {
        ClassDistribution::Map entries;
        const double rest = (1.0 - spec.label_confidence) / static_cast<double>(classes.size() - 1);
        for (const auto& c : classes) entries.emplace(c, c == favored ? spec.label_confidence : rest);
        obs.class_dist = ClassDistribution::normalized(std::move(entries));
      }
      frame.observations.push_back(std::move(obs));
    }

    for (std::size_t i = 0; i < visible.size(); ++i) {
      for (std::size_t j = 0; j < visible.size(); ++j) {
        if (i == j || !visible[i] || !visible[j]) continue;
        if ((visible[i]->center() - visible[j]->center()).norm() > pairing_radius) continue;
        for (const auto& eval : infer_relations(*visible[i], 0.0, *visible[j], 0.0, predicates)) {
          truth.relations.push_back({static_cast<int>(i), eval.relation, static_cast<int>(j)});
        }
      }
    }
    std::sort(truth.relations.begin(), truth.relations.end());
    scene.observations.frames.push_back(std::move(frame));
    scene.ground_truth.push_back(std::move(truth));
  }
  return scene;
}

void write_ground_truth(const std::vector<GroundTruthFrame>& frames, std::ostream& out) {
  for (const auto& f : frames) {
    json relations = json::array();
    for (const auto& r : f.relations) relations.push_back({r.subject, r.relation, r.object});
    out << json{{"stamp", f.stamp.to_string()}, {"track_of_object", f.track_of_object}, {"relations", relations}}.dump()
        << '\n';
  }
}

}  // namespace cogmap
