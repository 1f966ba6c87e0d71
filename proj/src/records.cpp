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

#include "cogmap/records.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cogmap {
namespace {

using nlohmann::json;

json vec3(const Vector3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vector3 read_vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kParse, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json stamp(Timestamp t) { return t.to_string(); }
Timestamp read_stamp(const json& j) { return Timestamp::parse(j.get<std::string>()); }

json observation_json(const ObservationRef& o) {
  return {{"track_id", o.track_id},
          {"stamp", stamp(o.stamp)},
          {"bbox", json::array({o.bbox.u_min, o.bbox.v_min, o.bbox.u_max, o.bbox.v_max})},
          {"depth", o.depth}};
}

ObservationRef read_observation(const json& j) {
  ObservationRef o;
  o.track_id = j.at("track_id").get<std::int64_t>();
  o.stamp = read_stamp(j.at("stamp"));
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4) throw Error(ErrorCode::kParse, "bbox needs four numbers");
  o.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  o.depth = j.at("depth").get<double>();
  return o;
}

json named_values(const std::vector<NamedValue>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({{"name", v.name}, {"value", v.value}, {"unit", v.unit}});
  return out;
}

std::vector<NamedValue> read_named_values(const json& j) {
  std::vector<NamedValue> out;
  for (const auto& v : j) {
    out.push_back({v.at("name").get<std::string>(), v.at("value").get<double>(), v.at("unit").get<std::string>()});
  }
  return out;
}

json node_json(const ObjectNode& n) {
  json cls = json::object();
  for (const auto& [name, p] : n.fused_class.entries()) cls[name] = p;
  return {{"node_id", n.node_id},
          {"track_id", n.track_id},
          {"class", std::move(cls)},
          {"obs_count", n.obs_count},
          {"box_min", vec3(n.world_box.min())},
          {"box_max", vec3(n.world_box.max())},
          {"centroid", vec3(n.centroid)},
          {"position_sigma", n.position_sigma},
          {"last_seen", stamp(n.last_seen)},
          {"last_observation", observation_json(n.last_observation)}};
}

ObjectNode read_node(const json& j) {
  ObjectNode n;
  n.node_id = j.at("node_id").get<NodeId>();
  n.track_id = j.at("track_id").get<std::int64_t>();
  ClassDistribution::Map cls;
  for (const auto& [name, p] : j.at("class").items()) cls.emplace(name, p.get<double>());
  n.fused_class = ClassDistribution::restore(std::move(cls));
  n.obs_count = j.at("obs_count").get<std::int64_t>();
  n.world_box = Aabb3(read_vec3(j.at("box_min")), read_vec3(j.at("box_max")));
  n.centroid = read_vec3(j.at("centroid"));
  n.position_sigma = j.at("position_sigma").get<double>();
  n.last_seen = read_stamp(j.at("last_seen"));
  n.last_observation = read_observation(j.at("last_observation"));
  return n;
}

json edge_json(const RelationEdge& e) {
  json flags = json::array();
  for (auto code : e.violation_flags) flags.push_back(std::string(to_string(code)));
  return {{"edge_id", e.edge_id},       {"subject", e.subject},   {"relation", e.relation},
          {"object", e.object},         {"confidence", e.confidence}, {"trace_id", e.trace_id},
          {"stamp", stamp(e.stamp)},    {"violation_flags", std::move(flags)}};
}

RelationEdge read_edge(const json& j) {
  RelationEdge e;
  e.edge_id = j.at("edge_id").get<EdgeId>();
  e.subject = j.at("subject").get<NodeId>();
  e.relation = j.at("relation").get<std::string>();
  e.object = j.at("object").get<NodeId>();
  e.confidence = j.at("confidence").get<double>();
  e.trace_id = j.at("trace_id").get<TraceId>();
  e.stamp = read_stamp(j.at("stamp"));
  for (const auto& f : j.at("violation_flags")) e.violation_flags.push_back(violation_code_from_string(f.get<std::string>()));
  return e;
}

json trace_json(const ReasoningTrace& t) {
  json observations = json::array();
  for (const auto& o : t.observations) observations.push_back(observation_json(o));
  json checks = json::array();
  for (const auto& c : t.ontology_checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"counterparts", c.counterpart_edge_ids}});
  }
  return {{"trace_id", t.trace_id},
          {"edge_id", t.edge_id},
          {"predicate", t.predicate},
          {"measured", named_values(t.measured)},
          {"thresholds", named_values(t.thresholds)},
          {"observations", std::move(observations)},
          {"pose_stamp", stamp(t.pose_stamp)},
          {"ontology_checks", std::move(checks)},
          {"sigma_subject", t.sigma_subject},
          {"sigma_object", t.sigma_object},
          {"margin", t.margin}};
}

ReasoningTrace read_trace(const json& j) {
  ReasoningTrace t;
  t.trace_id = j.at("trace_id").get<TraceId>();
  t.edge_id = j.at("edge_id").get<EdgeId>();
  t.predicate = j.at("predicate").get<std::string>();
  t.measured = read_named_values(j.at("measured"));
  t.thresholds = read_named_values(j.at("thresholds"));
  for (const auto& o : j.at("observations")) t.observations.push_back(read_observation(o));
  t.pose_stamp = read_stamp(j.at("pose_stamp"));
  for (const auto& c : j.at("ontology_checks")) {
    t.ontology_checks.push_back(
        {c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("counterparts").get<std::vector<EdgeId>>()});
  }
  t.sigma_subject = j.at("sigma_subject").get<double>();
  t.sigma_object = j.at("sigma_object").get<double>();
  t.margin = j.at("margin").get<double>();
  return t;
}

template <typename F>
auto guarded(F&& f, const std::string& where) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, where + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse || e.code() == ErrorCode::kValue) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    throw;
  }
}

}  // namespace

std::string snapshot_to_line(const SceneGraphSnapshot& s) {
  json nodes = json::array();
  for (const auto& n : s.nodes) nodes.push_back(node_json(n));
  json edges = json::array();
  for (const auto& e : s.edges) edges.push_back(edge_json(e));
  json traces = json::array();
  for (const auto& t : s.traces) traces.push_back(trace_json(t));
  json j = {{"stamp", stamp(s.stamp)},
            {"pose_stamp", stamp(s.pose_stamp)},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)},
            {"traces", std::move(traces)}};
  return j.dump();
}

SceneGraphSnapshot snapshot_from_line(std::string_view line) {
  return guarded(
      [&] {
        const json j = json::parse(line);
        SceneGraphSnapshot s;
        s.stamp = read_stamp(j.at("stamp"));
        s.pose_stamp = read_stamp(j.at("pose_stamp"));
        for (const auto& n : j.at("nodes")) s.nodes.push_back(read_node(n));
        for (const auto& e : j.at("edges")) s.edges.push_back(read_edge(e));
        for (const auto& t : j.at("traces")) s.traces.push_back(read_trace(t));
        return s;
      },
      "snapshot record");
}

void write_snapshot_log(const std::vector<SceneGraphSnapshot>& snapshots, std::ostream& out) {
  for (const auto& s : snapshots) out << snapshot_to_line(s) << '\n';
}

std::vector<SceneGraphSnapshot> read_snapshot_log(std::istream& in) {
  std::vector<SceneGraphSnapshot> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(snapshot_from_line(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return out;
}

std::vector<SceneGraphSnapshot> load_snapshot_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open snapshot log '" + path + "'");
  return read_snapshot_log(in);
}

std::string trace_to_line(Timestamp t, const ReasoningTrace& trace) {
  return json{{"stamp", stamp(t)}, {"trace", trace_json(trace)}}.dump();
}

void write_trace_log(const std::vector<SceneGraphSnapshot>& snapshots, std::ostream& out) {
  for (const auto& s : snapshots) {
    for (const auto& t : s.traces) out << trace_to_line(s.stamp, t) << '\n';
  }
}

std::string drop_log_to_json(const DropLog& drops) {
  json j = {{"stale_pose_drops", drops.stale_pose_drops},
            {"subsample_rejections", drops.subsample_rejections},
            {"qos_drops", drops.qos_drops}};
  return j.dump(2) + "\n";
}

DropLog drop_log_from_json(std::string_view text) {
  return guarded(
      [&] {
        const json j = json::parse(text);
        DropLog d;
        d.stale_pose_drops = j.at("stale_pose_drops").get<std::uint64_t>();
        d.subsample_rejections = j.at("subsample_rejections").get<std::uint64_t>();
        d.qos_drops = j.at("qos_drops").get<std::map<std::string, std::uint64_t>>();
        return d;
      },
      "drop log");
}

}  // namespace cogmap
