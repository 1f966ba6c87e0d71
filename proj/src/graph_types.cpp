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

#include "cogmap/graph_types.hpp"

#include <algorithm>
#include <unordered_set>

namespace cogmap {

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kSchemaDomain: return "SCHEMA_DOMAIN";
    case ViolationCode::kSchemaRange: return "SCHEMA_RANGE";
    case ViolationCode::kExclusion: return "EXCLUSION";
    case ViolationCode::kAsymmetry: return "ASYMMETRY";
    case ViolationCode::kIrreflexivity: return "IRREFLEXIVITY";
    case ViolationCode::kInverseMissing: return "INVERSE_MISSING";
    case ViolationCode::kCycle: return "CYCLE";
  }
  return "UNKNOWN";
}

ViolationCode violation_code_from_string(std::string_view text) {
  for (auto code : {ViolationCode::kSchemaDomain, ViolationCode::kSchemaRange, ViolationCode::kExclusion,
                    ViolationCode::kAsymmetry, ViolationCode::kIrreflexivity, ViolationCode::kInverseMissing,
                    ViolationCode::kCycle}) {
    if (to_string(code) == text) return code;
  }
  throw Error(ErrorCode::kParse, "unknown violation code '" + std::string(text) + "'");
}

bool operator==(const ObjectNode& a, const ObjectNode& b) {
  return a.node_id == b.node_id && a.track_id == b.track_id && a.fused_class == b.fused_class &&
         a.obs_count == b.obs_count && a.world_box.min() == b.world_box.min() &&
         a.world_box.max() == b.world_box.max() && a.centroid == b.centroid &&
         a.position_sigma == b.position_sigma && a.last_seen == b.last_seen &&
         a.last_observation == b.last_observation;
}

const NamedValue* ReasoningTrace::find_measured(std::string_view name) const {
  auto it = std::find_if(measured.begin(), measured.end(), [&](const NamedValue& v) { return v.name == name; });
  return it == measured.end() ? nullptr : &*it;
}

const NamedValue* ReasoningTrace::find_threshold(std::string_view name) const {
  auto it = std::find_if(thresholds.begin(), thresholds.end(), [&](const NamedValue& v) { return v.name == name; });
  return it == thresholds.end() ? nullptr : &*it;
}

const ObjectNode* SceneGraphSnapshot::find_node(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const ObjectNode& n, NodeId v) { return n.node_id < v; });
  return it != nodes.end() && it->node_id == id ? &*it : nullptr;
}

const RelationEdge* SceneGraphSnapshot::find_edge(EdgeId id) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), id,
                             [](const RelationEdge& e, EdgeId v) { return e.edge_id < v; });
  return it != edges.end() && it->edge_id == id ? &*it : nullptr;
}

const ReasoningTrace* SceneGraphSnapshot::find_trace(TraceId id) const {
  auto it = std::lower_bound(traces.begin(), traces.end(), id,
                             [](const ReasoningTrace& t, TraceId v) { return t.trace_id < v; });
  return it != traces.end() && it->trace_id == id ? &*it : nullptr;
}

void check_referential_integrity(const SceneGraphSnapshot& snapshot) {
  std::unordered_set<NodeId> ids;
  for (const auto& n : snapshot.nodes) {
    if (!ids.insert(n.node_id).second) {
      throw Error(ErrorCode::kIntegrity, "duplicate node id " + std::to_string(n.node_id));
    }
  }
  for (const auto& e : snapshot.edges) {
    if (!ids.count(e.subject) || !ids.count(e.object)) {
      throw Error(ErrorCode::kIntegrity, "edge " + std::to_string(e.edge_id) + " references a missing node");
    }
  }
}

}  // namespace cogmap
