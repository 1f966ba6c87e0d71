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
#include <string>
#include <vector>

#include "cogmap/core_model.hpp"

namespace cogmap {

using NodeId = std::int64_t;
using EdgeId = std::int64_t;
using TraceId = std::int64_t;

enum class ViolationCode {
  kSchemaDomain,
  kSchemaRange,
  kExclusion,
  kAsymmetry,
  kIrreflexivity,
  kInverseMissing,
  kCycle,
};

std::string_view to_string(ViolationCode code);
ViolationCode violation_code_from_string(std::string_view text);

/// Last observation that updated a node; carried into reasoning traces.
struct ObservationRef {
  std::int64_t track_id = 0;
  Timestamp stamp;
  PixelBox bbox;
  double depth = 0;

  friend bool operator==(const ObservationRef&, const ObservationRef&) = default;
};

struct ObjectNode {
  NodeId node_id = 0;
  std::int64_t track_id = 0;
  ClassDistribution fused_class;
  std::int64_t obs_count = 0;
  Aabb3 world_box;
  Vector3 centroid = Vector3::Zero();
  double position_sigma = 0;  // meters
  Timestamp last_seen;
  ObservationRef last_observation;
};

bool operator==(const ObjectNode& a, const ObjectNode& b);

struct RelationEdge {
  EdgeId edge_id = 0;
  NodeId subject = 0;
  std::string relation;
  NodeId object = 0;
  double confidence = 0;
  TraceId trace_id = 0;
  Timestamp stamp;
  std::vector<ViolationCode> violation_flags;

  friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
};

/// Named scalar with a unit ("m", "fraction", "bool", ...).
struct NamedValue {
  std::string name;
  double value = 0;
  std::string unit;

  friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

struct OntologyCheck {
  std::string name;  // e.g. "domain(on_top_of)", "mutually_exclusive(above,below)"
  bool passed = true;
  std::vector<EdgeId> counterpart_edge_ids;

  friend bool operator==(const OntologyCheck&, const OntologyCheck&) = default;
};

/// Evidence behind one edge: what was measured, against which thresholds,
/// from which observations and pose, and what the ontology said about it.
struct ReasoningTrace {
  TraceId trace_id = 0;
  EdgeId edge_id = 0;
  std::string predicate;
  std::vector<NamedValue> measured;
  std::vector<NamedValue> thresholds;
  std::vector<ObservationRef> observations;  // subject first, then object
  Timestamp pose_stamp;
  std::vector<OntologyCheck> ontology_checks;
  double sigma_subject = 0;
  double sigma_object = 0;
  double margin = 0;

  const NamedValue* find_measured(std::string_view name) const;
  const NamedValue* find_threshold(std::string_view name) const;

  friend bool operator==(const ReasoningTrace&, const ReasoningTrace&) = default;
};

/// One tick of the temporally indexed scene graph.
struct SceneGraphSnapshot {
  Timestamp stamp;
  Timestamp pose_stamp;
  std::vector<ObjectNode> nodes;    // sorted by node_id
  std::vector<RelationEdge> edges;  // sorted by edge_id
  std::vector<ReasoningTrace> traces;

  const ObjectNode* find_node(NodeId id) const;
  const RelationEdge* find_edge(EdgeId id) const;
  const ReasoningTrace* find_trace(TraceId id) const;

  friend bool operator==(const SceneGraphSnapshot&, const SceneGraphSnapshot&) = default;
};

/// Throws kIntegrity if node ids repeat or an edge endpoint is missing.
void check_referential_integrity(const SceneGraphSnapshot& snapshot);

}  // namespace cogmap
