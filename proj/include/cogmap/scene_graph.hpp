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

#include <deque>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "cogmap/graph_types.hpp"
#include "cogmap/pipeline.hpp"
#include "cogmap/relations.hpp"

namespace cogmap {

struct SceneGraphConfig {
  CameraIntrinsics intrinsics;
  ExtentLimits extent;
  DepthNoise depth_noise;
  double match_radius = 0.3;    // m, re-binding a fresh track to a lost node
  double expiry = 2.0;          // s without observations before a node is dropped
  double pairing_radius = 3.0;  // m, centroid distance for relation candidates

  void validate() const;
};

/// Running mean over obs_count + 1 observations. Classes missing on either
/// side count as probability zero.
ClassDistribution fuse_class(const ClassDistribution& running, std::int64_t obs_count,
                             const ClassDistribution& incoming);

struct Assignment {
  std::size_t observation = 0;   // index into frame.observations
  std::optional<NodeId> node;    // empty: create a new node
  bool rebound = false;          // matched by class and proximity, not track id
};

/// Track id is the primary key. An observation with an unseen track id
/// re-binds to the nearest node not matched this frame that has the same
/// argmax class and whose centroid lies within match_radius (closest pairs
/// first). Everything else opens a new node.
std::vector<Assignment> associate(const std::vector<ObjectNode>& nodes, const SyncedFrame& frame,
                                  const SceneGraphConfig& cfg);

using RelationFn = std::function<std::vector<PredicateEvaluation>(const ObjectNode&, const ObjectNode&)>;

struct IdAllocator {
  NodeId next_node = 0;
  EdgeId next_edge = 0;
};

/// Snapshot plus the predicate record behind each edge (same order as edges).
struct GraphUpdate {
  SceneGraphSnapshot snapshot;
  std::vector<PredicateEvaluation> evaluations;
};

/// Associates and fuses the frame into the previous nodes, refreshes world
/// boxes from the frame pose, expires stale nodes, and recomputes every edge
/// from scratch over ordered node pairs within pairing_radius. Relations
/// outside `vocabulary` are discarded. Edge and trace ids coincide.
GraphUpdate update_graph(const SceneGraphSnapshot& previous, const SyncedFrame& frame, const RelationFn& relation_fn,
                         const SceneGraphConfig& cfg, const RelationVocabulary& vocabulary, IdAllocator& ids);

/// Append-only, time-ordered log of snapshots. One writer; readers may hold
/// references to appended entries while appends continue.
class SemanticMemory {
 public:
  /// Rejects stamps not strictly after the last one (kOrdering).
  void append(SceneGraphSnapshot snapshot);
  /// Latest snapshot with stamp <= instant (kNotFound if none).
  const SceneGraphSnapshot& query(Timestamp instant) const;
  std::size_t size() const;
  const SceneGraphSnapshot& at(std::size_t index) const;
  /// History of one node across the log: (snapshot stamp, node state).
  std::vector<std::pair<Timestamp, ObjectNode>> node_history(NodeId node) const;

 private:
  mutable std::shared_mutex mutex_;
  std::deque<SceneGraphSnapshot> snapshots_;
};

}  // namespace cogmap
