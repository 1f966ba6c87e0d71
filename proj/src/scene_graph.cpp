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

#include "cogmap/scene_graph.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <tuple>
#include <unordered_map>

namespace cogmap {

void SceneGraphConfig::validate() const {
  intrinsics.validate();
  if (!(match_radius >= 0) || !(expiry > 0) || !(pairing_radius > 0)) {
    throw Error(ErrorCode::kConfiguration, "match_radius, expiry and pairing_radius must be positive");
  }
  if (!(extent.min_half_depth > 0) || extent.max_half_depth < extent.min_half_depth) {
    throw Error(ErrorCode::kConfiguration, "depth extent limits must satisfy 0 < min <= max");
  }
  if (!(depth_noise.sigma0 >= 0) || !(depth_noise.k >= 0)) {
    throw Error(ErrorCode::kConfiguration, "depth noise parameters must be non-negative");
  }
}

ClassDistribution fuse_class(const ClassDistribution& running, std::int64_t obs_count,
                             const ClassDistribution& incoming) {
  if (obs_count < 1) throw Error(ErrorCode::kValue, "fusion needs at least one prior observation");
  const double weight = 1.0 / static_cast<double>(obs_count + 1);
  ClassDistribution::Map fused = running.entries();
  for (const auto& [name, p] : incoming.entries()) fused.try_emplace(name, 0.0);
  double sum = 0;
  for (auto& [name, p] : fused) {
    p += (incoming.probability(name) - p) * weight;
    p = std::clamp(p, 0.0, 1.0);
    sum += p;
  }
  for (auto& [name, p] : fused) p /= sum;
  return ClassDistribution::normalized(std::move(fused), 1e-6);
}

namespace {

const ObjectNode* node_by_track(const std::vector<ObjectNode>& nodes, std::int64_t track) {
  for (const auto& n : nodes) {
    if (n.track_id == track) return &n;
  }
  return nullptr;
}

}  // namespace

std::vector<Assignment> associate(const std::vector<ObjectNode>& nodes, const SyncedFrame& frame,
                                  const SceneGraphConfig& cfg) {
  std::vector<Assignment> out(frame.observations.size());
  std::set<NodeId> matched;
  std::vector<std::size_t> unseen;
  for (std::size_t i = 0; i < frame.observations.size(); ++i) {
    out[i].observation = i;
    if (const auto* node = node_by_track(nodes, frame.observations[i].track_id)) {
      out[i].node = node->node_id;
      matched.insert(node->node_id);
    } else {
      unseen.push_back(i);
    }
  }
  if (unseen.empty()) return out;

  std::vector<std::tuple<double, std::size_t, NodeId>> candidates;
  for (std::size_t i : unseen) {
    const auto& obs = frame.observations[i];
    const Vector3 centroid = observation_to_world_aabb(obs, frame.pose, cfg.intrinsics, cfg.extent).center();
    const std::string& cls = obs.class_dist.argmax();
    for (const auto& node : nodes) {
      if (matched.count(node.node_id) || node.fused_class.argmax() != cls) continue;
      const double d = (node.centroid - centroid).norm();
      if (d <= cfg.match_radius) candidates.emplace_back(d, i, node.node_id);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::set<std::size_t> bound;
  for (const auto& [d, i, node] : candidates) {
    if (bound.count(i) || matched.count(node)) continue;
    out[i].node = node;
    out[i].rebound = true;
    bound.insert(i);
    matched.insert(node);
  }
  return out;
}

GraphUpdate update_graph(const SceneGraphSnapshot& previous, const SyncedFrame& frame, const RelationFn& relation_fn,
                         const SceneGraphConfig& cfg, const RelationVocabulary& vocabulary, IdAllocator& ids) {
  GraphUpdate update;
  SceneGraphSnapshot& snap = update.snapshot;
  snap.stamp = frame.frame_stamp;
  snap.pose_stamp = frame.pose.stamp;
  snap.nodes = previous.nodes;

  const auto assignments = associate(previous.nodes, frame, cfg);
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < snap.nodes.size(); ++i) index[snap.nodes[i].node_id] = i;

  for (const auto& a : assignments) {
    const TrackedObservation& obs = frame.observations[a.observation];
    const Aabb3 box = observation_to_world_aabb(obs, frame.pose, cfg.intrinsics, cfg.extent);
    ObjectNode* node = nullptr;
    if (a.node) {
      node = &snap.nodes[index.at(*a.node)];
      node->fused_class = fuse_class(node->fused_class, node->obs_count, obs.class_dist);
      ++node->obs_count;
    } else {
      ObjectNode fresh;
      fresh.node_id = ids.next_node++;
      fresh.fused_class = obs.class_dist;
      fresh.obs_count = 1;
      index[fresh.node_id] = snap.nodes.size();
      snap.nodes.push_back(std::move(fresh));
      node = &snap.nodes.back();
    }
    node->track_id = obs.track_id;
    node->world_box = box;
    node->centroid = box.center();
    node->position_sigma = depth_sigma(obs.depth, cfg.depth_noise.sigma0, cfg.depth_noise.k);
    node->last_seen = frame.frame_stamp;
    node->last_observation = {obs.track_id, obs.stamp, obs.bbox, obs.depth};
  }

  std::erase_if(snap.nodes, [&](const ObjectNode& n) {
    return seconds_between(frame.frame_stamp, n.last_seen) > cfg.expiry;
  });
  std::sort(snap.nodes.begin(), snap.nodes.end(),
            [](const ObjectNode& a, const ObjectNode& b) { return a.node_id < b.node_id; });

  for (const auto& s : snap.nodes) {
    for (const auto& o : snap.nodes) {
      if (s.node_id == o.node_id || (s.centroid - o.centroid).norm() > cfg.pairing_radius) continue;
      for (auto& eval : relation_fn(s, o)) {
        if (!vocabulary.contains(eval.relation)) continue;
        RelationEdge edge;
        edge.edge_id = ids.next_edge++;
        edge.trace_id = edge.edge_id;
        edge.subject = s.node_id;
        edge.relation = eval.relation;
        edge.object = o.node_id;
        edge.confidence = eval.confidence;
        edge.stamp = frame.frame_stamp;
        snap.edges.push_back(std::move(edge));
        update.evaluations.push_back(std::move(eval));
      }
    }
  }
  return update;
}

void SemanticMemory::append(SceneGraphSnapshot snapshot) {
  std::unique_lock lock(mutex_);
  if (!snapshots_.empty() && !(snapshots_.back().stamp < snapshot.stamp)) {
    throw Error(ErrorCode::kOrdering, "snapshot " + snapshot.stamp.to_string() + " is not after " +
                                          snapshots_.back().stamp.to_string());
  }
  snapshots_.push_back(std::move(snapshot));
}

const SceneGraphSnapshot& SemanticMemory::query(Timestamp instant) const {
  std::shared_lock lock(mutex_);
  auto it = std::upper_bound(snapshots_.begin(), snapshots_.end(), instant,
                             [](Timestamp t, const SceneGraphSnapshot& s) { return t < s.stamp; });
  if (it == snapshots_.begin()) {
    throw Error(ErrorCode::kNotFound, "no snapshot at or before " + instant.to_string());
  }
  return *std::prev(it);
}

std::size_t SemanticMemory::size() const {
  std::shared_lock lock(mutex_);
  return snapshots_.size();
}

const SceneGraphSnapshot& SemanticMemory::at(std::size_t index) const {
  std::shared_lock lock(mutex_);
  if (index >= snapshots_.size()) throw Error(ErrorCode::kNotFound, "snapshot index out of range");
  return snapshots_[index];
}

std::vector<std::pair<Timestamp, ObjectNode>> SemanticMemory::node_history(NodeId node) const {
  std::shared_lock lock(mutex_);
  std::vector<std::pair<Timestamp, ObjectNode>> out;
  for (const auto& s : snapshots_) {
    if (const auto* n = s.find_node(node)) out.emplace_back(s.stamp, *n);
  }
  return out;
}

}  // namespace cogmap
