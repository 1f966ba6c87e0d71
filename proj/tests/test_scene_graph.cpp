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

#include <gtest/gtest.h>

#include <random>

#include "cogmap/scene_graph.hpp"

namespace cogmap {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no cogmap::Error thrown";
  return ErrorCode::kValue;
}

Aabb3 box(double x0, double y0, double z0, double x1, double y1, double z1) {
  return Aabb3(Vector3(x0, y0, z0), Vector3(x1, y1, z1));
}

// Two static objects seen noiselessly for one second at 10 Hz.
std::vector<SyncedFrame> two_object_frames() {
  SyntheticSceneSpec spec;
  spec.duration = 1.0;
  spec.native_rate = 10;
  spec.label_confidence = 1.0;
  spec.objects = {{"cup", box(-0.35, 0, 0.7, -0.25, 0.1, 0.8), Vector3::Zero()},
                  {"book", box(0.3, 0.2, 0.7, 0.5, 0.3, 0.74), Vector3::Zero()}};
  const auto scene = generate_synthetic(spec);
  return synchronize(scene.observations, scene.poses).frames;
}

SceneGraphConfig config_for_synthetic() {
  SceneGraphConfig cfg;
  cfg.depth_noise = {0, 0};
  return cfg;
}

RelationFn default_relations() {
  return [](const ObjectNode& s, const ObjectNode& o) { return infer_relations(s, o, PredicateConfig{}); };
}

TEST(FuseClass, EqualsBatchMean) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> names{"a", "b", "c", "d"};
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ClassDistribution> obs;
    for (int i = 0, n = 2 + static_cast<int>(rng() % 30); i < n; ++i) {
      ClassDistribution::Map m;
      for (const auto& name : names) {
        if (rng() % 2) m[name] = u(rng) + 1e-3;
      }
      if (m.empty()) m["a"] = 1;
      double sum = 0;
      for (auto& [k, v] : m) sum += v;
      for (auto& [k, v] : m) v /= sum;
      obs.push_back(ClassDistribution::normalized(m));
    }
    ClassDistribution fused = obs[0];
    for (std::size_t i = 1; i < obs.size(); ++i) fused = fuse_class(fused, static_cast<std::int64_t>(i), obs[i]);
    for (const auto& name : names) {
      double mean = 0;
      for (const auto& d : obs) mean += d.probability(name);
      mean /= static_cast<double>(obs.size());
      EXPECT_NEAR(fused.probability(name), mean, 1e-9);
    }
  }
  EXPECT_EQ(code_of([] { fuse_class(ClassDistribution::certain("a"), 0, ClassDistribution::certain("a")); }),
            ErrorCode::kValue);
}

TEST(Associate, TrackIdThenClassAndProximity) {
  const auto frames = two_object_frames();
  ASSERT_GE(frames.size(), 2u);
  const auto cfg = config_for_synthetic();
  IdAllocator ids;
  const auto vocab = RelationVocabulary::standard();
  const auto first = update_graph({}, frames[0], default_relations(), cfg, vocab, ids);
  ASSERT_EQ(first.snapshot.nodes.size(), 2u);

  SyncedFrame next = frames[1];
  ASSERT_EQ(next.observations.size(), 2u);
  const auto cup_track = first.snapshot.nodes[0].track_id;
  for (auto& o : next.observations) {
    if (o.track_id == cup_track) o.track_id = 999;
  }
  const auto a = associate(first.snapshot.nodes, next, cfg);
  int rebound = 0;
  for (const auto& x : a) {
    ASSERT_TRUE(x.node.has_value());
    rebound += x.rebound;
  }
  EXPECT_EQ(rebound, 1);

  // Same track swap but a different class opens a fresh node.
  for (auto& o : next.observations) {
    if (o.track_id == 999) o.class_dist = ClassDistribution::certain("bottle");
  }
  const auto b = associate(first.snapshot.nodes, next, cfg);
  int fresh = 0;
  for (const auto& x : b) fresh += !x.node.has_value();
  EXPECT_EQ(fresh, 1);
}

TEST(UpdateGraph, EdgesRecomputedWithFreshIds) {
  const auto frames = two_object_frames();
  const auto cfg = config_for_synthetic();
  IdAllocator ids;
  const auto vocab = RelationVocabulary::standard();
  SceneGraphSnapshot prev;
  EdgeId last_id = -1;
  for (const auto& f : frames) {
    auto up = update_graph(prev, f, default_relations(), cfg, vocab, ids);
    ASSERT_EQ(up.evaluations.size(), up.snapshot.edges.size());
    // Independent recomputation over all ordered pairs.
    std::vector<std::tuple<NodeId, std::string, NodeId>> expected, got;
    for (const auto& s : up.snapshot.nodes) {
      for (const auto& o : up.snapshot.nodes) {
        if (s.node_id == o.node_id) continue;
        for (const auto& e : infer_relations(s.world_box, s.position_sigma, o.world_box, o.position_sigma, {})) {
          expected.emplace_back(s.node_id, e.relation, o.node_id);
        }
      }
    }
    for (const auto& e : up.snapshot.edges) {
      EXPECT_GT(e.edge_id, last_id);
      last_id = e.edge_id;
      EXPECT_EQ(e.trace_id, e.edge_id);
      EXPECT_EQ(e.stamp, f.frame_stamp);
      got.emplace_back(e.subject, e.relation, e.object);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expected);
    EXPECT_NO_THROW(check_referential_integrity(up.snapshot));
    prev = std::move(up.snapshot);
  }
  // The cup sits left of and in front of the book.
  ASSERT_EQ(prev.nodes.size(), 2u);
}

TEST(UpdateGraph, VocabularyFilters) {
  const auto frames = two_object_frames();
  IdAllocator ids;
  const auto up = update_graph({}, frames[0], default_relations(), config_for_synthetic(),
                               RelationVocabulary({"left_of"}), ids);
  for (const auto& e : up.snapshot.edges) EXPECT_EQ(e.relation, "left_of");
  EXPECT_EQ(up.snapshot.edges.size(), 1u);
}

TEST(UpdateGraph, NodesExpireAfterTwoSecondsUnseen) {
  auto frames = two_object_frames();
  const auto cfg = config_for_synthetic();
  IdAllocator ids;
  const auto vocab = RelationVocabulary::standard();
  auto snap = update_graph({}, frames[0], default_relations(), cfg, vocab, ids).snapshot;
  const auto t0 = frames[0].frame_stamp.micros();
  SyncedFrame only_cup = frames[0];
  only_cup.observations.resize(1);
  for (std::int64_t dt : {1000000, 2000000}) {
    only_cup.frame_stamp = Timestamp::from_micros(t0 + dt);
    snap = update_graph(snap, only_cup, default_relations(), cfg, vocab, ids).snapshot;
    EXPECT_EQ(snap.nodes.size(), 2u) << dt;
  }
  only_cup.frame_stamp = Timestamp::from_micros(t0 + 2000001);
  snap = update_graph(snap, only_cup, default_relations(), cfg, vocab, ids).snapshot;
  EXPECT_EQ(snap.nodes.size(), 1u);
  EXPECT_TRUE(snap.edges.empty());
}

TEST(SemanticMemory, FloorQueryAndOrdering) {
  SemanticMemory memory;
  for (std::int64_t us : {100, 200, 300}) {
    SceneGraphSnapshot s;
    s.stamp = Timestamp::from_micros(us);
    ObjectNode n;
    n.node_id = 7;
    n.obs_count = us;
    n.fused_class = ClassDistribution::certain("cup");
    s.nodes.push_back(n);
    memory.append(s);
  }
  EXPECT_EQ(memory.size(), 3u);
  EXPECT_EQ(memory.query(Timestamp::from_micros(250)).stamp.micros(), 200);
  EXPECT_EQ(memory.query(Timestamp::from_micros(300)).stamp.micros(), 300);
  EXPECT_EQ(memory.query(Timestamp::from_micros(10000)).stamp.micros(), 300);
  EXPECT_EQ(code_of([&] { memory.query(Timestamp::from_micros(99)); }), ErrorCode::kNotFound);
  SceneGraphSnapshot stale;
  stale.stamp = Timestamp::from_micros(300);
  EXPECT_EQ(code_of([&] { memory.append(stale); }), ErrorCode::kOrdering);
  const auto history = memory.node_history(7);
  ASSERT_EQ(history.size(), 3u);
  EXPECT_EQ(history[1].second.obs_count, 200);
  EXPECT_TRUE(memory.node_history(8).empty());
  EXPECT_EQ(code_of([&] { memory.at(3); }), ErrorCode::kNotFound);
}

}  // namespace
}  // namespace cogmap
