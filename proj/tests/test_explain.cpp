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

#include "cogmap/explain.hpp"
#include "support/oracles.hpp"

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

ObjectNode node(NodeId id, const std::string& cls, const Aabb3& box, double sigma) {
  ObjectNode n;
  n.node_id = id;
  n.track_id = 100 + id;
  n.fused_class = ClassDistribution::certain(cls);
  n.obs_count = 1;
  n.world_box = box;
  n.centroid = box.center();
  n.position_sigma = sigma;
  n.last_observation.track_id = n.track_id;
  return n;
}

// Two-node snapshot with every relation infer_relations emits for (0 -> 1).
struct Fixture {
  SceneGraphSnapshot snap;
  std::vector<PredicateEvaluation> evals;
};

Fixture pair_fixture(const ObjectNode& s, const ObjectNode& o) {
  Fixture f;
  f.snap.stamp = Timestamp::from_micros(1000000);
  f.snap.pose_stamp = Timestamp::from_micros(999000);
  f.snap.nodes = {s, o};
  EdgeId id = 5;
  for (auto& e : infer_relations(s, o, PredicateConfig{})) {
    RelationEdge edge;
    edge.edge_id = edge.trace_id = id++;
    edge.subject = s.node_id;
    edge.object = o.node_id;
    edge.relation = e.relation;
    edge.confidence = e.confidence;
    f.snap.edges.push_back(edge);
    f.evals.push_back(std::move(e));
  }
  return f;
}

std::string render_first(Fixture& f) {
  const auto onto = Ontology::standard();
  f.snap.traces = capture_traces(f.snap, f.evals, onto, validate(f.snap, onto));
  EXPECT_EQ(f.snap.traces.size(), f.snap.edges.size());
  const auto text = render_explanation(f.snap.traces.at(0), f.snap);
  EXPECT_TRUE(oracle::numbers_backed_by_trace(text.sentence, f.snap.traces[0])) << text.sentence;
  return text.sentence;
}

TEST(Explain, CupOnTableSentence) {
  auto f = pair_fixture(node(0, "cup", Aabb3(Vector3(0.4, 0.4, 0.754), Vector3(0.5, 0.5, 0.854)), 0.002),
                        node(1, "table", Aabb3(Vector3(0, 0, 0), Vector3(1, 1, 0.75)), 0.004));
  ASSERT_EQ(f.snap.edges.at(0).relation, "on_top_of");
  EXPECT_EQ(render_first(f),
            "The cup is on top of the table because its lower face rests within 0.004 m of the table's surface "
            "(tolerance 0.020 m) and its centroid projects within the table's area.");
  const auto& trace = f.snap.traces[0];
  EXPECT_EQ(trace.trace_id, 5);
  EXPECT_EQ(trace.pose_stamp, f.snap.pose_stamp);
  ASSERT_EQ(trace.observations.size(), 2u);
  EXPECT_EQ(trace.observations[0].track_id, 100);
  EXPECT_DOUBLE_EQ(trace.sigma_object, 0.004);
  EXPECT_NEAR(trace.margin, 0.016, 1e-12);
}

TEST(Explain, BookInsideBoxSentence) {
  auto f = pair_fixture(node(0, "book", Aabb3(Vector3(0.8, 0.2, 0.2), Vector3(1.005, 0.4, 0.4)), 0.003),
                        node(1, "box", Aabb3(Vector3(0, 0, 0), Vector3(1, 1, 1)), 0.003));
  ASSERT_EQ(f.snap.edges.size(), 1u);
  EXPECT_EQ(render_first(f),
            "The book is inside the box because 0.98 of its volume lies within the box's interior (threshold 0.95).");
}

TEST(Explain, LateralSentenceIsBacked) {
  auto f = pair_fixture(node(0, "bottle", Aabb3(Vector3(-0.5, 0, 0), Vector3(-0.4, 0.1, 0.3)), 0.003),
                        node(1, "laptop", Aabb3(Vector3(0.1, 0, 0), Vector3(0.4, 0.1, 0.02)), 0.003));
  ASSERT_EQ(f.snap.edges.at(0).relation, "left_of");
  EXPECT_EQ(render_first(f),
            "The bottle is to the left of the laptop because its right side lies 0.500 m left of the laptop's left "
            "side with centroids 0.714 m apart (pairing limit 2.000 m). Flagged: inverse(left_of,right_of) failed.");
}

TEST(Explain, FlaggedEdgeNamesCounterpart) {
  Fixture f;
  f.snap.nodes = {node(0, "cup", Aabb3(Vector3(0, 0, 1), Vector3(0.1, 0.1, 1.1)), 0.01),
                  node(1, "table", Aabb3(Vector3(0, 0, 0), Vector3(1, 1, 0.75)), 0.01)};
  auto above = infer_relations(f.snap.nodes[0], f.snap.nodes[1], PredicateConfig{});
  ASSERT_EQ(above.at(0).relation, "above");
  RelationEdge e1;
  e1.edge_id = e1.trace_id = 1;
  e1.subject = 0;
  e1.object = 1;
  e1.relation = "above";
  RelationEdge e2 = e1;
  e2.edge_id = e2.trace_id = 2;
  e2.relation = "below";
  f.snap.edges = {e1, e2};
  PredicateEvaluation below = above[0];
  below.relation = "below";
  f.evals = {above[0], below};
  const auto sentence = render_first(f);
  EXPECT_NE(sentence.find("Flagged: mutually_exclusive(above,below) conflicts with edge 2."), std::string::npos)
      << sentence;
  EXPECT_NE(sentence.find("Flagged: inverse(above,below) failed."), std::string::npos) << sentence;
}

TEST(Explain, MissingEvidenceAndDanglingReferences) {
  auto f = pair_fixture(node(0, "cup", Aabb3(Vector3(0.4, 0.4, 0.754), Vector3(0.5, 0.5, 0.854)), 0.002),
                        node(1, "table", Aabb3(Vector3(0, 0, 0), Vector3(1, 1, 0.75)), 0.004));
  const auto& edge = f.snap.edges[0];
  const auto prov = provenance_of(edge, f.snap);
  EXPECT_EQ(code_of([&] { capture_trace(edge, nullptr, {}, prov); }), ErrorCode::kIncompleteEvidence);
  PredicateEvaluation wrong = f.evals[0];
  wrong.relation = "inside";
  EXPECT_EQ(code_of([&] { capture_trace(edge, &wrong, {}, prov); }), ErrorCode::kIncompleteEvidence);

  const auto trace = capture_trace(edge, &f.evals[0], {}, prov);
  SceneGraphSnapshot no_edge = f.snap;
  no_edge.edges.clear();
  EXPECT_EQ(code_of([&] { render_explanation(trace, no_edge); }), ErrorCode::kIntegrity);
  SceneGraphSnapshot no_node = f.snap;
  no_node.nodes.pop_back();
  EXPECT_EQ(code_of([&] { render_explanation(trace, no_node); }), ErrorCode::kIntegrity);
  EXPECT_EQ(code_of([&] { provenance_of(edge, no_node); }), ErrorCode::kIntegrity);
  ReasoningTrace other = trace;
  other.trace_id = 77;
  EXPECT_EQ(code_of([&] { render_explanation(other, f.snap); }), ErrorCode::kIntegrity);
}

TEST(Explain, Phrases) {
  EXPECT_EQ(relation_phrase("on_top_of"), "on top of");
  EXPECT_EQ(relation_phrase("left_of"), "to the left of");
  EXPECT_EQ(relation_phrase("next_to"), "next to");
}

}  // namespace
}  // namespace cogmap
