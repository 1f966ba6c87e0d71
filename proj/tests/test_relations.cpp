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

#include "cogmap/relations.hpp"

namespace cogmap {
namespace {

Aabb3 box(double x0, double y0, double z0, double x1, double y1, double z1) {
  return Aabb3(Vector3(x0, y0, z0), Vector3(x1, y1, z1));
}

std::vector<std::string> names(const std::vector<PredicateEvaluation>& evals) {
  std::vector<std::string> out;
  for (const auto& e : evals) out.push_back(e.relation);
  return out;
}

const PredicateEvaluation* find(const std::vector<PredicateEvaluation>& evals, std::string_view rel) {
  for (const auto& e : evals) {
    if (e.relation == rel) return &e;
  }
  return nullptr;
}

double measured(const PredicateEvaluation& e, std::string_view name) {
  for (const auto& v : e.measured) {
    if (v.name == name) return v.value;
  }
  ADD_FAILURE() << "missing measured value " << name;
  return 0;
}

// Midpoint-grid estimate of the fraction of a's volume inside b.
double grid_containment(const Aabb3& a, const Aabb3& b, int n) {
  int inside = 0;
  const Vector3 size = a.sizes();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vector3 p = a.min() + size.cwiseProduct(Vector3(i + 0.5, j + 0.5, k + 0.5) / n);
        inside += b.contains(p);
      }
    }
  }
  return static_cast<double>(inside) / (n * n * n);
}

const PredicateConfig kCfg{};

TEST(Relations, CupOnTable) {
  const auto table = box(0, 0, 0, 1, 1, 0.75);
  const auto cup = box(0.4, 0.4, 0.754, 0.5, 0.5, 0.854);
  const auto evals = infer_relations(cup, 0.002, table, 0.004, kCfg);
  ASSERT_EQ(names(evals), std::vector<std::string>{"on_top_of"});
  EXPECT_NEAR(measured(evals[0], "contact_distance"), 0.004, 1e-12);
  EXPECT_NEAR(evals[0].margin, 0.016, 1e-12);
  EXPECT_NEAR(evals[0].confidence, std::min(1.0, 0.016 / (3 * 0.006)), 1e-12);
  EXPECT_EQ(evals[0].thresholds.back().name, "confidence_scale");
  // And the reverse pair is below, not on_top_of.
  EXPECT_EQ(names(infer_relations(table, 0.004, cup, 0.002, kCfg)), std::vector<std::string>{});
}

TEST(Relations, CentroidOutsideFootprintIsNotOnTop) {
  const auto table = box(0, 0, 0, 1, 1, 0.75);
  const auto cup = box(0.95, 0.4, 0.75, 1.15, 0.5, 0.85);
  EXPECT_EQ(find(infer_relations(cup, 0, table, 0, kCfg), "on_top_of"), nullptr);
}

TEST(Relations, AboveAndBelowMirror) {
  const auto lamp = box(0.2, 0.2, 1.5, 0.6, 0.6, 1.7);
  const auto table = box(0, 0, 0, 1, 1, 0.75);
  const auto up = infer_relations(lamp, 0.01, table, 0.01, kCfg);
  const auto down = infer_relations(table, 0.01, lamp, 0.01, kCfg);
  ASSERT_NE(find(up, "above"), nullptr);
  ASSERT_NE(find(down, "below"), nullptr);
  EXPECT_DOUBLE_EQ(find(up, "above")->margin, find(down, "below")->margin);
  EXPECT_DOUBLE_EQ(measured(*find(up, "above"), "footprint_overlap"), 1.0);
}

TEST(Relations, InsideSuppressesLateralAndVertical) {
  const auto drawer = box(0, 0, 0, 1, 1, 1);
  const auto book = box(0.1, 0.2, 0.3, 0.4, 0.5, 0.6);
  const auto evals = infer_relations(book, 0.01, drawer, 0.01, kCfg);
  ASSERT_EQ(names(evals), std::vector<std::string>{"inside"});
  EXPECT_DOUBLE_EQ(measured(evals[0], "containment"), 1.0);
  EXPECT_NEAR(evals[0].margin, 0.1, 1e-12);
}

TEST(Relations, LateralAxesAndPairingLimit) {
  const auto a = box(0, 0, 0, 0.2, 0.2, 0.2);
  const auto b = box(0.5, 0.6, 0, 0.7, 0.8, 0.2);
  const auto ab = names(infer_relations(a, 0, b, 0, kCfg));
  EXPECT_EQ(ab, (std::vector<std::string>{"left_of", "in_front_of"}));
  const auto ba = names(infer_relations(b, 0, a, 0, kCfg));
  EXPECT_EQ(ba, (std::vector<std::string>{"right_of", "behind"}));
  const auto far = box(5, 0, 0, 5.2, 0.2, 0.2);
  EXPECT_TRUE(infer_relations(a, 0, far, 0, kCfg).empty());
}

TEST(Relations, ConfidenceClamp) {
  EXPECT_DOUBLE_EQ(relation_confidence(0.5, 0.1, 0.1, 3), 0.5 / 0.6);
  EXPECT_DOUBLE_EQ(relation_confidence(5, 0.1, 0.1, 3), 1.0);
  EXPECT_DOUBLE_EQ(relation_confidence(-1, 0.1, 0.1, 3), 0.0);
  EXPECT_DOUBLE_EQ(relation_confidence(0.1, 0, 0, 3), 1.0);
}

TEST(Relations, ContainmentMatchesGridEstimate) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-1, 1), len(0.05, 1);
  for (int t = 0; t < 200; ++t) {
    const Vector3 a0(pos(rng), pos(rng), pos(rng)), b0(pos(rng), pos(rng), pos(rng));
    const Aabb3 a(a0, a0 + Vector3(len(rng), len(rng), len(rng)));
    const Aabb3 b(b0, b0 + Vector3(len(rng), len(rng), len(rng)));
    EXPECT_NEAR(containment_ratio(a, b), grid_containment(a, b, 40), 0.08) << t;
  }
}

TEST(Relations, ExhaustiveMutualConsistency) {
  // For random pairs: opposing relations never co-occur, and each directed
  // relation is matched by its mirror on the swapped pair (lateral and vertical).
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), len(0.05, 0.8);
  for (int t = 0; t < 2000; ++t) {
    const Vector3 a0(pos(rng), pos(rng), pos(rng)), b0(pos(rng), pos(rng), pos(rng));
    const Aabb3 a(a0, a0 + Vector3(len(rng), len(rng), len(rng)));
    const Aabb3 b(b0, b0 + Vector3(len(rng), len(rng), len(rng)));
    const auto ab = infer_relations(a, 0.01, b, 0.01, kCfg);
    const auto ba = infer_relations(b, 0.01, a, 0.01, kCfg);
    for (auto [x, y] : {std::pair{"left_of", "right_of"}, {"in_front_of", "behind"}, {"above", "below"}}) {
      EXPECT_FALSE(find(ab, x) && find(ab, y));
      if (!find(ab, "inside") && !find(ba, "inside")) {
        EXPECT_EQ(find(ab, x) != nullptr, find(ba, y) != nullptr) << t << " " << x;
      }
    }
    for (const auto& e : ab) {
      EXPECT_GE(e.confidence, 0.0);
      EXPECT_LE(e.confidence, 1.0);
    }
  }
}

TEST(Relations, ConfigValidation) {
  PredicateConfig bad;
  bad.containment_min = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = PredicateConfig{};
  bad.confidence_scale = 0;
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_NO_THROW(PredicateConfig{}.validate());
  EXPECT_THROW(RelationVocabulary({"a", "a"}), Error);
  EXPECT_EQ(RelationVocabulary::standard().size(), 8u);
}

}  // namespace
}  // namespace cogmap
