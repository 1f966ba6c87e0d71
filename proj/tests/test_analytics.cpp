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

#include <cmath>
#include <numbers>
#include <random>

#include "cogmap/analytics.hpp"
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

RelationEdge edge(NodeId s, const std::string& rel, NodeId o) {
  RelationEdge e;
  e.subject = s;
  e.relation = rel;
  e.object = o;
  return e;
}

SceneGraphSnapshot graph(int n, const std::vector<std::pair<int, int>>& links) {
  SceneGraphSnapshot g;
  for (int i = 0; i < n; ++i) {
    ObjectNode node;
    node.node_id = i;
    g.nodes.push_back(node);
  }
  for (auto [a, b] : links) g.edges.push_back(edge(a, "left_of", b));
  return g;
}

TEST(Entropy, UniformOverFourIsTwoBits) {
  const std::vector<RelationEdge> edges{edge(0, "left_of", 1), edge(0, "above", 1), edge(1, "inside", 0),
                                        edge(1, "behind", 0)};
  EXPECT_NEAR(relation_entropy(edges), 2.0, 1e-9);
  EXPECT_EQ(relation_entropy({}), 0.0);
  EXPECT_EQ(relation_entropy({edge(0, "left_of", 1), edge(2, "left_of", 1)}), 0.0);
  // p = (3/4, 1/4)
  const double h = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  EXPECT_NEAR(relation_entropy({edge(0, "a", 1), edge(1, "a", 2), edge(2, "a", 0), edge(0, "b", 2)}), h, 1e-12);
}

TEST(Structure, TriangleAndPath) {
  const auto tri = structural_complexity(graph(3, {{0, 1}, {1, 2}, {2, 0}}));
  EXPECT_EQ(tri.clustering_coefficient, 1.0);
  EXPECT_EQ(tri.avg_degree, 2.0);
  const auto path = structural_complexity(graph(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(path.clustering_coefficient, 0.0);
  EXPECT_DOUBLE_EQ(path.avg_degree, 4.0 / 3.0);
  // Reciprocal and parallel edges collapse; self loops vanish.
  const auto dup = structural_complexity(graph(3, {{0, 1}, {1, 0}, {0, 1}, {2, 2}}));
  EXPECT_EQ(dup.undirected_links, 1u);
  EXPECT_EQ(dup.edge_count, 4u);
}

TEST(Structure, ClusteringMatchesTriangleOracle) {
  std::mt19937_64 rng(41);
  const auto onto = Ontology::standard();
  for (int t = 0; t < 200; ++t) {
    const auto g = oracle::random_graph(rng, onto, 12, 40);
    std::vector<std::pair<int, int>> links;
    for (const auto& e : g.edges) links.emplace_back(static_cast<int>(e.subject), static_cast<int>(e.object));
    EXPECT_NEAR(structural_complexity(g).clustering_coefficient,
                oracle::clustering_by_triangles(static_cast<int>(g.nodes.size()), links), 1e-12);
  }
}

TEST(Stability, Jaccard) {
  const std::vector<RelationEdge> a{edge(0, "left_of", 1), edge(1, "right_of", 0)};
  const std::vector<RelationEdge> b{edge(0, "left_of", 1), edge(0, "above", 1), edge(2, "inside", 1)};
  EXPECT_DOUBLE_EQ(stability(a, b), 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(stability(a, a), 1.0);
  EXPECT_DOUBLE_EQ(stability({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(stability(a, {}), 0.0);
}

TEST(Srqi, FormulaAndErrors) {
  EXPECT_NEAR(srqi(0.1, 1.5, 0.8, {}, 8), 0.4 * 0.9 + 0.3 * 0.5 + 0.3 * 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(srqi(0, 3, 1, {}, 8), 1.0);
  EXPECT_EQ(code_of([] { srqi(0, 0, 1, {}, 1); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([] { srqi(1.5, 0, 1, {}, 8); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { srqi(0, 4, 1, {}, 8); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { srqi(0, 0, 1, {0.5, 0.5, 0.5}, 8); }), ErrorCode::kConfiguration);
}

TEST(Srqi, FirstTickStabilityIsExcluded) {
  std::vector<SnapshotMetrics> ticks(3);
  ticks[0].stability = 1;
  ticks[1].stability = 0.5;
  ticks[1].has_predecessor = true;
  ticks[2].stability = 0.7;
  ticks[2].has_predecessor = true;
  ticks[0].violation_rate = 0.3;
  const auto r = aggregate_run(ticks, {}, 8, 30, 4);
  EXPECT_DOUBLE_EQ(r.stability, 0.6);
  EXPECT_DOUBLE_EQ(r.violation_rate, 0.1);
  EXPECT_NEAR(r.srqi, 0.4 * 0.9 + 0.3 * 0.6, 1e-12);
  EXPECT_EQ(r.ticks, 3u);
}

TEST(KruskalWallis, HandRankedExample) {
  const auto r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  EXPECT_NEAR(r.h, 3.857, 1e-3);
  EXPECT_NEAR(r.h, 27.0 / 7.0, 1e-12);
  EXPECT_EQ(r.dof, 1u);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(r.h / 2)), 1e-12);
}

TEST(KruskalWallis, MatchesRankSumOracle) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::vector<double>> groups(2 + rng() % 4);
    for (auto& g : groups) {
      g.resize(1 + rng() % 10);
      // Coarse values so ties are common.
      for (auto& v : g) v = static_cast<double>(rng() % 12) * 0.5;
    }
    std::size_t total = 0;
    for (const auto& g : groups) total += g.size();
    if (total < 3) continue;
    EXPECT_NEAR(kruskal_wallis(groups).h, oracle::kruskal_wallis_h(groups), 1e-9) << t;
  }
}

TEST(KruskalWallis, DegenerateInputs) {
  const auto same = kruskal_wallis({{1, 1}, {1, 1}});
  EXPECT_EQ(same.h, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_EQ(code_of([] { kruskal_wallis({{1, 2, 3}}); }), ErrorCode::kArity);
  EXPECT_EQ(code_of([] { kruskal_wallis({{1, 2}, {}}); }), ErrorCode::kArity);
  EXPECT_EQ(code_of([] { kruskal_wallis({{1}, {2}}); }), ErrorCode::kArity);
}

TEST(ChiSquare, ClosedForms) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 15.0}) {
    EXPECT_NEAR(chi_square_survival(x, 1), std::erfc(std::sqrt(x / 2)), 1e-12);
    EXPECT_NEAR(chi_square_survival(x, 2), std::exp(-x / 2), 1e-12);
    EXPECT_NEAR(chi_square_survival(x, 4), std::exp(-x / 2) * (1 + x / 2), 1e-12);
  }
  // Textbook critical values at the 5% level.
  EXPECT_NEAR(chi_square_survival(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_survival(9.487729036781154, 4), 0.05, 1e-9);
  EXPECT_EQ(chi_square_survival(0, 3), 1.0);
}

TEST(Quantile, Type7) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4, 5}, 0.25), 2.0);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({10, 20}, 0.95), 19.5);
}

TEST(Kde, SilvermanAndDirectSum) {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  // sd = 1.5811, IQR/1.34 = 1.4925 wins.
  EXPECT_NEAR(silverman_bandwidth(xs), 0.9 * (2.0 / 1.34) * std::pow(5.0, -0.2), 1e-12);
  const std::vector<double> flat_iqr{0, 0, 0, 0, 10};
  const double sd = std::sqrt((4 * 4.0 + 64.0) / 4.0);
  EXPECT_NEAR(silverman_bandwidth(flat_iqr), 0.9 * sd * std::pow(5.0, -0.2), 1e-12);

  const std::vector<double> grid{0, 2.5, 6};
  const double h = 0.7;
  const auto dens = kde(xs, grid, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double f = 0;
    for (double s : xs) f += std::exp(-0.5 * std::pow((grid[i] - s) / h, 2)) / std::sqrt(2 * std::numbers::pi);
    EXPECT_NEAR(dens[i], f / (xs.size() * h), 1e-12);
  }
  EXPECT_EQ(code_of([] { silverman_bandwidth(std::vector<double>{1}); }), ErrorCode::kDegenerateBandwidth);
  EXPECT_EQ(code_of([] { silverman_bandwidth(std::vector<double>{2, 2, 2}); }), ErrorCode::kDegenerateBandwidth);
}

TEST(Kde, IntegratesToOne) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd(0.7, 0.05);
  std::vector<double> xs(40);
  for (auto& x : xs) x = nd(rng);
  std::vector<double> grid;
  for (double x = 0; x <= 1.4; x += 0.001) grid.push_back(x);
  const auto d = kde(xs, grid);
  double area = 0;
  for (double v : d) area += v * 0.001;
  EXPECT_NEAR(area, 1.0, 1e-3);
}

}  // namespace
}  // namespace cogmap
