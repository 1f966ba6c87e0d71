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
#include <optional>
#include <span>
#include <vector>

#include "cogmap/graph_types.hpp"

namespace cogmap {

struct SnapshotMetrics {
  Timestamp stamp;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double violation_rate = 0;
  double entropy = 0;  // bits
  double avg_degree = 0;
  double clustering_coefficient = 0;
  double stability = 1;  // 1 for the first tick, which has no predecessor
  bool has_predecessor = false;
};

struct SrqiWeights {
  double consistency = 0.4;
  double entropy = 0.3;
  double stability = 0.3;

  void validate() const;
};

struct RunMetrics {
  double fps = 0;
  std::uint64_t trial_seed = 0;
  std::size_t ticks = 0;
  double node_count = 0;
  double edge_count = 0;
  double violation_rate = 0;
  double entropy = 0;
  double avg_degree = 0;
  double clustering_coefficient = 0;
  double stability = 1;  // mean over ticks with a predecessor
  double srqi = 0;
};

/// Shannon entropy in bits of the relation-type frequencies; 0 without edges.
double relation_entropy(const std::vector<RelationEdge>& edges);

struct StructuralComplexity {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;        // typed, directed edges
  std::size_t undirected_links = 0;  // simple undirected projection
  double avg_degree = 0;
  double clustering_coefficient = 0;
};

/// Degree and clustering are taken on the undirected simple projection
/// (parallel and reciprocal edges collapse, self loops ignored). Clustering
/// averages the local coefficient over nodes of degree >= 2.
StructuralComplexity structural_complexity(const SceneGraphSnapshot& snapshot);

/// Jaccard similarity of (subject, relation, object) key sets; 1 when both
/// are empty.
double stability(const std::vector<RelationEdge>& current, const std::vector<RelationEdge>& previous);

/// w_c (1 - V) + w_e (H / log2 |R|) + w_s S.
double srqi(double mean_violation, double mean_entropy, double mean_stability, const SrqiWeights& weights,
            std::size_t vocabulary_size);

SnapshotMetrics snapshot_metrics(const SceneGraphSnapshot& snapshot, double violation_rate,
                                 const SceneGraphSnapshot* previous);

RunMetrics aggregate_run(const std::vector<SnapshotMetrics>& ticks, const SrqiWeights& weights,
                         std::size_t vocabulary_size, double fps, std::uint64_t seed);

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);
/// Upper tail of the chi-square distribution.
double chi_square_survival(double x, double dof);

struct KruskalWallisResult {
  double h = 0;
  double p_value = 1;
  std::size_t dof = 0;
};

/// Rank test over >= 2 non-empty groups with N >= 3 in total. Ties take
/// mid-ranks and H is divided by the usual tie correction; p comes from the
/// chi-square approximation with k-1 degrees of freedom.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// 0.9 min(sd, IQR/1.34) n^(-1/5); IQR is ignored when it is zero.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian kernel density at each grid point. Without an explicit bandwidth
/// Silverman's rule is used and needs at least two samples with spread.
std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        std::optional<double> bandwidth = std::nullopt);

/// Linear-interpolation quantile (the R/NumPy default) of unsorted data.
double quantile(std::vector<double> data, double q);

}  // namespace cogmap
