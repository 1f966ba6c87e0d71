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

#include "cogmap/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include <unsupported/Eigen/SpecialFunctions>

namespace cogmap {

void SrqiWeights::validate() const {
  if (consistency < 0 || entropy < 0 || stability < 0 ||
      std::abs(consistency + entropy + stability - 1.0) > 1e-9) {
    throw Error(ErrorCode::kConfiguration, "SRQI weights must be non-negative and sum to 1");
  }
}

double relation_entropy(const std::vector<RelationEdge>& edges) {
  if (edges.empty()) return 0.0;
  std::map<std::string_view, std::size_t> counts;
  for (const auto& e : edges) ++counts[e.relation];
  const double n = static_cast<double>(edges.size());
  double h = 0;
  for (const auto& [rel, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h;  // no -0.0
}

StructuralComplexity structural_complexity(const SceneGraphSnapshot& snapshot) {
  StructuralComplexity out;
  out.node_count = snapshot.nodes.size();
  out.edge_count = snapshot.edges.size();
  std::map<NodeId, std::set<NodeId>> adjacency;
  for (const auto& n : snapshot.nodes) adjacency[n.node_id];
  for (const auto& e : snapshot.edges) {
    if (e.subject == e.object) continue;
    adjacency[e.subject].insert(e.object);
    adjacency[e.object].insert(e.subject);
  }
  std::size_t degree_sum = 0;
  double clustering_sum = 0;
  std::size_t clustered = 0;
  for (const auto& [v, neighbors] : adjacency) {
    degree_sum += neighbors.size();
    const std::size_t k = neighbors.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (auto a = neighbors.begin(); a != neighbors.end(); ++a) {
      const auto& na = adjacency[*a];
      for (auto b = std::next(a); b != neighbors.end(); ++b) links += na.count(*b);
    }
    clustering_sum += 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
    ++clustered;
  }
  out.undirected_links = degree_sum / 2;
  out.avg_degree = adjacency.empty() ? 0.0 : static_cast<double>(degree_sum) / static_cast<double>(adjacency.size());
  out.clustering_coefficient = clustered ? clustering_sum / static_cast<double>(clustered) : 0.0;
  return out;
}

double stability(const std::vector<RelationEdge>& current, const std::vector<RelationEdge>& previous) {
  using Key = std::tuple<NodeId, std::string_view, NodeId>;
  std::set<Key> a, b;
  for (const auto& e : current) a.emplace(e.subject, e.relation, e.object);
  for (const auto& e : previous) b.emplace(e.subject, e.relation, e.object);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& k : a) shared += b.count(k);
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

double srqi(double mean_violation, double mean_entropy, double mean_stability, const SrqiWeights& weights,
            std::size_t vocabulary_size) {
  weights.validate();
  if (vocabulary_size < 2) throw Error(ErrorCode::kConfiguration, "SRQI needs a vocabulary of at least 2 relations");
  const double max_entropy = std::log2(static_cast<double>(vocabulary_size));
  constexpr double slack = 1e-9;
  if (!(mean_violation >= -slack && mean_violation <= 1 + slack) ||
      !(mean_stability >= -slack && mean_stability <= 1 + slack) ||
      !(mean_entropy >= -slack && mean_entropy <= max_entropy + slack)) {
    throw Error(ErrorCode::kDomain, "SRQI inputs out of range");
  }
  const double value = weights.consistency * (1.0 - mean_violation) + weights.entropy * (mean_entropy / max_entropy) +
                       weights.stability * mean_stability;
  return std::clamp(value, 0.0, 1.0);
}

SnapshotMetrics snapshot_metrics(const SceneGraphSnapshot& snapshot, double violation_rate,
                                 const SceneGraphSnapshot* previous) {
  const auto structure = structural_complexity(snapshot);
  SnapshotMetrics m;
  m.stamp = snapshot.stamp;
  m.node_count = structure.node_count;
  m.edge_count = structure.edge_count;
  m.violation_rate = violation_rate;
  m.entropy = relation_entropy(snapshot.edges);
  m.avg_degree = structure.avg_degree;
  m.clustering_coefficient = structure.clustering_coefficient;
  m.has_predecessor = previous != nullptr;
  m.stability = previous ? stability(snapshot.edges, previous->edges) : 1.0;
  return m;
}

RunMetrics aggregate_run(const std::vector<SnapshotMetrics>& ticks, const SrqiWeights& weights,
                         std::size_t vocabulary_size, double fps, std::uint64_t seed) {
  RunMetrics r;
  r.fps = fps;
  r.trial_seed = seed;
  r.ticks = ticks.size();
  if (ticks.empty()) {
    r.srqi = srqi(0.0, 0.0, 1.0, weights, vocabulary_size);
    return r;
  }
  std::size_t with_predecessor = 0;
  double stability_sum = 0;
  for (const auto& t : ticks) {
    r.node_count += static_cast<double>(t.node_count);
    r.edge_count += static_cast<double>(t.edge_count);
    r.violation_rate += t.violation_rate;
    r.entropy += t.entropy;
    r.avg_degree += t.avg_degree;
    r.clustering_coefficient += t.clustering_coefficient;
    if (t.has_predecessor) {
      stability_sum += t.stability;
      ++with_predecessor;
    }
  }
  const double n = static_cast<double>(ticks.size());
  r.node_count /= n;
  r.edge_count /= n;
  r.violation_rate /= n;
  r.entropy /= n;
  r.avg_degree /= n;
  r.clustering_coefficient /= n;
  r.stability = with_predecessor ? stability_sum / static_cast<double>(with_predecessor) : 1.0;
  r.srqi = srqi(r.violation_rate, r.entropy, r.stability, weights, vocabulary_size);
  return r;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0) || !(x >= 0)) throw Error(ErrorCode::kDomain, "incomplete gamma needs a > 0, x >= 0");
  return std::clamp(Eigen::numext::igammac(a, x), 0.0, 1.0);
}

double chi_square_survival(double x, double dof) {
  if (!(dof > 0)) throw Error(ErrorCode::kDomain, "chi-square needs positive degrees of freedom");
  if (x <= 0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kArity, "Kruskal-Wallis needs at least two groups");
  std::vector<std::pair<double, std::size_t>> pooled;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error(ErrorCode::kArity, "Kruskal-Wallis group " + std::to_string(g) + " is empty");
    for (double v : groups[g]) pooled.emplace_back(v, g);
  }
  const std::size_t n_total = pooled.size();
  if (n_total < 3) throw Error(ErrorCode::kArity, "Kruskal-Wallis needs at least three samples");
  std::sort(pooled.begin(), pooled.end());

  std::vector<double> rank_sums(groups.size(), 0.0);
  double tie_term = 0;
  for (std::size_t i = 0; i < n_total;) {
    std::size_t j = i;
    while (j < n_total && pooled[j].first == pooled[i].first) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) rank_sums[pooled[k].second] += mid_rank;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double n = static_cast<double>(n_total);
  KruskalWallisResult result;
  result.dof = groups.size() - 1;
  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction <= 0) return result;  // every value identical
  double sum = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    sum += rank_sums[g] * rank_sums[g] / static_cast<double>(groups[g].size());
  }
  const double h = (12.0 / (n * (n + 1)) * sum - 3.0 * (n + 1)) / correction;
  result.h = std::max(h, 0.0);
  result.p_value = chi_square_survival(result.h, static_cast<double>(result.dof));
  return result;
}

double quantile(std::vector<double> data, double q) {
  if (data.empty()) throw Error(ErrorCode::kArity, "quantile of an empty sample");
  std::sort(data.begin(), data.end());
  const double pos = q * static_cast<double>(data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, data.size() - 1);
  return data[lo] + (pos - static_cast<double>(lo)) * (data[hi] - data[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::kDegenerateBandwidth, "bandwidth needs at least two samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> data(samples.begin(), samples.end());
  const double iqr = quantile(data, 0.75) - quantile(data, 0.25);
  const double spread = iqr > 0 ? std::min(sd, iqr / 1.34) : sd;
  if (!(spread > 0)) throw Error(ErrorCode::kDegenerateBandwidth, "samples have zero spread");
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid, std::optional<double> bandwidth) {
  if (samples.empty()) throw Error(ErrorCode::kDegenerateBandwidth, "density of an empty sample");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(samples);
  if (!(h > 0)) throw Error(ErrorCode::kDegenerateBandwidth, "bandwidth must be positive");
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    double acc = 0;
    for (double s : samples) {
      const double z = (x - s) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out.push_back(norm * acc);
  }
  return out;
}

}  // namespace cogmap
