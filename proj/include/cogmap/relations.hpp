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

#include <string>
#include <string_view>
#include <vector>

#include "cogmap/core_model.hpp"
#include "cogmap/graph_types.hpp"

namespace cogmap {

namespace relation {
inline constexpr std::string_view kLeftOf = "left_of";
inline constexpr std::string_view kRightOf = "right_of";
inline constexpr std::string_view kInFrontOf = "in_front_of";
inline constexpr std::string_view kBehind = "behind";
inline constexpr std::string_view kAbove = "above";
inline constexpr std::string_view kBelow = "below";
inline constexpr std::string_view kOnTopOf = "on_top_of";
inline constexpr std::string_view kInside = "inside";
}  // namespace relation

class RelationVocabulary {
 public:
  /// left_of, right_of, in_front_of, behind, above, below, on_top_of, inside.
  static RelationVocabulary standard();
  explicit RelationVocabulary(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

struct PredicateConfig {
  double contact_eps = 0.02;           // m
  double footprint_overlap_min = 0.2;  // fraction
  double containment_min = 0.95;       // fraction
  double lateral_pairing_max = 2.0;    // m
  double confidence_scale = 3.0;

  void validate() const;
  /// The thresholds above as named values, in declaration order.
  std::vector<NamedValue> as_named_values() const;
};

/// Fraction of a's xy footprint covered by b's. Zero-area footprints give 0.
template <typename Scalar>
Scalar footprint_overlap(const Aabb3T<Scalar>& a, const Aabb3T<Scalar>& b) {
  using std::max;
  using std::min;
  const Scalar area = (a.max().x() - a.min().x()) * (a.max().y() - a.min().y());
  if (!(area > Scalar(0))) return Scalar(0);
  const Scalar dx = min(a.max().x(), b.max().x()) - max(a.min().x(), b.min().x());
  const Scalar dy = min(a.max().y(), b.max().y()) - max(a.min().y(), b.min().y());
  if (dx <= Scalar(0) || dy <= Scalar(0)) return Scalar(0);
  return dx * dy / area;
}

/// Fraction of a's volume inside b. A zero-volume a counts as fully inside
/// when its centroid lies in b.
template <typename Scalar>
Scalar containment_ratio(const Aabb3T<Scalar>& a, const Aabb3T<Scalar>& b) {
  const Vector3T<Scalar> size = a.sizes();
  const Scalar volume = size.prod();
  if (!(volume > Scalar(0))) {
    return b.contains(a.center()) ? Scalar(1) : Scalar(0);
  }
  const Vector3T<Scalar> overlap =
      (a.max().cwiseMin(b.max()) - a.min().cwiseMax(b.min())).cwiseMax(Vector3T<Scalar>::Zero());
  return overlap.prod() / volume;
}

/// One emitted relation with the evidence that produced it.
struct PredicateEvaluation {
  std::string relation;
  double confidence = 0;
  double margin = 0;  // defining geometric slack, meters
  std::vector<NamedValue> measured;
  std::vector<NamedValue> thresholds;
};

/// clamp(margin / (scale (sigma_s + sigma_o)), 0, 1). With zero combined
/// sigma any positive margin is fully confident.
double relation_confidence(double margin, double sigma_subject, double sigma_object, double scale);

/// Relations of subject with respect to object, in priority order:
/// inside, then on_top_of, then above/below, plus lateral relations along the
/// world x (left_of/right_of) and y (in_front_of/behind: smaller y is in
/// front) axes unless inside was emitted.
std::vector<PredicateEvaluation> infer_relations(const Aabb3& subject, double sigma_subject, const Aabb3& object,
                                                 double sigma_object, const PredicateConfig& cfg);

std::vector<PredicateEvaluation> infer_relations(const ObjectNode& subject, const ObjectNode& object,
                                                 const PredicateConfig& cfg);

}  // namespace cogmap
