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

#include "cogmap/relations.hpp"

#include <algorithm>
#include <set>

namespace cogmap {

RelationVocabulary RelationVocabulary::standard() {
  return RelationVocabulary({std::string(relation::kLeftOf), std::string(relation::kRightOf),
                             std::string(relation::kInFrontOf), std::string(relation::kBehind),
                             std::string(relation::kAbove), std::string(relation::kBelow),
                             std::string(relation::kOnTopOf), std::string(relation::kInside)});
}

RelationVocabulary::RelationVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) {
    throw Error(ErrorCode::kConfiguration, "relation vocabulary is empty");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || !seen.insert(n).second) {
      throw Error(ErrorCode::kConfiguration, "relation vocabulary has an empty or repeated name '" + n + "'");
    }
  }
}

bool RelationVocabulary::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void PredicateConfig::validate() const {
  if (!(contact_eps > 0) || !(lateral_pairing_max > 0) || !(confidence_scale > 0)) {
    throw Error(ErrorCode::kConfiguration, "predicate distances and confidence_scale must be positive");
  }
  for (double f : {footprint_overlap_min, containment_min}) {
    if (!(f > 0 && f <= 1)) {
      throw Error(ErrorCode::kConfiguration, "predicate fractions must lie in (0,1]");
    }
  }
}

std::vector<NamedValue> PredicateConfig::as_named_values() const {
  return {{"contact_eps", contact_eps, "m"},
          {"footprint_overlap_min", footprint_overlap_min, "fraction"},
          {"containment_min", containment_min, "fraction"},
          {"lateral_pairing_max", lateral_pairing_max, "m"},
          {"confidence_scale", confidence_scale, ""}};
}

double relation_confidence(double margin, double sigma_subject, double sigma_object, double scale) {
  const double denom = scale * (sigma_subject + sigma_object);
  if (!(denom > 0)) return margin > 0 ? 1.0 : 0.0;
  return std::clamp(margin / denom, 0.0, 1.0);
}

namespace {

bool centroid_in_footprint(const Aabb3& inner, const Aabb3& outer) {
  const Vector3 c = inner.center();
  return c.x() >= outer.min().x() && c.x() <= outer.max().x() && c.y() >= outer.min().y() &&
         c.y() <= outer.max().y();
}

class Emitter {
 public:
  Emitter(double sigma_s, double sigma_o, const PredicateConfig& cfg, std::vector<PredicateEvaluation>& out)
      : sigma_s_(sigma_s), sigma_o_(sigma_o), cfg_(cfg), out_(out) {}

  void emit(std::string_view relation, double margin, std::vector<NamedValue> measured,
            std::vector<NamedValue> thresholds) {
    thresholds.push_back({"confidence_scale", cfg_.confidence_scale, ""});
    out_.push_back({std::string(relation), relation_confidence(margin, sigma_s_, sigma_o_, cfg_.confidence_scale),
                    margin, std::move(measured), std::move(thresholds)});
  }

 private:
  double sigma_s_;
  double sigma_o_;
  const PredicateConfig& cfg_;
  std::vector<PredicateEvaluation>& out_;
};

}  // namespace

std::vector<PredicateEvaluation> infer_relations(const Aabb3& s, double sigma_s, const Aabb3& o, double sigma_o,
                                                 const PredicateConfig& cfg) {
  std::vector<PredicateEvaluation> out;
  Emitter emitter(sigma_s, sigma_o, cfg, out);
  const NamedValue eps{"contact_eps", cfg.contact_eps, "m"};

  const double containment = containment_ratio(s, o);
  if (containment >= cfg.containment_min) {
    // Smallest inset of s within o over all six faces; negative if s protrudes.
    const double inset = std::min((s.min() - o.min()).minCoeff(), (o.max() - s.max()).minCoeff());
    emitter.emit(relation::kInside, inset,
                 {{"containment", containment, "fraction"}, {"min_inset", inset, "m"}},
                 {{"containment_min", cfg.containment_min, "fraction"}});
    return out;
  }

  const double gap_up = s.min().z() - o.max().z();    // s resting on / hovering over o
  const double gap_down = o.min().z() - s.max().z();  // s hanging under o
  if (std::abs(gap_up) <= cfg.contact_eps && centroid_in_footprint(s, o)) {
    emitter.emit(relation::kOnTopOf, cfg.contact_eps - std::abs(gap_up),
                 {{"gap", gap_up, "m"}, {"contact_distance", std::abs(gap_up), "m"},
                  {"centroid_in_footprint", 1.0, "bool"}},
                 {eps});
  } else if (gap_up > cfg.contact_eps) {
    const double overlap = footprint_overlap(s, o);
    if (overlap >= cfg.footprint_overlap_min) {
      emitter.emit(relation::kAbove, gap_up - cfg.contact_eps,
                   {{"clearance", gap_up, "m"}, {"footprint_overlap", overlap, "fraction"}},
                   {eps, {"footprint_overlap_min", cfg.footprint_overlap_min, "fraction"}});
    }
  } else if (gap_down > cfg.contact_eps) {
    // Overlap is always measured on the upper box's footprint so above/below stay mirror images.
    const double overlap = footprint_overlap(o, s);
    if (overlap >= cfg.footprint_overlap_min) {
      emitter.emit(relation::kBelow, gap_down - cfg.contact_eps,
                   {{"clearance", gap_down, "m"}, {"footprint_overlap", overlap, "fraction"}},
                   {eps, {"footprint_overlap_min", cfg.footprint_overlap_min, "fraction"}});
    }
  }

  const double distance = (s.center() - o.center()).norm();
  if (distance <= cfg.lateral_pairing_max) {
    const NamedValue dist{"centroid_distance", distance, "m"};
    const NamedValue pairing{"lateral_pairing_max", cfg.lateral_pairing_max, "m"};
    auto lateral = [&](std::string_view rel, double separation) {
      emitter.emit(rel, separation, {{"separation", separation, "m"}, dist}, {pairing});
    };
    if (s.max().x() < o.min().x()) lateral(relation::kLeftOf, o.min().x() - s.max().x());
    if (s.min().x() > o.max().x()) lateral(relation::kRightOf, s.min().x() - o.max().x());
    if (s.max().y() < o.min().y()) lateral(relation::kInFrontOf, o.min().y() - s.max().y());
    if (s.min().y() > o.max().y()) lateral(relation::kBehind, s.min().y() - o.max().y());
  }
  return out;
}

std::vector<PredicateEvaluation> infer_relations(const ObjectNode& subject, const ObjectNode& object,
                                                 const PredicateConfig& cfg) {
  return infer_relations(subject.world_box, subject.position_sigma, object.world_box, object.position_sigma, cfg);
}

}  // namespace cogmap
