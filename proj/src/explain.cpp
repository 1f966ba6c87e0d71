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

#include "cogmap/explain.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace cogmap {
namespace {

const ObjectNode& require_node(const SceneGraphSnapshot& snapshot, NodeId id) {
  const auto* node = snapshot.find_node(id);
  if (!node) throw Error(ErrorCode::kIntegrity, "edge references missing node " + std::to_string(id));
  return *node;
}

std::string num(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out = buf;
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string class_label(const ObjectNode& node) {
  std::string name = node.fused_class.empty() ? std::string("object") : node.fused_class.argmax();
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

double require_value(const NamedValue* value, const ReasoningTrace& trace, std::string_view name) {
  if (!value) {
    throw Error(ErrorCode::kIncompleteEvidence,
                "trace " + std::to_string(trace.trace_id) + " lacks '" + std::string(name) + "'");
  }
  return value->value;
}

struct Evidence {
  const ReasoningTrace& trace;
  double measured(std::string_view name) const { return require_value(trace.find_measured(name), trace, name); }
  double threshold(std::string_view name) const { return require_value(trace.find_threshold(name), trace, name); }
};

std::string lateral_clause(const Evidence& ev, const std::string& object, std::string_view own_face,
                          std::string_view direction, std::string_view other_face) {
  return "its " + std::string(own_face) + " lies " + num(ev.measured("separation"), 3) + " m " +
         std::string(direction) + " the " + object + "'s " + std::string(other_face) + " with centroids " +
         num(ev.measured("centroid_distance"), 3) + " m apart (pairing limit " +
         num(ev.threshold("lateral_pairing_max"), 3) + " m)";
}

std::string evidence_clause(const ReasoningTrace& trace, const std::string& object) {
  const Evidence ev{trace};
  const std::string& p = trace.predicate;
  if (p == relation::kOnTopOf) {
    std::string clause = "its lower face rests within " + num(ev.measured("contact_distance"), 3) + " m of the " +
                         object + "'s surface (tolerance " + num(ev.threshold("contact_eps"), 3) + " m)";
    if (ev.measured("centroid_in_footprint") > 0.5) clause += " and its centroid projects within the " + object + "'s area";
    return clause;
  }
  if (p == relation::kInside) {
    return num(ev.measured("containment"), 2) + " of its volume lies within the " + object +
           "'s interior (threshold " + num(ev.threshold("containment_min"), 2) + ")";
  }
  if (p == relation::kAbove) {
    return "its lower face clears the " + object + "'s top by " + num(ev.measured("clearance"), 3) +
           " m (contact tolerance " + num(ev.threshold("contact_eps"), 3) + " m) and " +
           num(ev.measured("footprint_overlap"), 2) + " of its footprint lies over the " + object + " (minimum " +
           num(ev.threshold("footprint_overlap_min"), 2) + ")";
  }
  if (p == relation::kBelow) {
    return "its top lies " + num(ev.measured("clearance"), 3) + " m under the " + object +
           "'s lower face (contact tolerance " + num(ev.threshold("contact_eps"), 3) + " m) and " +
           num(ev.measured("footprint_overlap"), 2) + " of the " + object + "'s footprint lies over it (minimum " +
           num(ev.threshold("footprint_overlap_min"), 2) + ")";
  }
  if (p == relation::kLeftOf) return lateral_clause(ev, object, "right side", "left of", "left side");
  if (p == relation::kRightOf) return lateral_clause(ev, object, "left side", "right of", "right side");
  if (p == relation::kInFrontOf) return lateral_clause(ev, object, "back", "in front of", "front");
  if (p == relation::kBehind) return lateral_clause(ev, object, "front", "behind", "back");
  std::string clause = "its geometric margin is " + num(trace.margin, 3) + " m";
  return clause;
}

std::string conflict_clause(const OntologyCheck& check) {
  if (check.counterpart_edge_ids.empty()) return " Flagged: " + check.name + " failed.";
  std::string ids;
  for (std::size_t i = 0; i < check.counterpart_edge_ids.size(); ++i) {
    if (i) ids += ", ";
    ids += std::to_string(check.counterpart_edge_ids[i]);
  }
  return " Flagged: " + check.name + " conflicts with edge" +
         (check.counterpart_edge_ids.size() > 1 ? "s " : " ") + ids + ".";
}

}  // namespace

FrameProvenance provenance_of(const RelationEdge& edge, const SceneGraphSnapshot& snapshot) {
  const auto& s = require_node(snapshot, edge.subject);
  const auto& o = require_node(snapshot, edge.object);
  return {snapshot.pose_stamp, s.last_observation, o.last_observation, s.position_sigma, o.position_sigma};
}

ReasoningTrace capture_trace(const RelationEdge& edge, const PredicateEvaluation* evaluation,
                             std::vector<OntologyCheck> checks, const FrameProvenance& provenance) {
  if (!evaluation) {
    throw Error(ErrorCode::kIncompleteEvidence, "edge " + std::to_string(edge.edge_id) + " has no predicate record");
  }
  if (evaluation->relation != edge.relation) {
    throw Error(ErrorCode::kIncompleteEvidence, "edge " + std::to_string(edge.edge_id) + " is '" + edge.relation +
                                                    "' but its predicate record is '" + evaluation->relation + "'");
  }
  ReasoningTrace t;
  t.trace_id = edge.trace_id;
  t.edge_id = edge.edge_id;
  t.predicate = evaluation->relation;
  t.measured = evaluation->measured;
  t.thresholds = evaluation->thresholds;
  t.observations = {provenance.subject, provenance.object};
  t.pose_stamp = provenance.pose_stamp;
  t.ontology_checks = std::move(checks);
  t.sigma_subject = provenance.sigma_subject;
  t.sigma_object = provenance.sigma_object;
  t.margin = evaluation->margin;
  return t;
}

std::vector<ReasoningTrace> capture_traces(const SceneGraphSnapshot& snapshot,
                                           const std::vector<PredicateEvaluation>& evaluations,
                                           const Ontology& ontology, const std::vector<ViolationReport>& reports) {
  std::map<EdgeId, const ViolationReport*> by_edge;
  for (const auto& r : reports) by_edge[r.edge_id] = &r;
  std::vector<ReasoningTrace> traces;
  traces.reserve(snapshot.edges.size());
  for (std::size_t i = 0; i < snapshot.edges.size(); ++i) {
    const auto& edge = snapshot.edges[i];
    const auto it = by_edge.find(edge.edge_id);
    const ViolationReport* report = it == by_edge.end() ? nullptr : it->second;
    traces.push_back(capture_trace(edge, i < evaluations.size() ? &evaluations[i] : nullptr,
                                   ontology_checks(edge, ontology, report), provenance_of(edge, snapshot)));
  }
  return traces;
}

std::string relation_phrase(std::string_view relation) {
  static const std::map<std::string, std::string, std::less<>> kPhrases = {
      {"on_top_of", "on top of"}, {"inside", "inside"},        {"above", "above"},
      {"below", "below"},         {"left_of", "to the left of"}, {"right_of", "to the right of"},
      {"in_front_of", "in front of"}, {"behind", "behind"},
  };
  if (auto it = kPhrases.find(relation); it != kPhrases.end()) return it->second;
  std::string out(relation);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

ExplanationText render_explanation(const ReasoningTrace& trace, const SceneGraphSnapshot& snapshot) {
  const auto* edge = snapshot.find_edge(trace.edge_id);
  if (!edge) throw Error(ErrorCode::kIntegrity, "trace " + std::to_string(trace.trace_id) + " names missing edge");
  if (edge->trace_id != trace.trace_id) {
    throw Error(ErrorCode::kIntegrity, "edge " + std::to_string(edge->edge_id) + " points at another trace");
  }
  const std::string subject = class_label(require_node(snapshot, edge->subject));
  const std::string object = class_label(require_node(snapshot, edge->object));
  std::string sentence = "The " + subject + " is " + relation_phrase(edge->relation) + " the " + object + " because " +
                         evidence_clause(trace, object) + ".";
  for (const auto& check : trace.ontology_checks) {
    if (!check.passed) sentence += conflict_clause(check);
  }
  return {std::move(sentence), trace.trace_id};
}

}  // namespace cogmap
