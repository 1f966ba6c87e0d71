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
#include <vector>

#include "cogmap/graph_types.hpp"
#include "cogmap/ontology.hpp"
#include "cogmap/relations.hpp"

namespace cogmap {

/// Where an edge's evidence came from.
struct FrameProvenance {
  Timestamp pose_stamp;
  ObservationRef subject;
  ObservationRef object;
  double sigma_subject = 0;
  double sigma_object = 0;
};

/// Looks up both endpoints of `edge` in `snapshot` (kIntegrity if missing).
FrameProvenance provenance_of(const RelationEdge& edge, const SceneGraphSnapshot& snapshot);

/// Freezes the evidence behind `edge`. Throws kIncompleteEvidence when the
/// predicate record is missing or belongs to another relation.
ReasoningTrace capture_trace(const RelationEdge& edge, const PredicateEvaluation* evaluation,
                             std::vector<OntologyCheck> checks, const FrameProvenance& provenance);

/// One trace per edge, in edge order. `evaluations` runs parallel to
/// snapshot.edges; `reports` is the output of validate() for the snapshot.
std::vector<ReasoningTrace> capture_traces(const SceneGraphSnapshot& snapshot,
                                           const std::vector<PredicateEvaluation>& evaluations,
                                           const Ontology& ontology, const std::vector<ViolationReport>& reports);

struct ExplanationText {
  std::string sentence;
  TraceId trace_id = 0;
};

/// Relation name to the phrase used between subject and object, e.g.
/// on_top_of -> "on top of". Unknown names fall back to underscores as spaces.
std::string relation_phrase(std::string_view relation);

/// "The {subject} is {phrase} the {object} because {evidence}." with a
/// conflict clause per failed ontology check. Class names are the argmax of
/// each node's fused class. Numbers are printed at the precision shown and
/// all come from the trace. Throws kIntegrity on dangling references.
ExplanationText render_explanation(const ReasoningTrace& trace, const SceneGraphSnapshot& snapshot);

}  // namespace cogmap
