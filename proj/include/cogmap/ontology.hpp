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

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cogmap/graph_types.hpp"

namespace cogmap {

enum class AxiomKind {
  kMutuallyExclusive,  // r1(A,B) and r2(A,B) cannot both hold
  kAsymmetric,         // r(A,B) excludes r(B,A)
  kIrreflexive,        // r(A,A) never holds
  kInverse,            // r1(A,B) holds iff r2(B,A) holds
  kAcyclic,            // r has no directed cycles
};

std::string_view to_string(AxiomKind kind);

struct Axiom {
  AxiomKind kind;
  std::vector<std::string> relations;  // two for binary kinds, one otherwise

  /// "mutually_exclusive(above,below)"
  std::string label() const;
};

struct RelationDefinition {
  std::vector<std::string> domain;
  std::vector<std::string> range;
};

/// Class hierarchy, relation signatures and axioms. Immutable once built.
///
/// Text format, one statement per line, '#' starts a comment:
///
///     class object
///     class cup < item
///     relation inside : item -> container
///     relation on_top_of : item, furniture -> furniture
///     axiom mutually_exclusive above below
///     axiom asymmetric inside
///     axiom irreflexive *
///
/// `*` in an axiom expands to every relation defined so far.
class Ontology {
 public:
  static Ontology parse(std::istream& in);
  static Ontology parse(std::string_view text);
  static Ontology load(const std::string& path);
  /// Built-in household tabletop ontology; identical to data/ontology/default.onto.
  static const std::string& standard_text();
  static Ontology standard();

  bool has_class(std::string_view name) const { return parents_.count(name) > 0; }
  /// Reflexive, transitive. Unknown classes raise kReference.
  bool is_subclass(std::string_view child, std::string_view ancestor) const;
  const RelationDefinition* find_relation(std::string_view name) const;
  const std::vector<Axiom>& axioms() const { return axioms_; }
  const std::map<std::string, std::optional<std::string>, std::less<>>& classes() const { return parents_; }
  const std::map<std::string, RelationDefinition, std::less<>>& relations() const { return relations_; }

  /// Throws kConfiguration naming the first relation without a definition.
  void require_covers(const std::vector<std::string>& vocabulary) const;

 private:
  std::map<std::string, std::optional<std::string>, std::less<>> parents_;
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> ancestors_;
  std::map<std::string, RelationDefinition, std::less<>> relations_;
  std::vector<Axiom> axioms_;
};

/// One failed check on one edge.
struct Finding {
  ViolationCode code;
  std::string check;  // label of the failing schema check or axiom
  std::vector<EdgeId> counterpart_edge_ids;
};

struct ViolationReport {
  EdgeId edge_id = 0;
  std::vector<ViolationCode> codes;  // sorted, unique
  std::vector<EdgeId> counterpart_edge_ids;  // sorted, unique
  std::vector<Finding> findings;
};

/// Checks every edge against the schema and axioms. Domain and range use the
/// argmax of each endpoint's fused class; classes missing from the ontology
/// satisfy no schema. Contradicting edges are all reported. Returns reports
/// sorted by edge id, only for edges with at least one finding.
std::vector<ViolationReport> validate(const SceneGraphSnapshot& snapshot, const Ontology& ontology);

/// Distinct flagged edges over total edges; 0 for an edge-free snapshot.
double violation_rate(const SceneGraphSnapshot& snapshot, const std::vector<ViolationReport>& reports);

/// Every schema check and axiom that applies to `edge`, each marked passed or
/// failed according to `report` (null when the edge is clean).
std::vector<OntologyCheck> ontology_checks(const RelationEdge& edge, const Ontology& ontology,
                                           const ViolationReport* report);

/// Writes each report's codes into the matching edge's violation_flags.
void apply_flags(SceneGraphSnapshot& snapshot, const std::vector<ViolationReport>& reports);

}  // namespace cogmap
