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

#include "cogmap/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace cogmap {

std::string_view to_string(AxiomKind kind) {
  switch (kind) {
    case AxiomKind::kMutuallyExclusive: return "mutually_exclusive";
    case AxiomKind::kAsymmetric: return "asymmetric";
    case AxiomKind::kIrreflexive: return "irreflexive";
    case AxiomKind::kInverse: return "inverse";
    case AxiomKind::kAcyclic: return "acyclic";
  }
  return "unknown";
}

std::string Axiom::label() const {
  std::string out(to_string(kind));
  out += '(';
  for (std::size_t i = 0; i < relations.size(); ++i) {
    if (i) out += ',';
    out += relations[i];
  }
  out += ')';
  return out;
}

namespace {

std::vector<std::string> tokenize(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  std::string spaced;
  spaced.reserve(line.size() * 2);
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line.compare(i, 2, "->") == 0) {
      spaced += " -> ";
      ++i;
    } else if (line[i] == '<' || line[i] == ':' || line[i] == ',') {
      spaced += ' ';
      spaced += line[i];
      spaced += ' ';
    } else {
      spaced += line[i];
    }
  }
  std::istringstream ss(spaced);
  std::vector<std::string> tokens;
  for (std::string t; ss >> t;) tokens.push_back(std::move(t));
  return tokens;
}

Error parse_error(std::size_t line_no, const std::string& what) {
  return Error(ErrorCode::kParse, "ontology line " + std::to_string(line_no) + ": " + what);
}

std::optional<AxiomKind> axiom_kind(std::string_view word) {
  for (auto kind : {AxiomKind::kMutuallyExclusive, AxiomKind::kAsymmetric, AxiomKind::kIrreflexive,
                    AxiomKind::kInverse, AxiomKind::kAcyclic}) {
    if (to_string(kind) == word) return kind;
  }
  return std::nullopt;
}

std::size_t axiom_arity(AxiomKind kind) {
  return kind == AxiomKind::kMutuallyExclusive || kind == AxiomKind::kInverse ? 2 : 1;
}

// Names separated by commas, e.g. tokens "item , furniture".
std::vector<std::string> name_list(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end,
                                   std::size_t line_no) {
  std::vector<std::string> out;
  bool expect_name = true;
  for (std::size_t i = begin; i < end; ++i) {
    if (tokens[i] == ",") {
      if (expect_name) throw parse_error(line_no, "misplaced ','");
      expect_name = true;
    } else {
      if (!expect_name) throw parse_error(line_no, "missing ',' before '" + tokens[i] + "'");
      out.push_back(tokens[i]);
      expect_name = false;
    }
  }
  if (out.empty() || expect_name) throw parse_error(line_no, "empty or dangling class list");
  return out;
}

}  // namespace

Ontology Ontology::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

Ontology Ontology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open ontology '" + path + "'");
  return parse(in);
}

Ontology Ontology::parse(std::istream& in) {
  Ontology onto;
  std::vector<std::pair<Axiom, std::size_t>> pending_axioms;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& keyword = tokens[0];
    if (keyword == "class") {
      if (tokens.size() == 2) {
        if (!onto.parents_.emplace(tokens[1], std::nullopt).second) {
          throw Error(ErrorCode::kDuplication, "class '" + tokens[1] + "' defined twice");
        }
      } else if (tokens.size() == 4 && tokens[2] == "<") {
        if (!onto.parents_.emplace(tokens[1], tokens[3]).second) {
          throw Error(ErrorCode::kDuplication, "class '" + tokens[1] + "' defined twice");
        }
      } else {
        throw parse_error(line_no, "expected 'class NAME [< PARENT]'");
      }
    } else if (keyword == "relation") {
      auto arrow = std::find(tokens.begin(), tokens.end(), "->");
      if (tokens.size() < 6 || tokens[2] != ":" || arrow == tokens.end()) {
        throw parse_error(line_no, "expected 'relation NAME : DOMAIN -> RANGE'");
      }
      const auto arrow_at = static_cast<std::size_t>(arrow - tokens.begin());
      RelationDefinition def{name_list(tokens, 3, arrow_at, line_no),
                             name_list(tokens, arrow_at + 1, tokens.size(), line_no)};
      if (!onto.relations_.emplace(tokens[1], std::move(def)).second) {
        throw Error(ErrorCode::kDuplication, "relation '" + tokens[1] + "' defined twice");
      }
    } else if (keyword == "axiom") {
      if (tokens.size() < 3) throw parse_error(line_no, "expected 'axiom KIND RELATION...'");
      const auto kind = axiom_kind(tokens[1]);
      if (!kind) throw parse_error(line_no, "unknown axiom kind '" + tokens[1] + "'");
      const std::size_t arity = axiom_arity(*kind);
      if (arity == 1 && tokens.size() == 3 && tokens[2] == "*") {
        for (const auto& [name, def] : onto.relations_) pending_axioms.push_back({Axiom{*kind, {name}}, line_no});
        continue;
      }
      if (tokens.size() != 2 + arity) {
        throw parse_error(line_no, "axiom '" + tokens[1] + "' takes " + std::to_string(arity) + " relation(s)");
      }
      pending_axioms.push_back({Axiom{*kind, {tokens.begin() + 2, tokens.end()}}, line_no});
    } else {
      throw parse_error(line_no, "unknown statement '" + keyword + "'");
    }
  }

  for (const auto& [name, parent] : onto.parents_) {
    if (parent && !onto.parents_.count(*parent)) {
      throw Error(ErrorCode::kReference, "class '" + name + "' has unknown parent '" + *parent + "'");
    }
  }
  for (const auto& [name, parent] : onto.parents_) {
    auto& ancestors = onto.ancestors_[name];
    ancestors.insert(name);
    std::optional<std::string> cursor = parent;
    while (cursor) {
      if (!ancestors.insert(*cursor).second) {
        throw Error(ErrorCode::kCycle, "class hierarchy cycle through '" + name + "'");
      }
      cursor = onto.parents_.find(*cursor)->second;
    }
  }
  for (const auto& [name, def] : onto.relations_) {
    for (const auto* list : {&def.domain, &def.range}) {
      for (const auto& cls : *list) {
        if (!onto.parents_.count(cls)) {
          throw Error(ErrorCode::kReference, "relation '" + name + "' names unknown class '" + cls + "'");
        }
      }
    }
  }
  for (auto& [axiom, line_no] : pending_axioms) {
    for (const auto& rel : axiom.relations) {
      if (!onto.relations_.count(rel)) {
        throw Error(ErrorCode::kReference,
                    "axiom on line " + std::to_string(line_no) + " names undefined relation '" + rel + "'");
      }
    }
    onto.axioms_.push_back(std::move(axiom));
  }
  return onto;
}

bool Ontology::is_subclass(std::string_view child, std::string_view ancestor) const {
  auto it = ancestors_.find(child);
  if (it == ancestors_.end()) throw Error(ErrorCode::kReference, "unknown class '" + std::string(child) + "'");
  if (!has_class(ancestor)) throw Error(ErrorCode::kReference, "unknown class '" + std::string(ancestor) + "'");
  return it->second.count(ancestor) > 0;
}

const RelationDefinition* Ontology::find_relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

void Ontology::require_covers(const std::vector<std::string>& vocabulary) const {
  for (const auto& name : vocabulary) {
    if (!find_relation(name)) {
      throw Error(ErrorCode::kConfiguration, "ontology has no definition for relation '" + name + "'");
    }
  }
}

namespace {

std::string schema_label(std::string_view which, std::string_view relation) {
  return std::string(which) + "(" + std::string(relation) + ")";
}

bool satisfies(const Ontology& onto, const std::string& cls, const std::vector<std::string>& allowed) {
  if (!onto.has_class(cls)) return false;
  return std::any_of(allowed.begin(), allowed.end(), [&](const std::string& a) { return onto.is_subclass(cls, a); });
}

// Tarjan's strongly connected components over node ids; returns component index per node.
std::unordered_map<NodeId, int> strongly_connected(const std::map<NodeId, std::vector<NodeId>>& adjacency) {
  std::unordered_map<NodeId, int> index, low, component;
  std::unordered_map<NodeId, bool> on_stack;
  std::vector<NodeId> stack;
  int counter = 0;
  int components = 0;
  std::function<void(NodeId)> visit = [&](NodeId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    if (auto it = adjacency.find(v); it != adjacency.end()) {
      for (NodeId w : it->second) {
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      NodeId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component[w] = components;
      } while (w != v);
      ++components;
    }
  };
  for (const auto& [v, targets] : adjacency) {
    if (!index.count(v)) visit(v);
  }
  return component;
}

}  // namespace

std::vector<ViolationReport> validate(const SceneGraphSnapshot& snapshot, const Ontology& ontology) {
  std::unordered_map<NodeId, const std::string*> classes;
  for (const auto& n : snapshot.nodes) classes[n.node_id] = &n.fused_class.argmax();

  std::map<EdgeId, std::vector<Finding>> findings;
  std::map<std::pair<NodeId, NodeId>, std::vector<const RelationEdge*>> by_pair;

  for (const auto& e : snapshot.edges) {
    const auto* def = ontology.find_relation(e.relation);
    if (!def) throw Error(ErrorCode::kReference, "edge relation '" + e.relation + "' is not defined");
    auto s = classes.find(e.subject);
    auto o = classes.find(e.object);
    if (s == classes.end() || o == classes.end()) {
      throw Error(ErrorCode::kIntegrity, "edge " + std::to_string(e.edge_id) + " references a missing node");
    }
    if (!satisfies(ontology, *s->second, def->domain)) {
      findings[e.edge_id].push_back({ViolationCode::kSchemaDomain, schema_label("domain", e.relation), {}});
    }
    if (!satisfies(ontology, *o->second, def->range)) {
      findings[e.edge_id].push_back({ViolationCode::kSchemaRange, schema_label("range", e.relation), {}});
    }
    by_pair[{e.subject, e.object}].push_back(&e);
  }

  auto pair_edges = [&](NodeId a, NodeId b, std::string_view relation) {
    std::vector<EdgeId> ids;
    if (auto it = by_pair.find({a, b}); it != by_pair.end()) {
      for (const auto* e : it->second) {
        if (e->relation == relation) ids.push_back(e->edge_id);
      }
    }
    return ids;
  };

  for (const auto& axiom : ontology.axioms()) {
    const std::string label = axiom.label();
    const std::string& r1 = axiom.relations[0];
    switch (axiom.kind) {
      case AxiomKind::kIrreflexive:
        for (const auto& e : snapshot.edges) {
          if (e.relation == r1 && e.subject == e.object) {
            findings[e.edge_id].push_back({ViolationCode::kIrreflexivity, label, {}});
          }
        }
        break;
      case AxiomKind::kMutuallyExclusive: {
        const std::string& r2 = axiom.relations[1];
        if (r1 == r2) break;
        for (const auto& [key, edges] : by_pair) {
          const auto first = pair_edges(key.first, key.second, r1);
          const auto second = pair_edges(key.first, key.second, r2);
          if (first.empty() || second.empty()) continue;
          for (EdgeId id : first) findings[id].push_back({ViolationCode::kExclusion, label, second});
          for (EdgeId id : second) findings[id].push_back({ViolationCode::kExclusion, label, first});
        }
        break;
      }
      case AxiomKind::kAsymmetric:
        for (const auto& e : snapshot.edges) {
          if (e.relation != r1 || e.subject == e.object) continue;
          const auto reverse = pair_edges(e.object, e.subject, r1);
          if (!reverse.empty()) findings[e.edge_id].push_back({ViolationCode::kAsymmetry, label, reverse});
        }
        break;
      case AxiomKind::kInverse: {
        const std::string& r2 = axiom.relations[1];
        for (const auto& e : snapshot.edges) {
          if (e.relation == r1 && pair_edges(e.object, e.subject, r2).empty()) {
            findings[e.edge_id].push_back({ViolationCode::kInverseMissing, label, {}});
          } else if (e.relation == r2 && r1 != r2 && pair_edges(e.object, e.subject, r1).empty()) {
            findings[e.edge_id].push_back({ViolationCode::kInverseMissing, label, {}});
          }
        }
        break;
      }
      case AxiomKind::kAcyclic: {
        std::map<NodeId, std::vector<NodeId>> adjacency;
        for (const auto& e : snapshot.edges) {
          if (e.relation == r1) adjacency[e.subject].push_back(e.object);
        }
        const auto component = strongly_connected(adjacency);
        std::map<int, int> component_size;
        for (const auto& [node, c] : component) ++component_size[c];
        std::map<int, std::vector<EdgeId>> cyclic;
        for (const auto& e : snapshot.edges) {
          if (e.relation != r1) continue;
          const int cs = component.at(e.subject);
          if (cs == component.at(e.object) && (e.subject == e.object || component_size[cs] > 1)) {
            cyclic[cs].push_back(e.edge_id);
          }
        }
        for (const auto& [c, ids] : cyclic) {
          for (EdgeId id : ids) {
            std::vector<EdgeId> others;
            std::copy_if(ids.begin(), ids.end(), std::back_inserter(others), [&](EdgeId o) { return o != id; });
            findings[id].push_back({ViolationCode::kCycle, label, std::move(others)});
          }
        }
        break;
      }
    }
  }

  std::vector<ViolationReport> reports;
  reports.reserve(findings.size());
  for (auto& [edge_id, list] : findings) {
    ViolationReport report;
    report.edge_id = edge_id;
    for (const auto& f : list) {
      report.codes.push_back(f.code);
      report.counterpart_edge_ids.insert(report.counterpart_edge_ids.end(), f.counterpart_edge_ids.begin(),
                                         f.counterpart_edge_ids.end());
    }
    std::sort(report.codes.begin(), report.codes.end());
    report.codes.erase(std::unique(report.codes.begin(), report.codes.end()), report.codes.end());
    auto& cp = report.counterpart_edge_ids;
    std::sort(cp.begin(), cp.end());
    cp.erase(std::unique(cp.begin(), cp.end()), cp.end());
    report.findings = std::move(list);
    reports.push_back(std::move(report));
  }
  return reports;
}

double violation_rate(const SceneGraphSnapshot& snapshot, const std::vector<ViolationReport>& reports) {
  if (snapshot.edges.empty()) return 0.0;
  std::set<EdgeId> flagged;
  for (const auto& r : reports) {
    if (!r.codes.empty()) flagged.insert(r.edge_id);
  }
  return static_cast<double>(flagged.size()) / static_cast<double>(snapshot.edges.size());
}

std::vector<OntologyCheck> ontology_checks(const RelationEdge& edge, const Ontology& ontology,
                                           const ViolationReport* report) {
  std::vector<std::string> labels{schema_label("domain", edge.relation), schema_label("range", edge.relation)};
  for (const auto& axiom : ontology.axioms()) {
    if (std::find(axiom.relations.begin(), axiom.relations.end(), edge.relation) != axiom.relations.end()) {
      labels.push_back(axiom.label());
    }
  }
  std::vector<OntologyCheck> checks;
  checks.reserve(labels.size());
  for (auto& label : labels) {
    OntologyCheck check{std::move(label), true, {}};
    if (report) {
      for (const auto& f : report->findings) {
        if (f.check != check.name) continue;
        check.passed = false;
        check.counterpart_edge_ids.insert(check.counterpart_edge_ids.end(), f.counterpart_edge_ids.begin(),
                                          f.counterpart_edge_ids.end());
      }
      std::sort(check.counterpart_edge_ids.begin(), check.counterpart_edge_ids.end());
    }
    checks.push_back(std::move(check));
  }
  return checks;
}

void apply_flags(SceneGraphSnapshot& snapshot, const std::vector<ViolationReport>& reports) {
  for (const auto& r : reports) {
    auto it = std::lower_bound(snapshot.edges.begin(), snapshot.edges.end(), r.edge_id,
                               [](const RelationEdge& e, EdgeId v) { return e.edge_id < v; });
    if (it != snapshot.edges.end() && it->edge_id == r.edge_id) it->violation_flags = r.codes;
  }
}

const std::string& Ontology::standard_text() {
  static const std::string text = R"onto(# Household tabletop ontology.

class object
class furniture < object
class container < object
class item < object
class table < furniture
class desk < furniture
class shelf < furniture
class chair < furniture
class cabinet < container
class drawer < container
class box < container
class cup < item
class bottle < item
class book < item
class laptop < item
class monitor < item
class keyboard < item

relation left_of : object -> object
relation right_of : object -> object
relation in_front_of : object -> object
relation behind : object -> object
relation above : object -> object
relation below : object -> object
relation on_top_of : item, container -> furniture, container
relation inside : item -> container

axiom inverse left_of right_of
axiom inverse in_front_of behind
axiom inverse above below
axiom mutually_exclusive above below
axiom mutually_exclusive left_of right_of
axiom mutually_exclusive in_front_of behind
axiom mutually_exclusive on_top_of inside
axiom asymmetric inside
axiom asymmetric on_top_of
axiom acyclic inside
axiom acyclic on_top_of
axiom irreflexive *
)onto";
  return text;
}

Ontology Ontology::standard() { return parse(standard_text()); }

}  // namespace cogmap
