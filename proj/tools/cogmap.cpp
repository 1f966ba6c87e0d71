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

// cogmap command-line driver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cogmap/analytics.hpp"
#include "cogmap/explain.hpp"
#include "cogmap/ontology.hpp"
#include "cogmap/records.hpp"
#include "cogmap/runner.hpp"
#include "cogmap/text_format.hpp"

namespace {

using namespace cogmap;

constexpr int kExitUnexpected = 70;

struct SourceFlags {
  std::string config;
  std::optional<std::string> poses, observations, synthetic, ontology, out;
  std::optional<double> fps;
  std::optional<std::string> fps_list;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

void add_source_flags(CLI::App& cmd, SourceFlags& f) {
  cmd.add_option("--config", f.config, "JSON run configuration");
  cmd.add_option("--poses", f.poses, "trajectory file (timestamp tx ty tz qx qy qz qw)");
  cmd.add_option("--observations", f.observations, "tracked observations (JSON lines)");
  cmd.add_option("--synthetic", f.synthetic, "synthetic scene spec (JSON)");
  cmd.add_option("--ontology", f.ontology, "ontology file; built-in default if omitted");
  cmd.add_option("--fps", f.fps, "target frame rate");
  cmd.add_option("--fps-list", f.fps_list, "comma-separated frame rates for sweep");
  cmd.add_option("--trials", f.trials, "trials per frame rate");
  cmd.add_option("--seed", f.seed, "base seed");
  cmd.add_option("--out", f.out, "output directory");
}

RunConfig make_config_unstaged(const SourceFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : RunConfig::load(f.config);
  if (f.poses || f.observations || f.synthetic) {
    c.poses = f.poses.value_or("");
    c.observations = f.observations.value_or("");
    c.synthetic = f.synthetic.value_or("");
  }
  if (f.ontology) c.ontology = *f.ontology;
  if (f.out) c.out = *f.out;
  if (f.fps) c.fps = *f.fps;
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.seed = *f.seed;
  if (f.fps_list) {
    c.fps_list.clear();
    for (const auto& field : split(*f.fps_list, ',')) {
      const auto text = std::string(trim(field));
      try {
        std::size_t used = 0;
        c.fps_list.push_back(std::stod(text, &used));
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfiguration, "bad --fps-list entry '" + text + "'");
      }
    }
  }
  return c;
}

RunConfig make_config(const SourceFlags& f) {
  try {
    return make_config_unstaged(f);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage 'config': ") + e.detail());
  }
}

void print_metrics(const RunMetrics& m) {
  if (m.fps > 0) {
    std::printf("fps=%s ticks=%zu\n", format_shortest(m.fps).c_str(), m.ticks);
  } else {
    std::printf("ticks=%zu\n", m.ticks);
  }
  std::printf("srqi=%.6f violation_rate=%.6f entropy=%.6f stability=%.6f\n", m.srqi, m.violation_rate, m.entropy,
              m.stability);
  std::printf("node_count=%.3f edge_count=%.3f avg_degree=%.3f clustering=%.6f\n", m.node_count, m.edge_count,
              m.avg_degree, m.clustering_coefficient);
}

int cmd_run(const SourceFlags& f) {
  const auto config = make_config(f);
  const auto result = run(config);
  print_metrics(result.metrics);
  std::printf("drops: stale_pose=%llu subsample=%llu\n",
              static_cast<unsigned long long>(result.drops.stale_pose_drops),
              static_cast<unsigned long long>(result.drops.subsample_rejections));
  if (!config.out.empty()) std::printf("artifacts written to %s\n", config.out.c_str());
  return 0;
}

int cmd_sweep(const SourceFlags& f) {
  const auto config = make_config(f);
  const auto report = sweep(config);
  std::printf("%8s %10s %10s %10s %10s\n", "FPS", "SRQI", "violation", "entropy", "stability");
  for (const auto& a : report.aggregates) {
    std::printf("%8s %10.6f %10.6f %10.6f %10.6f\n", format_shortest(a.fps).c_str(), a.mean.srqi,
                a.mean.violation_rate, a.mean.entropy, a.mean.stability);
  }
  for (const auto& p : report.pairwise) {
    std::printf("kruskal-wallis %s vs %s: H=%.4f p=%.6g\n", format_shortest(p.fps_a).c_str(),
                format_shortest(p.fps_b).c_str(), p.result.h, p.result.p_value);
  }
  for (const auto& n : report.notes) std::printf("note: %s\n", n.c_str());
  if (!config.out.empty()) {
    write_sweep_artifacts(report, config.out);
    std::printf("artifacts written to %s\n", config.out.c_str());
  }
  for (const auto& failure : report.failures) std::fprintf(stderr, "cogmap: run failed: %s\n", failure.c_str());
  return report.failures.empty() ? 0 : static_cast<int>(ErrorCode::kConfiguration);
}

int cmd_synth(const SourceFlags& f) {
  if (!f.synthetic) throw Error(ErrorCode::kConfiguration, "synth needs --synthetic");
  if (!f.out) throw Error(ErrorCode::kConfiguration, "synth needs --out");
  RunConfig c = make_config(f);
  const auto inputs = load_inputs(c, c.seed);
  std::filesystem::create_directories(*f.out);
  const auto dir = std::filesystem::path(*f.out);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::kIo, "stage 'output': cannot write " + (dir / name).string());
    return out;
  };
  auto poses = open("poses.txt");
  serialize_trajectory(inputs.poses, poses);
  auto obs = open("observations.jsonl");
  serialize_observations(inputs.observations, obs);
  auto truth = open("ground_truth.jsonl");
  write_ground_truth(inputs.ground_truth, truth);
  std::printf("%zu frames, %zu observations written to %s\n", inputs.observations.frames.size(),
              inputs.observations.observation_count(), f.out->c_str());
  return 0;
}

std::vector<SceneGraphSnapshot> read_log(const std::string& path) {
  try {
    return load_snapshot_log(path);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage 'load log': ") + e.detail());
  }
}

int cmd_stats(const std::string& log) {
  const auto snapshots = read_log(log);
  std::vector<SnapshotMetrics> ticks;
  std::size_t traces = 0, edges = 0;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& s = snapshots[i];
    std::size_t flagged = 0;
    for (const auto& e : s.edges) flagged += e.violation_flags.empty() ? 0 : 1;
    const double rate = s.edges.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(s.edges.size());
    ticks.push_back(snapshot_metrics(s, rate, i ? &snapshots[i - 1] : nullptr));
    traces += s.traces.size();
    edges += s.edges.size();
  }
  const auto m = aggregate_run(ticks, SrqiWeights{}, RelationVocabulary::standard().size(), 0.0, 0);
  std::printf("snapshots=%zu\n", snapshots.size());
  print_metrics(m);
  std::printf("trace_coverage=%s (%zu traces / %zu edges)\n",
              edges ? format_fixed(static_cast<double>(traces) / static_cast<double>(edges), 6).c_str() : "NA", traces,
              edges);
  return 0;
}

void print_snapshot(const SceneGraphSnapshot& s) {
  std::printf("snapshot %s (pose %s): %zu nodes, %zu edges\n", s.stamp.to_string().c_str(),
              s.pose_stamp.to_string().c_str(), s.nodes.size(), s.edges.size());
  for (const auto& n : s.nodes) {
    std::printf("  node %lld track=%lld class=%s obs=%lld centroid=(%.3f, %.3f, %.3f)\n",
                static_cast<long long>(n.node_id), static_cast<long long>(n.track_id),
                n.fused_class.empty() ? "?" : n.fused_class.argmax().c_str(), static_cast<long long>(n.obs_count),
                n.centroid.x(), n.centroid.y(), n.centroid.z());
  }
  for (const auto& e : s.edges) {
    std::string flags;
    for (auto c : e.violation_flags) flags += " " + std::string(to_string(c));
    std::printf("  edge %lld: %lld %s %lld conf=%.3f%s\n", static_cast<long long>(e.edge_id),
                static_cast<long long>(e.subject), e.relation.c_str(), static_cast<long long>(e.object), e.confidence,
                flags.c_str());
  }
}

const SceneGraphSnapshot& snapshot_at(const std::vector<SceneGraphSnapshot>& snaps, const std::string& at) {
  const Timestamp t = Timestamp::parse(at);
  const SceneGraphSnapshot* hit = nullptr;
  for (const auto& s : snaps) {
    if (t < s.stamp) break;
    hit = &s;
  }
  if (!hit) throw Error(ErrorCode::kNotFound, "stage 'query': no snapshot at or before " + t.to_string());
  return *hit;
}

std::pair<const SceneGraphSnapshot*, const RelationEdge*> find_edge(const std::vector<SceneGraphSnapshot>& snaps,
                                                                    EdgeId id) {
  for (const auto& s : snaps) {
    if (const auto* e = s.find_edge(id)) return {&s, e};
  }
  throw Error(ErrorCode::kNotFound, "stage 'query': no edge " + std::to_string(id) + " in the log");
}

void print_explanation(const SceneGraphSnapshot& s, const RelationEdge& e) {
  const auto* trace = s.find_trace(e.trace_id);
  if (!trace) throw Error(ErrorCode::kIntegrity, "stage 'explain': edge " + std::to_string(e.edge_id) + " has no trace");
  std::printf("[%s] edge %lld: %s\n", s.stamp.to_string().c_str(), static_cast<long long>(e.edge_id),
              render_explanation(*trace, s).sentence.c_str());
}

int cmd_query(const std::string& log, const std::optional<std::string>& at, const std::optional<NodeId>& node,
              const std::optional<EdgeId>& edge) {
  const auto snaps = read_log(log);
  if (at) print_snapshot(snapshot_at(snaps, *at));
  if (node) {
    std::size_t hits = 0;
    for (const auto& s : snaps) {
      if (const auto* n = s.find_node(*node)) {
        ++hits;
        std::printf("%s node %lld class=%s obs=%lld centroid=(%.3f, %.3f, %.3f)\n", s.stamp.to_string().c_str(),
                    static_cast<long long>(n->node_id), n->fused_class.empty() ? "?" : n->fused_class.argmax().c_str(),
                    static_cast<long long>(n->obs_count), n->centroid.x(), n->centroid.y(), n->centroid.z());
      }
    }
    if (!hits) throw Error(ErrorCode::kNotFound, "stage 'query': no node " + std::to_string(*node) + " in the log");
  }
  if (edge) {
    const auto [s, e] = find_edge(snaps, *edge);
    print_explanation(*s, *e);
  }
  if (!at && !node && !edge) throw Error(ErrorCode::kConfiguration, "query needs --at, --node or --edge");
  return 0;
}

int cmd_explain(const std::string& log, const std::optional<std::string>& at, const std::optional<EdgeId>& edge) {
  const auto snaps = read_log(log);
  if (edge) {
    const auto [s, e] = find_edge(snaps, *edge);
    print_explanation(*s, *e);
    return 0;
  }
  if (snaps.empty()) throw Error(ErrorCode::kNotFound, "stage 'explain': the log is empty");
  const auto& s = at ? snapshot_at(snaps, *at) : snaps.back();
  for (const auto& e : s.edges) print_explanation(s, e);
  return 0;
}

int cmd_validate(const std::string& ontology_path, const std::optional<std::string>& log) {
  const Ontology onto = [&] {
    try {
      return ontology_path.empty() ? Ontology::standard() : Ontology::load(ontology_path);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("stage 'ontology': ") + e.detail());
    }
  }();
  std::printf("ontology ok: %zu classes, %zu relations, %zu axioms\n", onto.classes().size(), onto.relations().size(),
              onto.axioms().size());
  if (!log) return 0;
  const auto snaps = read_log(*log);
  std::size_t flagged = 0, edges = 0;
  for (const auto& s : snaps) {
    const auto reports = validate(s, onto);
    flagged += reports.size();
    edges += s.edges.size();
    for (const auto& r : reports) {
      for (const auto& finding : r.findings) {
        std::printf("%s edge %lld: %s (%s)\n", s.stamp.to_string().c_str(), static_cast<long long>(r.edge_id),
                    std::string(to_string(finding.code)).c_str(), finding.check.c_str());
      }
    }
  }
  std::printf("%zu of %zu edges flagged across %zu snapshots\n", flagged, edges, snaps.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cogmap: replay-driven semantic scene graph mapping"};
  app.require_subcommand(1);

  SourceFlags run_flags, sweep_flags, synth_flags;
  add_source_flags(*app.add_subcommand("run", "map one replay at one frame rate"), run_flags);
  add_source_flags(*app.add_subcommand("sweep", "frame-rate sweep with trials"), sweep_flags);
  add_source_flags(*app.add_subcommand("synth", "generate a synthetic replay"), synth_flags);

  std::string log;
  std::optional<std::string> at;
  std::optional<NodeId> node;
  std::optional<EdgeId> edge;
  auto* stats = app.add_subcommand("stats", "metrics of a snapshot log");
  stats->add_option("log", log, "snapshot log")->required();
  auto* query = app.add_subcommand("query", "query a snapshot log");
  query->add_option("log", log, "snapshot log")->required();
  query->add_option("--at", at, "instant (seconds); latest snapshot at or before it");
  query->add_option("--node", node, "node id: history across the log");
  query->add_option("--edge", edge, "edge id: rendered explanation");
  auto* explain = app.add_subcommand("explain", "render explanations from a snapshot log");
  explain->add_option("log", log, "snapshot log")->required();
  explain->add_option("--at", at, "instant (seconds); default: last snapshot");
  explain->add_option("--edge", edge, "single edge id");
  std::string ontology_path;
  std::optional<std::string> validate_log;
  auto* validate_cmd = app.add_subcommand("validate-ontology", "parse an ontology and optionally check a log");
  validate_cmd->add_option("--ontology", ontology_path, "ontology file; built-in default if omitted");
  validate_cmd->add_option("log", validate_log, "snapshot log to re-validate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(run_flags);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_flags);
    if (app.got_subcommand("synth")) return cmd_synth(synth_flags);
    if (app.got_subcommand("stats")) return cmd_stats(log);
    if (app.got_subcommand("query")) return cmd_query(log, at, node, edge);
    if (app.got_subcommand("explain")) return cmd_explain(log, at, edge);
    if (app.got_subcommand("validate-ontology")) return cmd_validate(ontology_path, validate_log);
  } catch (const Error& e) {
    std::fprintf(stderr, "cogmap: %s error: %s\n", std::string(to_string(e.code())).c_str(), e.detail().c_str());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cogmap: unexpected error: %s\n", e.what());
    return kExitUnexpected;
  }
  return kExitUnexpected;
}
