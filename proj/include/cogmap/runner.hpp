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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogmap/analytics.hpp"
#include "cogmap/ingest.hpp"
#include "cogmap/ontology.hpp"
#include "cogmap/pipeline.hpp"
#include "cogmap/relations.hpp"
#include "cogmap/scene_graph.hpp"

namespace cogmap {

/// Everything a run or sweep needs. Loaded from a JSON document whose keys
/// mirror the fields (nested objects for the module configs):
///
///     {"synthetic": "scenes/standard.json", "ontology": "default.onto",
///      "fps": 30, "fps_list": [10, 15, 20, 30, 60], "trials": 10, "seed": 0,
///      "sync_gate": 0.005, "convention": "z_up",
///      "predicates": {"contact_eps": 0.02, ...},
///      "scene_graph": {"match_radius": 0.3, "expiry": 2.0, "pairing_radius": 3.0,
///                      "intrinsics": {...}, "extent": {...}, "depth_noise": {...}},
///      "srqi_weights": {"consistency": 0.4, "entropy": 0.3, "stability": 0.3},
///      "qos": {"tracked_objects": {"reliability": "best_effort", "depth": 10}},
///      "vocabulary": [...], "prune_violations": false,
///      "measure_latency": true, "threaded": false, "out": "results"}
///
/// Relative paths resolve against the document's directory. Unknown keys are
/// rejected.
struct RunConfig {
  std::string poses;
  std::string observations;
  std::string synthetic;
  std::string ontology;  // empty: built-in ontology
  std::string out;       // empty: nothing written
  PoseConvention convention = PoseConvention::kZUp;
  double fps = 30.0;
  std::vector<double> fps_list{10, 15, 20, 30, 60};
  int trials = 10;
  std::uint64_t seed = 0;
  double sync_gate = kDefaultSyncGate;
  PredicateConfig predicates;
  SceneGraphConfig scene_graph;
  SrqiWeights srqi_weights;
  std::vector<std::string> vocabulary = RelationVocabulary::standard().names();
  std::map<std::string, QosPolicy, std::less<>> qos = default_topic_policies();
  bool prune_violations = false;  // drop flagged edges from persisted snapshots
  bool measure_latency = true;    // off: latency columns read "NA" and outputs are byte-stable
  bool threaded = false;          // producer and mapper on separate threads

  static RunConfig from_json_text(std::string_view text, const std::string& base_dir = "");
  static RunConfig load(const std::string& path);
  /// Value checks, then existence of every referenced file (kIo naming it).
  void validate() const;
};

struct RunInputs {
  PoseStream poses;
  ObservationStream observations;
  std::vector<GroundTruthFrame> ground_truth;  // synthetic sources only
  std::optional<CameraIntrinsics> intrinsics;  // overrides the configured camera
};

/// Reads files or generates the synthetic scene. The synthetic generator
/// seed is the scene's own seed plus `seed`.
RunInputs load_inputs(const RunConfig& config, std::uint64_t seed);

Ontology load_ontology(const RunConfig& config);

struct RunResult {
  RunMetrics metrics;
  std::vector<SnapshotMetrics> ticks;
  std::vector<double> latency_ms;  // per tick; empty when not measured
  DropLog drops;
  std::shared_ptr<SemanticMemory> memory;  // null unless snapshots were kept
};

/// subsample -> synchronize -> bus -> update_graph -> validate -> traces ->
/// metrics -> memory, for one frame rate. The violation rate of a tick is
/// measured before any pruning. Stage failures are rethrown with the stage
/// named in the message.
RunResult execute(const RunInputs& inputs, const RunConfig& config, const Ontology& ontology, double fps,
                  std::uint64_t seed, bool keep_snapshots);

/// snapshots.jsonl, traces.jsonl, drops.json and metrics.csv under `dir`.
void write_run_artifacts(const RunResult& result, const std::string& dir);

/// One full run at config.fps with config.seed; writes artifacts when
/// config.out is set.
RunResult run(const RunConfig& config);

struct SweepRow {
  double fps = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::vector<double> latency_ms;
  std::optional<std::string> failure;
};

struct FpsAggregate {
  double fps = 0;
  std::size_t runs = 0;
  RunMetrics mean;
  RunMetrics stddev;  // sample standard deviation; zero for a single run
  std::optional<double> latency_ms_mean;
  std::optional<double> latency_ms_p95;
};

struct PairwiseTest {
  double fps_a = 0;
  double fps_b = 0;
  KruskalWallisResult result;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // fps-major, then trial
  std::vector<FpsAggregate> aggregates;
  std::vector<PairwiseTest> pairwise;  // every pair of conditions, on SRQI
  std::optional<KruskalWallisResult> overall;
  std::vector<std::string> notes;
  std::vector<std::string> failures;
};

/// Runs every (fps, trial) combination; trial i uses seed + i and the same
/// input stream across frame rates. Failed runs are recorded and skipped.
SweepReport sweep(const RunConfig& config);

/// runs.csv, summary.csv, summary_std.csv, kruskal_wallis.csv, scatter.csv,
/// srqi_vs_fps.csv, kde_srqi.csv, report.txt and two SVG charts.
void write_sweep_artifacts(const SweepReport& report, const std::string& dir);

}  // namespace cogmap
