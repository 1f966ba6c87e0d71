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

#include "cogmap/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "cogmap/charts.hpp"
#include "cogmap/explain.hpp"
#include "cogmap/records.hpp"
#include "cogmap/text_format.hpp"
#include "json.hpp"

namespace cogmap {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

template <typename F>
decltype(auto) stage(std::string_view name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + std::string(name) + "': " + e.detail());
  }
}

/// Rejects keys outside `allowed` so typos do not silently fall back to defaults.
void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw Error(ErrorCode::kConfiguration, std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::kConfiguration, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

void read_predicates(const json& j, PredicateConfig& p) {
  check_keys(j,
             {"contact_eps", "footprint_overlap_min", "containment_min", "lateral_pairing_max", "confidence_scale"},
             "predicates");
  read(j, "contact_eps", p.contact_eps);
  read(j, "footprint_overlap_min", p.footprint_overlap_min);
  read(j, "containment_min", p.containment_min);
  read(j, "lateral_pairing_max", p.lateral_pairing_max);
  read(j, "confidence_scale", p.confidence_scale);
}

void read_scene_graph(const json& j, SceneGraphConfig& c) {
  check_keys(j, {"match_radius", "expiry", "pairing_radius", "intrinsics", "extent", "depth_noise"}, "scene_graph");
  read(j, "match_radius", c.match_radius);
  read(j, "expiry", c.expiry);
  read(j, "pairing_radius", c.pairing_radius);
  if (auto it = j.find("intrinsics"); it != j.end()) {
    check_keys(*it, {"fx", "fy", "cx", "cy", "width", "height"}, "scene_graph.intrinsics");
    read(*it, "fx", c.intrinsics.fx);
    read(*it, "fy", c.intrinsics.fy);
    read(*it, "cx", c.intrinsics.cx);
    read(*it, "cy", c.intrinsics.cy);
    read(*it, "width", c.intrinsics.width);
    read(*it, "height", c.intrinsics.height);
  }
  if (auto it = j.find("extent"); it != j.end()) {
    check_keys(*it, {"min_half_depth", "max_half_depth"}, "scene_graph.extent");
    read(*it, "min_half_depth", c.extent.min_half_depth);
    read(*it, "max_half_depth", c.extent.max_half_depth);
  }
  if (auto it = j.find("depth_noise"); it != j.end()) {
    check_keys(*it, {"sigma0", "k"}, "scene_graph.depth_noise");
    read(*it, "sigma0", c.depth_noise.sigma0);
    read(*it, "k", c.depth_noise.k);
  }
}

void read_qos(const json& j, std::map<std::string, QosPolicy, std::less<>>& table) {
  if (!j.is_object()) throw Error(ErrorCode::kConfiguration, "qos must be an object");
  for (const auto& [topic, spec] : j.items()) {
    check_keys(spec, {"reliability", "depth"}, "qos." + topic);
    QosPolicy policy = table.count(topic) ? table.find(topic)->second : QosPolicy{};
    if (auto it = spec.find("reliability"); it != spec.end()) {
      const auto r = it->get<std::string>();
      if (r == "best_effort") {
        policy.reliability = Reliability::kBestEffort;
      } else if (r == "reliable") {
        policy.reliability = Reliability::kReliable;
      } else {
        throw Error(ErrorCode::kConfiguration, "qos." + topic + ".reliability must be best_effort or reliable");
      }
    }
    read(spec, "depth", policy.history_depth);
    table.insert_or_assign(topic, policy);
  }
}

void require_file(const std::string& path, std::string_view what) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo, std::string(what) + " file '" + path + "' does not exist");
  }
}

std::string number(double v) { return format_fixed(v, 6); }

std::string latency_cell(const std::optional<double>& v) { return v ? format_fixed(*v, 6) : "NA"; }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string fps_label(double fps) { return format_shortest(fps); }

}  // namespace

RunConfig RunConfig::from_json_text(std::string_view text, const std::string& base_dir) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    check_keys(j,
               {"poses", "observations", "synthetic", "ontology", "out", "convention", "fps", "fps_list", "trials",
                "seed", "sync_gate", "predicates", "scene_graph", "srqi_weights", "vocabulary", "qos",
                "prune_violations", "measure_latency", "threaded"},
               "run config");
    read(j, "poses", c.poses);
    read(j, "observations", c.observations);
    read(j, "synthetic", c.synthetic);
    read(j, "ontology", c.ontology);
    read(j, "out", c.out);
    c.poses = resolve(c.poses, base_dir);
    c.observations = resolve(c.observations, base_dir);
    c.synthetic = resolve(c.synthetic, base_dir);
    c.ontology = resolve(c.ontology, base_dir);
    c.out = resolve(c.out, base_dir);
    if (auto it = j.find("convention"); it != j.end()) {
      const auto name = it->get<std::string>();
      if (name == "z_up") {
        c.convention = PoseConvention::kZUp;
      } else if (name == "camera_forward") {
        c.convention = PoseConvention::kCameraForward;
      } else {
        throw Error(ErrorCode::kConfiguration, "convention must be z_up or camera_forward");
      }
    }
    read(j, "fps", c.fps);
    read(j, "fps_list", c.fps_list);
    read(j, "trials", c.trials);
    read(j, "seed", c.seed);
    read(j, "sync_gate", c.sync_gate);
    if (auto it = j.find("predicates"); it != j.end()) read_predicates(*it, c.predicates);
    if (auto it = j.find("scene_graph"); it != j.end()) read_scene_graph(*it, c.scene_graph);
    if (auto it = j.find("srqi_weights"); it != j.end()) {
      check_keys(*it, {"consistency", "entropy", "stability"}, "srqi_weights");
      read(*it, "consistency", c.srqi_weights.consistency);
      read(*it, "entropy", c.srqi_weights.entropy);
      read(*it, "stability", c.srqi_weights.stability);
    }
    read(j, "vocabulary", c.vocabulary);
    if (auto it = j.find("qos"); it != j.end()) read_qos(*it, c.qos);
    read(j, "prune_violations", c.prune_violations);
    read(j, "measure_latency", c.measure_latency);
    read(j, "threaded", c.threaded);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfiguration, std::string("run config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "config file '" + path + "' does not exist");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), fs::path(path).parent_path().string());
}

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kConfiguration, what); };
  if (!(fps > 0) || !std::isfinite(fps)) bad("fps must be positive");
  for (double f : fps_list) {
    if (!(f > 0) || !std::isfinite(f)) bad("every fps in fps_list must be positive");
  }
  if (trials < 1) bad("trials must be at least 1");
  if (!(sync_gate > 0)) bad("sync_gate must be positive");
  predicates.validate();
  scene_graph.validate();
  srqi_weights.validate();
  RelationVocabulary vocab(vocabulary);
  if (vocab.size() < 2) bad("vocabulary needs at least two relations");
  for (auto topic : {topics::kTrackedObjects, topics::kCameraPose, topics::kSceneGraph}) {
    auto it = qos.find(topic);
    if (it == qos.end()) bad("qos table lacks topic '" + std::string(topic) + "'");
    it->second.validate();
  }
  const bool synthetic_source = !synthetic.empty();
  const bool file_source = !poses.empty() || !observations.empty();
  if (synthetic_source == file_source) bad("give either a synthetic scene or both poses and observations");
  if (synthetic_source) {
    require_file(synthetic, "synthetic scene");
  } else {
    if (poses.empty() || observations.empty()) bad("file input needs both poses and observations");
    require_file(poses, "poses");
    require_file(observations, "observations");
  }
  if (!ontology.empty()) require_file(ontology, "ontology");
}

RunInputs load_inputs(const RunConfig& config, std::uint64_t seed) {
  RunInputs in;
  if (!config.synthetic.empty()) {
    auto spec = stage("ingest", [&] { return SyntheticSceneSpec::load(config.synthetic); });
    spec.seed += seed;
    auto scene = stage("ingest", [&] {
      return generate_synthetic(spec, config.predicates, config.scene_graph.pairing_radius);
    });
    in.poses = std::move(scene.poses);
    in.observations = std::move(scene.observations);
    in.ground_truth = std::move(scene.ground_truth);
    in.intrinsics = spec.intrinsics;
  } else {
    in.poses = stage("ingest", [&] { return load_trajectory(config.poses, config.convention); });
    in.observations = stage("ingest", [&] { return load_observations(config.observations); });
  }
  return in;
}

Ontology load_ontology(const RunConfig& config) {
  return stage("ontology", [&] { return config.ontology.empty() ? Ontology::standard() : Ontology::load(config.ontology); });
}

RunResult execute(const RunInputs& inputs, const RunConfig& config, const Ontology& ontology, double fps,
                  std::uint64_t seed, bool keep_snapshots) {
  const RelationVocabulary vocabulary(config.vocabulary);
  stage("ontology", [&] { ontology.require_covers(vocabulary.names()); });
  SceneGraphConfig graph_cfg = config.scene_graph;
  if (inputs.intrinsics) graph_cfg.intrinsics = *inputs.intrinsics;

  RunResult result;
  const auto sampled = stage("subsample", [&] { return subsample(inputs.observations, fps, &result.drops); });
  auto synced = stage("synchronize", [&] { return synchronize(sampled, inputs.poses, config.sync_gate); });
  result.drops.merge(synced.drops);
  if (keep_snapshots) result.memory = std::make_shared<SemanticMemory>();

  Bus bus;
  auto& frame_topic = bus.advertise<SyncedFrame>(topics::kTrackedObjects, config.qos.find(topics::kTrackedObjects)->second);
  bus.advertise<Pose>(topics::kCameraPose, config.qos.find(topics::kCameraPose)->second);

  const PredicateConfig predicates = config.predicates;
  const RelationFn relation_fn = [&predicates](const ObjectNode& s, const ObjectNode& o) {
    return infer_relations(s, o, predicates);
  };

  SceneGraphSnapshot previous;
  bool has_previous = false;
  IdAllocator ids;
  auto process = [&](const SyncedFrame& frame) {
    const auto start = std::chrono::steady_clock::now();
    auto update = stage("update_graph",
                        [&] { return update_graph(previous, frame, relation_fn, graph_cfg, vocabulary, ids); });
    auto& snap = update.snapshot;
    const auto reports = stage("validate", [&] { return validate(snap, ontology); });
    const double rate = violation_rate(snap, reports);
    apply_flags(snap, reports);
    if (config.prune_violations) {
      std::vector<RelationEdge> kept_edges;
      std::vector<PredicateEvaluation> kept_evals;
      for (std::size_t i = 0; i < snap.edges.size(); ++i) {
        if (!snap.edges[i].violation_flags.empty()) continue;
        snap.edges[i].violation_flags.clear();
        kept_edges.push_back(std::move(snap.edges[i]));
        kept_evals.push_back(std::move(update.evaluations[i]));
      }
      snap.edges = std::move(kept_edges);
      update.evaluations = std::move(kept_evals);
    }
    snap.traces = stage("explain", [&] {
      return capture_traces(snap, update.evaluations, ontology, config.prune_violations ? std::vector<ViolationReport>{} : reports);
    });
    result.ticks.push_back(stage("metrics", [&] {
      return snapshot_metrics(snap, rate, has_previous ? &previous : nullptr);
    }));
    if (config.measure_latency) {
      const auto stop = std::chrono::steady_clock::now();
      result.latency_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    if (result.memory) {
      stage("memory", [&] { result.memory->append(snap); });
    }
    previous = std::move(snap);
    has_previous = true;
  };

  if (config.threaded) {
    std::thread producer([&] {
      for (auto& frame : synced.frames) {
        if (frame_topic.publish(std::move(frame)) == PublishOutcome::kClosed) break;
      }
      frame_topic.close();
    });
    try {
      while (auto frame = frame_topic.take()) process(*frame);
    } catch (...) {
      frame_topic.close();
      producer.join();
      throw;
    }
    producer.join();
  } else {
    for (auto& frame : synced.frames) {
      frame_topic.publish(std::move(frame));
      while (auto taken = frame_topic.try_take()) process(*taken);
    }
  }
  for (const auto& [topic, count] : bus.drop_counts()) result.drops.qos_drops[topic] += count;

  result.metrics = stage("metrics", [&] {
    return aggregate_run(result.ticks, config.srqi_weights, vocabulary.size(), fps, seed);
  });
  return result;
}

void write_run_artifacts(const RunResult& result, const std::string& dir) {
  stage("output", [&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir + "': " + ec.message());
    if (result.memory) {
      std::ostringstream snaps, traces;
      for (std::size_t i = 0; i < result.memory->size(); ++i) {
        const auto& s = result.memory->at(i);
        snaps << snapshot_to_line(s) << '\n';
        for (const auto& t : s.traces) traces << trace_to_line(s.stamp, t) << '\n';
      }
      write_file(fs::path(dir) / "snapshots.jsonl", snaps.str());
      write_file(fs::path(dir) / "traces.jsonl", traces.str());
    }
    write_file(fs::path(dir) / "drops.json", drop_log_to_json(result.drops));
    std::string csv = "stamp,node_count,edge_count,violation_rate,entropy,avg_degree,clustering,stability,latency_ms\n";
    for (std::size_t i = 0; i < result.ticks.size(); ++i) {
      const auto& t = result.ticks[i];
      csv += t.stamp.to_string() + "," + std::to_string(t.node_count) + "," + std::to_string(t.edge_count) + "," +
             number(t.violation_rate) + "," + number(t.entropy) + "," + number(t.avg_degree) + "," +
             number(t.clustering_coefficient) + "," + number(t.stability) + "," +
             latency_cell(i < result.latency_ms.size() ? std::optional(result.latency_ms[i]) : std::nullopt) + "\n";
    }
    write_file(fs::path(dir) / "metrics.csv", csv);
  });
}

RunResult run(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  const auto ontology = load_ontology(config);
  const auto inputs = load_inputs(config, config.seed);
  auto result = execute(inputs, config, ontology, config.fps, config.seed, true);
  if (!config.out.empty()) write_run_artifacts(result, config.out);
  return result;
}

SweepReport sweep(const RunConfig& config) {
  stage("config", [&] {
    config.validate();
    if (config.fps_list.empty()) throw Error(ErrorCode::kConfiguration, "fps_list is empty");
  });
  const auto ontology = load_ontology(config);
  SweepReport report;
  std::vector<std::vector<SweepRow>> by_fps(config.fps_list.size());
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(trial);
    std::optional<RunInputs> inputs;
    std::string input_failure;
    try {
      inputs = load_inputs(config, seed);
    } catch (const Error& e) {
      input_failure = e.what();
    }
    for (std::size_t k = 0; k < config.fps_list.size(); ++k) {
      SweepRow row;
      row.fps = config.fps_list[k];
      row.trial = trial;
      row.seed = seed;
      try {
        if (!inputs) throw Error(ErrorCode::kIo, input_failure);
        auto result = execute(*inputs, config, ontology, row.fps, seed, false);
        row.metrics = result.metrics;
        row.latency_ms = std::move(result.latency_ms);
      } catch (const Error& e) {
        row.failure = e.what();
        report.failures.push_back("fps " + fps_label(row.fps) + " trial " + std::to_string(trial) + ": " + e.what());
      }
      by_fps[k].push_back(std::move(row));
    }
  }

  std::vector<std::vector<double>> srqi_groups;
  bool pairwise_ok = config.fps_list.size() >= 2;
  for (std::size_t k = 0; k < by_fps.size(); ++k) {
    FpsAggregate agg;
    agg.fps = config.fps_list[k];
    std::map<std::string, std::vector<double>> cols;
    std::vector<double> latencies;
    for (const auto& row : by_fps[k]) {
      if (row.failure) continue;
      const auto& m = row.metrics;
      cols["srqi"].push_back(m.srqi);
      cols["violation_rate"].push_back(m.violation_rate);
      cols["entropy"].push_back(m.entropy);
      cols["node_count"].push_back(m.node_count);
      cols["edge_count"].push_back(m.edge_count);
      cols["avg_degree"].push_back(m.avg_degree);
      cols["clustering"].push_back(m.clustering_coefficient);
      cols["stability"].push_back(m.stability);
      latencies.insert(latencies.end(), row.latency_ms.begin(), row.latency_ms.end());
      ++agg.runs;
    }
    auto fill = [&](RunMetrics& out, double (*f)(const std::vector<double>&)) {
      out.fps = agg.fps;
      out.srqi = f(cols["srqi"]);
      out.violation_rate = f(cols["violation_rate"]);
      out.entropy = f(cols["entropy"]);
      out.node_count = f(cols["node_count"]);
      out.edge_count = f(cols["edge_count"]);
      out.avg_degree = f(cols["avg_degree"]);
      out.clustering_coefficient = f(cols["clustering"]);
      out.stability = f(cols["stability"]);
    };
    fill(agg.mean, mean_of);
    fill(agg.stddev, stddev_of);
    if (config.measure_latency && !latencies.empty()) {
      agg.latency_ms_mean = mean_of(latencies);
      agg.latency_ms_p95 = quantile(latencies, 0.95);
    }
    if (agg.runs < 2) pairwise_ok = false;
    // Rank on 12 significant digits so summation-order noise does not count as a difference.
    std::vector<double> srqi_ranked;
    for (double v : cols["srqi"]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      srqi_ranked.push_back(std::strtod(buf, nullptr));
    }
    srqi_groups.push_back(std::move(srqi_ranked));
    report.aggregates.push_back(agg);
  }

  if (config.fps_list.size() < 2) {
    report.notes.push_back("single frame-rate condition: aggregates only, no Kruskal-Wallis tests");
  } else if (!pairwise_ok) {
    report.notes.push_back("fewer than two successful trials in some condition: Kruskal-Wallis tests skipped");
  } else {
    report.overall = kruskal_wallis(srqi_groups);
    for (std::size_t a = 0; a < srqi_groups.size(); ++a) {
      for (std::size_t b = a + 1; b < srqi_groups.size(); ++b) {
        report.pairwise.push_back(
            {config.fps_list[a], config.fps_list[b], kruskal_wallis({srqi_groups[a], srqi_groups[b]})});
      }
    }
  }
  for (auto& rows : by_fps) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

void write_sweep_artifacts(const SweepReport& report, const std::string& dir) {
  stage("output", [&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir + "': " + ec.message());
    const fs::path root(dir);

    std::string runs =
        "FPS,trial,seed,ticks,SRQI,violation_rate,entropy,node_count,edge_count,avg_degree,clustering,stability,"
        "latency_ms_mean,latency_ms_p95,status\n";
    std::string scatter = "FPS,trial,SRQI,violation_rate,entropy\n";
    for (const auto& row : report.rows) {
      const auto& m = row.metrics;
      std::optional<double> lat_mean, lat_p95;
      if (!row.latency_ms.empty()) {
        lat_mean = mean_of(row.latency_ms);
        lat_p95 = quantile(row.latency_ms, 0.95);
      }
      runs += fps_label(row.fps) + "," + std::to_string(row.trial) + "," + std::to_string(row.seed) + "," +
              std::to_string(m.ticks) + "," + number(m.srqi) + "," + number(m.violation_rate) + "," +
              number(m.entropy) + "," + number(m.node_count) + "," + number(m.edge_count) + "," +
              number(m.avg_degree) + "," + number(m.clustering_coefficient) + "," + number(m.stability) + "," +
              latency_cell(lat_mean) + "," + latency_cell(lat_p95) + "," + (row.failure ? "failed" : "ok") + "\n";
      if (!row.failure) {
        scatter += fps_label(row.fps) + "," + std::to_string(row.trial) + "," + number(m.srqi) + "," +
                   number(m.violation_rate) + "," + number(m.entropy) + "\n";
      }
    }
    write_file(root / "runs.csv", runs);
    write_file(root / "scatter.csv", scatter);

    const std::string header =
        "FPS,SRQI,violation_rate,entropy,node_count,edge_count,avg_degree,clustering,stability,latency_ms_mean,"
        "latency_ms_p95\n";
    std::string summary = header, summary_std = header, srqi_curve = "FPS,SRQI_mean,SRQI_std,runs\n";
    auto metric_cells = [](const RunMetrics& m) {
      return number(m.srqi) + "," + number(m.violation_rate) + "," + number(m.entropy) + "," + number(m.node_count) +
             "," + number(m.edge_count) + "," + number(m.avg_degree) + "," + number(m.clustering_coefficient) + "," +
             number(m.stability);
    };
    ChartSeries srqi_series{"mean SRQI", {}, {}, true};
    for (const auto& agg : report.aggregates) {
      summary += fps_label(agg.fps) + "," + metric_cells(agg.mean) + "," + latency_cell(agg.latency_ms_mean) + "," +
                 latency_cell(agg.latency_ms_p95) + "\n";
      summary_std += fps_label(agg.fps) + "," + metric_cells(agg.stddev) + ",NA,NA\n";
      srqi_curve += fps_label(agg.fps) + "," + number(agg.mean.srqi) + "," + number(agg.stddev.srqi) + "," +
                    std::to_string(agg.runs) + "\n";
      if (agg.runs) {
        srqi_series.x.push_back(agg.fps);
        srqi_series.y.push_back(agg.mean.srqi);
      }
    }
    write_file(root / "summary.csv", summary);
    write_file(root / "summary_std.csv", summary_std);
    write_file(root / "srqi_vs_fps.csv", srqi_curve);

    std::vector<std::string> notes = report.notes;
    if (report.overall || !report.pairwise.empty()) {
      std::string kw = "FPS_a,FPS_b,H,dof,p_value\n";
      if (report.overall) {
        kw += "all,all," + number(report.overall->h) + "," + std::to_string(report.overall->dof) + "," +
              format_shortest(report.overall->p_value) + "\n";
      }
      for (const auto& p : report.pairwise) {
        kw += fps_label(p.fps_a) + "," + fps_label(p.fps_b) + "," + number(p.result.h) + "," +
              std::to_string(p.result.dof) + "," + format_shortest(p.result.p_value) + "\n";
      }
      write_file(root / "kruskal_wallis.csv", kw);
    }

    std::string kde_csv = "FPS,x,density\n";
    for (const auto& agg : report.aggregates) {
      std::vector<double> samples;
      for (const auto& row : report.rows) {
        if (!row.failure && row.fps == agg.fps) samples.push_back(row.metrics.srqi);
      }
      try {
        const double h = silverman_bandwidth(samples);
        const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
        constexpr int kPoints = 101;
        std::vector<double> grid(kPoints);
        for (int i = 0; i < kPoints; ++i) grid[i] = *lo - 3 * h + (*hi - *lo + 6 * h) * i / (kPoints - 1);
        const auto density = kde(samples, grid, h);
        for (int i = 0; i < kPoints; ++i) {
          kde_csv += fps_label(agg.fps) + "," + number(grid[i]) + "," + number(density[i]) + "\n";
        }
      } catch (const Error& e) {
        notes.push_back("SRQI density skipped at " + fps_label(agg.fps) + " FPS: " + e.what());
      }
    }
    write_file(root / "kde_srqi.csv", kde_csv);

    std::vector<ChartSeries> scatter_series;
    for (const auto& agg : report.aggregates) {
      ChartSeries s{fps_label(agg.fps) + " FPS", {}, {}, false};
      for (const auto& row : report.rows) {
        if (row.failure || row.fps != agg.fps) continue;
        s.x.push_back(row.metrics.entropy);
        s.y.push_back(row.metrics.violation_rate);
      }
      scatter_series.push_back(std::move(s));
    }
    write_file(root / "srqi_vs_fps.svg", svg_chart("SRQI vs frame rate", "FPS", "SRQI", {srqi_series}));
    write_file(root / "violation_vs_entropy.svg",
               svg_chart("Violation rate vs relation entropy", "entropy (bits)", "violation rate", scatter_series));

    std::string text = "runs: " + std::to_string(report.rows.size()) + ", failures: " +
                       std::to_string(report.failures.size()) + "\n";
    for (const auto& f : report.failures) text += "failure: " + f + "\n";
    for (const auto& n : notes) text += "note: " + n + "\n";
    write_file(root / "report.txt", text);
  });
}

}  // namespace cogmap
