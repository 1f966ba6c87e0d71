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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cogmap/graph_types.hpp"
#include "cogmap/pipeline.hpp"

namespace cogmap {

/// Snapshot log: one JSON object per line, append-only.
///
///     {"stamp": "12.033333", "pose_stamp": "12.033333",
///      "nodes": [{"node_id", "track_id", "class": {name: p}, "obs_count",
///                 "box_min": [x,y,z], "box_max": [x,y,z], "centroid": [x,y,z],
///                 "position_sigma", "last_seen",
///                 "last_observation": {"track_id", "stamp", "bbox": [u0,v0,u1,v1], "depth"}}],
///      "edges": [{"edge_id", "subject", "relation", "object", "confidence",
///                 "trace_id", "stamp", "violation_flags": ["EXCLUSION", ...]}],
///      "traces": [{"trace_id", "edge_id", "predicate",
///                  "measured": [{"name", "value", "unit"}], "thresholds": [...],
///                  "observations": [...], "pose_stamp",
///                  "ontology_checks": [{"name", "passed", "counterparts": [ids]}],
///                  "sigma_subject", "sigma_object", "margin"}]}
///
/// Stamps are decimal strings with six fractional digits; reals use the
/// shortest representation that reads back to the same double.
std::string snapshot_to_line(const SceneGraphSnapshot& snapshot);
SceneGraphSnapshot snapshot_from_line(std::string_view line);

void write_snapshot_log(const std::vector<SceneGraphSnapshot>& snapshots, std::ostream& out);
/// kParse with the line number on malformed records.
std::vector<SceneGraphSnapshot> read_snapshot_log(std::istream& in);
std::vector<SceneGraphSnapshot> load_snapshot_log(const std::string& path);

/// Trace log: the traces of each snapshot, one per line, tagged with the
/// snapshot stamp ({"stamp": ..., "trace": {...}}).
void write_trace_log(const std::vector<SceneGraphSnapshot>& snapshots, std::ostream& out);
std::string trace_to_line(Timestamp stamp, const ReasoningTrace& trace);

/// {"stale_pose_drops": n, "subsample_rejections": n, "qos_drops": {topic: n}}
std::string drop_log_to_json(const DropLog& drops);
DropLog drop_log_from_json(std::string_view text);

}  // namespace cogmap
