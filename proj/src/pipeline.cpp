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

#include "cogmap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cogmap {

void DropLog::merge(const DropLog& other) {
  stale_pose_drops += other.stale_pose_drops;
  subsample_rejections += other.subsample_rejections;
  for (const auto& [topic, n] : other.qos_drops) qos_drops[topic] += n;
}

ObservationStream subsample(const ObservationStream& stream, double target_fps, DropLog* log) {
  if (!(target_fps > 0) || !std::isfinite(target_fps)) {
    throw Error(ErrorCode::kConfiguration, "target fps must be positive");
  }
  ObservationStream out;
  const auto& frames = stream.frames;
  if (frames.empty()) return out;

  const double period = 1e6 / target_fps;  // microseconds
  const double half = 0.5 * period;
  const auto first = static_cast<double>(frames.front().stamp.micros());
  const auto last = static_cast<double>(frames.back().stamp.micros());
  std::vector<bool> used(frames.size(), false);
  std::vector<std::size_t> picked;

  for (std::int64_t n = 0;; ++n) {
    const double tick = first + static_cast<double>(n) * period;
    if (tick > last + 0.5) break;
    auto it = std::lower_bound(frames.begin(), frames.end(), tick - half,
                               [](const ObservationFrame& f, double t) { return static_cast<double>(f.stamp.micros()) < t; });
    std::optional<std::size_t> best;
    double best_gap = 0;
    for (; it != frames.end(); ++it) {
      const double t = static_cast<double>(it->stamp.micros());
      if (t > tick + half) break;
      const auto idx = static_cast<std::size_t>(it - frames.begin());
      if (used[idx]) continue;
      const double gap = std::abs(t - tick);
      if (!best || gap < best_gap) {
        best = idx;
        best_gap = gap;
      }
    }
    if (best) {
      used[*best] = true;
      picked.push_back(*best);
    }
  }
  std::sort(picked.begin(), picked.end());
  out.frames.reserve(picked.size());
  for (std::size_t idx : picked) out.frames.push_back(frames[idx]);
  if (log) log->subsample_rejections += frames.size() - picked.size();
  return out;
}

SyncResult synchronize(const ObservationStream& frames, const PoseStream& poses, double gate) {
  if (poses.poses.empty()) throw Error(ErrorCode::kConfiguration, "pose stream is empty");
  if (!(gate > 0)) throw Error(ErrorCode::kConfiguration, "sync gate must be positive");
  const auto gate_us = static_cast<std::int64_t>(std::llround(gate * 1e6));
  const auto& ps = poses.poses;

  SyncResult result;
  result.frames.reserve(frames.frames.size());
  std::size_t j = 0;
  for (const auto& frame : frames.frames) {
    const std::int64_t t = frame.stamp.micros();
    while (j + 1 < ps.size() && ps[j + 1].stamp.micros() <= t) ++j;
    std::size_t best = j;
    std::int64_t best_gap = std::llabs(ps[j].stamp.micros() - t);
    if (j + 1 < ps.size()) {
      const std::int64_t next_gap = std::llabs(ps[j + 1].stamp.micros() - t);
      if (next_gap < best_gap) {
        best = j + 1;
        best_gap = next_gap;
      }
    }
    if (best_gap >= gate_us) {
      ++result.drops.stale_pose_drops;
      continue;
    }
    result.frames.push_back({frame.stamp, ps[best], frame.observations, static_cast<double>(best_gap) * 1e-6});
  }
  return result;
}

void QosPolicy::validate() const {
  if (history_depth < 1) throw Error(ErrorCode::kConfiguration, "history depth must be at least 1");
}

std::map<std::string, QosPolicy, std::less<>> default_topic_policies() {
  return {{std::string(topics::kTrackedObjects), {Reliability::kBestEffort, 10}},
          {std::string(topics::kCameraPose), {Reliability::kReliable, 5}},
          {std::string(topics::kSceneGraph), {Reliability::kReliable, 10}}};
}

void Bus::close_all() {
  for (auto& [name, topic] : topics_) topic->close();
}

std::map<std::string, std::uint64_t> Bus::drop_counts() const {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [name, topic] : topics_) out[name] = topic->dropped();
  return out;
}

}  // namespace cogmap
