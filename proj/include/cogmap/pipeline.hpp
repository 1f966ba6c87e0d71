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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogmap/ingest.hpp"

namespace cogmap {

/// Counters for everything the pipeline discards. Only ever incremented.
struct DropLog {
  std::uint64_t stale_pose_drops = 0;
  std::map<std::string, std::uint64_t> qos_drops;
  std::uint64_t subsample_rejections = 0;

  void merge(const DropLog& other);
  friend bool operator==(const DropLog&, const DropLog&) = default;
};

/// Resamples to `target_fps`. Ideal ticks start at the first frame and run
/// while they do not pass the last one; each tick takes the nearest unused
/// frame within half a tick period (ties go to the earlier frame). Output is in
/// time order. Frames not taken are counted in `log` when given.
ObservationStream subsample(const ObservationStream& stream, double target_fps, DropLog* log = nullptr);

struct SyncedFrame {
  Timestamp frame_stamp;
  Pose pose;
  std::vector<TrackedObservation> observations;
  double pose_gap = 0;  // |t_frame - t_pose|, seconds
};

struct SyncResult {
  std::vector<SyncedFrame> frames;
  DropLog drops;
};

inline constexpr double kDefaultSyncGate = 0.005;  // s

/// Pairs every frame with its nearest pose (ties to the earlier pose) by a
/// two-pointer merge. Frames whose best gap is not below `gate` are dropped
/// and counted as stale. No interpolation.
SyncResult synchronize(const ObservationStream& frames, const PoseStream& poses, double gate = kDefaultSyncGate);

enum class Reliability { kBestEffort, kReliable };

struct QosPolicy {
  Reliability reliability = Reliability::kBestEffort;
  std::size_t history_depth = 10;

  void validate() const;
  friend bool operator==(const QosPolicy&, const QosPolicy&) = default;
};

namespace topics {
inline constexpr std::string_view kTrackedObjects = "tracked_objects";
inline constexpr std::string_view kCameraPose = "camera_pose";
inline constexpr std::string_view kSceneGraph = "scene_graph";
}  // namespace topics

/// tracked_objects best-effort/10, camera_pose reliable/5, scene_graph reliable/10.
std::map<std::string, QosPolicy, std::less<>> default_topic_policies();

enum class PublishOutcome {
  kDelivered,
  kEvictedOldest,  // best effort queue was full; its oldest message was dropped
  kDeliveredAfterWait,  // reliable producer blocked until space opened
  kClosed,
};

class TopicBase {
 public:
  virtual ~TopicBase() = default;
  virtual const QosPolicy& policy() const = 0;
  virtual std::uint64_t dropped() const = 0;
  virtual void close() = 0;
};

/// Bounded single-producer single-consumer queue with a QoS policy.
template <typename T>
class Topic final : public TopicBase {
 public:
  explicit Topic(QosPolicy policy) : policy_(policy) { policy_.validate(); }

  const QosPolicy& policy() const override { return policy_; }

  PublishOutcome publish(T message) {
    std::unique_lock lock(mutex_);
    if (closed_) return PublishOutcome::kClosed;
    PublishOutcome outcome = PublishOutcome::kDelivered;
    if (queue_.size() >= policy_.history_depth) {
      if (policy_.reliability == Reliability::kBestEffort) {
        queue_.pop_front();
        ++dropped_;
        outcome = PublishOutcome::kEvictedOldest;
      } else {
        space_.wait(lock, [&] { return closed_ || queue_.size() < policy_.history_depth; });
        if (closed_) return PublishOutcome::kClosed;
        outcome = PublishOutcome::kDeliveredAfterWait;
      }
    }
    queue_.push_back(std::move(message));
    lock.unlock();
    ready_.notify_one();
    return outcome;
  }

  /// Non-blocking publish; a full reliable queue refuses and returns false.
  bool try_publish(T message) {
    {
      std::lock_guard lock(mutex_);
      if (closed_) return false;
      if (queue_.size() >= policy_.history_depth) {
        if (policy_.reliability == Reliability::kReliable) return false;
        queue_.pop_front();
        ++dropped_;
      }
      queue_.push_back(std::move(message));
    }
    ready_.notify_one();
    return true;
  }

  std::optional<T> try_take() {
    std::optional<T> out;
    {
      std::lock_guard lock(mutex_);
      if (queue_.empty()) return std::nullopt;
      out.emplace(std::move(queue_.front()));
      queue_.pop_front();
    }
    space_.notify_one();
    return out;
  }

  /// Blocks until a message arrives; empty once the topic is closed and drained.
  std::optional<T> take() {
    std::optional<T> out;
    {
      std::unique_lock lock(mutex_);
      ready_.wait(lock, [&] { return closed_ || !queue_.empty(); });
      if (queue_.empty()) return std::nullopt;
      out.emplace(std::move(queue_.front()));
      queue_.pop_front();
    }
    space_.notify_one();
    return out;
  }

  void close() override {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
    space_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return queue_.size();
  }

  std::uint64_t dropped() const override {
    std::lock_guard lock(mutex_);
    return dropped_;
  }

 private:
  QosPolicy policy_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::condition_variable space_;
  std::deque<T> queue_;
  std::uint64_t dropped_ = 0;
  bool closed_ = false;
};

/// Named topics with fixed policies. Registration happens before any traffic;
/// lookups after that are read-only and thread-safe.
class Bus {
 public:
  template <typename T>
  Topic<T>& advertise(std::string_view name, QosPolicy policy) {
    auto [it, inserted] = topics_.emplace(std::string(name), nullptr);
    if (!inserted) throw Error(ErrorCode::kRouting, "topic '" + std::string(name) + "' already registered");
    auto topic = std::make_unique<Topic<T>>(policy);
    auto& ref = *topic;
    it->second = std::move(topic);
    return ref;
  }

  template <typename T>
  Topic<T>& topic(std::string_view name) {
    auto it = topics_.find(name);
    if (it == topics_.end()) throw Error(ErrorCode::kRouting, "unknown topic '" + std::string(name) + "'");
    auto* typed = dynamic_cast<Topic<T>*>(it->second.get());
    if (!typed) throw Error(ErrorCode::kRouting, "topic '" + std::string(name) + "' carries another type");
    return *typed;
  }

  template <typename T>
  PublishOutcome publish(std::string_view name, T message) {
    return topic<T>(name).publish(std::move(message));
  }

  void close_all();
  /// Best-effort evictions per topic name.
  std::map<std::string, std::uint64_t> drop_counts() const;

 private:
  std::map<std::string, std::unique_ptr<TopicBase>, std::less<>> topics_;
};

}  // namespace cogmap
