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

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "cogmap/pipeline.hpp"
#include "support/oracles.hpp"

namespace cogmap {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no cogmap::Error thrown";
  return ErrorCode::kValue;
}

ObservationStream frames_at(const std::vector<std::int64_t>& micros) {
  ObservationStream s;
  for (auto us : micros) s.frames.push_back({Timestamp::from_micros(us), {}});
  return s;
}

PoseStream poses_at(const std::vector<std::int64_t>& micros) {
  PoseStream s;
  for (auto us : micros) {
    Pose p;
    p.stamp = Timestamp::from_micros(us);
    s.poses.push_back(p);
  }
  return s;
}

TEST(Subsample, ThirtyToTenKeepsEveryThirdFrame) {
  std::vector<std::int64_t> us;
  for (int i = 0; i < 31; ++i) us.push_back(i * 1000000LL / 30);
  DropLog log;
  const auto out = subsample(frames_at(us), 10.0, &log);
  ASSERT_EQ(out.frames.size(), 11u);
  for (std::size_t i = 0; i < out.frames.size(); ++i) EXPECT_EQ(out.frames[i].stamp.micros(), us[3 * i]);
  EXPECT_EQ(log.subsample_rejections, 20u);
}

TEST(Subsample, AboveNativeRateKeepsEverything) {
  std::vector<std::int64_t> us;
  for (int i = 0; i < 31; ++i) us.push_back(i * 1000000LL / 30);
  DropLog log;
  EXPECT_EQ(subsample(frames_at(us), 60.0, &log).frames.size(), 31u);
  EXPECT_EQ(log.subsample_rejections, 0u);
}

TEST(Subsample, MatchesNearestTickOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> us;
    std::int64_t t = static_cast<std::int64_t>(rng() % 1000000);
    const int n = 1 + static_cast<int>(rng() % 80);
    for (int i = 0; i < n; ++i) {
      us.push_back(t);
      t += 1 + static_cast<std::int64_t>(rng() % 90000);
    }
    const double fps = std::uniform_real_distribution<double>(2, 70)(rng);
    const auto stream = frames_at(us);
    DropLog log;
    const auto out = subsample(stream, fps, &log);
    std::vector<Timestamp> stamps;
    for (const auto& f : stream.frames) stamps.push_back(f.stamp);
    const auto expected = oracle::subsample_indices(stamps, fps);
    ASSERT_EQ(out.frames.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(out.frames[i].stamp, stamps[expected[i]]);
    EXPECT_EQ(log.subsample_rejections, stamps.size() - expected.size());
  }
}

TEST(Subsample, RejectsNonPositiveRate) {
  EXPECT_EQ(code_of([] { subsample(frames_at({0, 1}), 0.0); }), ErrorCode::kConfiguration);
}

TEST(Sync, GateBoundaryIsExclusive) {
  // Gaps of 0, 4.999 ms, 5 ms and 7 ms.
  const auto frames = frames_at({1000000, 2004999, 3005000, 4007000});
  const auto poses = poses_at({1000000, 2000000, 3000000, 4000000});
  const auto r = synchronize(frames, poses);
  ASSERT_EQ(r.frames.size(), 2u);
  EXPECT_EQ(r.frames[0].frame_stamp.micros(), 1000000);
  EXPECT_EQ(r.frames[1].frame_stamp.micros(), 2004999);
  EXPECT_NEAR(r.frames[1].pose_gap, 0.004999, 1e-12);
  EXPECT_EQ(r.drops.stale_pose_drops, 2u);
}

TEST(Sync, TiesGoToTheEarlierPose) {
  const auto r = synchronize(frames_at({1002000}), poses_at({1000000, 1004000}));
  ASSERT_EQ(r.frames.size(), 1u);
  EXPECT_EQ(r.frames[0].pose.stamp.micros(), 1000000);
}

TEST(Sync, MatchesBruteForceOracle) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> f_us, p_us;
    std::int64_t t = 0;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 50); i < n; ++i) f_us.push_back(t += 1 + rng() % 40000);
    t = static_cast<std::int64_t>(rng() % 20000);
    for (int i = 0, n = 1 + static_cast<int>(rng() % 60); i < n; ++i) p_us.push_back(t += 1 + rng() % 30000);
    const auto frames = frames_at(f_us);
    const auto poses = poses_at(p_us);
    const auto r = synchronize(frames, poses);
    const auto expected = oracle::sync_pairs(frames, poses, kDefaultSyncGate);
    ASSERT_EQ(r.frames.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(r.frames[i].frame_stamp, frames.frames[expected[i].first].stamp);
      EXPECT_EQ(r.frames[i].pose.stamp, poses.poses[expected[i].second].stamp);
    }
    EXPECT_EQ(r.drops.stale_pose_drops, frames.frames.size() - expected.size());
  }
}

TEST(Sync, NeedsPoses) {
  EXPECT_EQ(code_of([] { synchronize(frames_at({1}), PoseStream{}); }), ErrorCode::kConfiguration);
}

TEST(Qos, BestEffortKeepsNewestUnderStalledConsumer) {
  Topic<int> topic({Reliability::kBestEffort, 10});
  for (int i = 0; i < 25; ++i) topic.publish(i);
  EXPECT_EQ(topic.size(), 10u);
  EXPECT_EQ(topic.dropped(), 15u);
  for (int expected = 15; expected < 25; ++expected) EXPECT_EQ(topic.try_take().value(), expected);
  EXPECT_FALSE(topic.try_take().has_value());
}

TEST(Qos, ReliableIsLosslessAndOrdered) {
  Topic<int> topic({Reliability::kReliable, 5});
  constexpr int kCount = 200;
  std::thread producer([&] {
    for (int i = 0; i < kCount; ++i) topic.publish(i);
    topic.close();
  });
  std::vector<int> got;
  while (auto v = topic.take()) {
    got.push_back(*v);
    if (got.size() % 20 == 0) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  producer.join();
  ASSERT_EQ(got.size(), static_cast<std::size_t>(kCount));
  for (int i = 0; i < kCount; ++i) EXPECT_EQ(got[i], i);
  EXPECT_EQ(topic.dropped(), 0u);
}

TEST(Qos, ReliableTryPublishRefusesWhenFull) {
  Topic<int> topic({Reliability::kReliable, 2});
  EXPECT_TRUE(topic.try_publish(1));
  EXPECT_TRUE(topic.try_publish(2));
  EXPECT_FALSE(topic.try_publish(3));
  EXPECT_EQ(topic.dropped(), 0u);
}

TEST(Qos, InvalidDepth) {
  EXPECT_EQ(code_of([] { Topic<int> t({Reliability::kBestEffort, 0}); }), ErrorCode::kConfiguration);
}

TEST(Bus, RoutingErrors) {
  Bus bus;
  bus.advertise<int>("a", {});
  EXPECT_EQ(code_of([&] { bus.advertise<int>("a", {}); }), ErrorCode::kRouting);
  EXPECT_EQ(code_of([&] { bus.topic<int>("b"); }), ErrorCode::kRouting);
  EXPECT_EQ(code_of([&] { bus.topic<double>("a"); }), ErrorCode::kRouting);
  EXPECT_EQ(bus.publish<int>("a", 3), PublishOutcome::kDelivered);
}

TEST(Bus, DefaultPolicies) {
  const auto p = default_topic_policies();
  EXPECT_EQ(p.at("tracked_objects"), (QosPolicy{Reliability::kBestEffort, 10}));
  EXPECT_EQ(p.at("camera_pose"), (QosPolicy{Reliability::kReliable, 5}));
  EXPECT_EQ(p.at("scene_graph").reliability, Reliability::kReliable);
}

}  // namespace
}  // namespace cogmap
