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

#include "cogmap/core_model.hpp"
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

TEST(Timestamp, ParseKeepsMicrosecondsExactly) {
  EXPECT_EQ(Timestamp::parse("1305031102.175304").micros(), 1305031102175304LL);
  EXPECT_EQ(Timestamp::parse("0.5").micros(), 500000);
  EXPECT_EQ(Timestamp::parse("12").micros(), 12000000);
  EXPECT_EQ(Timestamp::parse("1.0000019").micros(), 1000001);  // truncated
}

TEST(Timestamp, ToStringRoundTrips) {
  for (std::int64_t us : {0LL, 1LL, 999999LL, 1305031102175304LL, 33333LL}) {
    const auto t = Timestamp::from_micros(us);
    EXPECT_EQ(Timestamp::parse(t.to_string()), t);
  }
  EXPECT_EQ(Timestamp::from_micros(1500000).to_string(), "1.500000");
}

TEST(Timestamp, RejectsGarbage) {
  EXPECT_EQ(code_of([] { Timestamp::parse("abc"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { Timestamp::parse(""); }), ErrorCode::kParse);
}

TEST(Pose, RotationMatchesExplicitQuaternionMatrix) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    Pose pose;
    pose.rotation = q;
    pose.translation = Vector3(g(rng), g(rng), g(rng));
    const Vector3 p(g(rng), g(rng), g(rng));
    const Vector3 expected = oracle::quaternion_matrix(q.x(), q.y(), q.z(), q.w()) * p + pose.translation;
    EXPECT_LT((rotate_and_translate(pose, p) - expected).norm(), 1e-12);
    EXPECT_LT((world_to_camera(pose, rotate_and_translate(pose, p)) - p).norm(), 1e-12);
  }
}

TEST(Pose, NonUnitQuaternionIsRejected) {
  Pose pose;
  pose.rotation = Eigen::Quaterniond(2, 0, 0, 0);
  EXPECT_EQ(code_of([&] { rotate_and_translate(pose, Vector3(1, 2, 3)); }), ErrorCode::kInvalidPose);
}

TEST(Pose, IdentityIsANoOp) {
  Pose pose;
  EXPECT_EQ(rotate_and_translate(pose, Vector3(1, 2, 3)), Vector3(1, 2, 3));
}

TEST(Pose, CameraForwardConventionMapsAxes) {
  // Optical frame: x right, y down, z forward. In the z-up world forward is +y
  // and down is -z.
  Pose p;
  p.translation = Vector3(1, 2, 3);  // (right, down, forward)
  const Pose z = to_z_up(p, PoseConvention::kCameraForward);
  EXPECT_LT((z.translation - Vector3(1, 3, -2)).norm(), 1e-12);
}

TEST(Projection, BackProjectExample) {
  CameraIntrinsics k;
  const Vector3 p = back_project(k, Vector2(319.5, 239.5), 2.0);
  EXPECT_EQ(p, Vector3(0, 0, 2));
}

TEST(Projection, RoundTrip) {
  CameraIntrinsics k;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 640), v(0, 480), d(0.1, 10);
  for (int i = 0; i < 1000; ++i) {
    const Vector2 px(u(rng), v(rng));
    const Vector2 back = project(k, back_project(k, px, d(rng)));
    EXPECT_LT((back - px).norm(), 1e-9);
  }
}

TEST(Projection, Errors) {
  CameraIntrinsics k;
  EXPECT_EQ(code_of([&] { back_project(k, Vector2(10, 10), 0.0); }), ErrorCode::kDegenerateDepth);
  EXPECT_EQ(code_of([&] { back_project(k, Vector2(-1, 10), 1.0); }), ErrorCode::kBounds);
  EXPECT_EQ(code_of([&] { project(k, Vector3(0, 0, -1)); }), ErrorCode::kDegenerateDepth);
}

TEST(DepthNoise, Model) {
  EXPECT_NEAR(depth_sigma(2.0, 0.0012, 0.0019), 0.0012 + 0.0019 * 4, 1e-15);
  EXPECT_EQ(depth_sigma(0.0, 0.0012, 0.0019), 0.0012);
  EXPECT_EQ(code_of([] { depth_sigma(-1.0, 0.0012, 0.0019); }), ErrorCode::kDomain);
}

TEST(ClassDistribution, NormalizesWithinTolerance) {
  auto d = ClassDistribution::normalized({{"cup", 0.6}, {"bottle", 0.3999}});
  EXPECT_NEAR(d.probability("cup") + d.probability("bottle"), 1.0, 1e-15);
  EXPECT_EQ(d.argmax(), "cup");
  EXPECT_EQ(d.probability("table"), 0.0);
  EXPECT_EQ(code_of([] { ClassDistribution::normalized({{"cup", 0.5}}); }), ErrorCode::kValue);
  EXPECT_EQ(code_of([] { ClassDistribution::normalized({{"cup", 1.5}}); }), ErrorCode::kValue);
}

TEST(ClassDistribution, ArgmaxTieGoesToSmallestName) {
  auto d = ClassDistribution::normalized({{"table", 0.5}, {"cup", 0.5}});
  EXPECT_EQ(d.argmax(), "cup");
}

TEST(WorldBox, MatchesHullOfEightCorners) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 600), v(0, 440), d(0.3, 6), sz(5, 40);
  CameraIntrinsics k;
  for (int i = 0; i < 500; ++i) {
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    Pose pose;
    pose.rotation = q;
    pose.translation = Vector3(g(rng), g(rng), g(rng));
    TrackedObservation obs;
    obs.bbox.u_min = u(rng);
    obs.bbox.v_min = v(rng);
    obs.bbox.u_max = std::min(640.0, obs.bbox.u_min + sz(rng));
    obs.bbox.v_max = std::min(480.0, obs.bbox.v_min + sz(rng));
    obs.depth = d(rng);
    obs.class_dist = ClassDistribution::certain("cup");
    const Aabb3 box = observation_to_world_aabb(obs, pose, k);
    const Aabb3 expected = oracle::observation_hull(obs, pose, k, 0.02, 1.0);
    EXPECT_LT((box.min() - expected.min()).norm(), 1e-9);
    EXPECT_LT((box.max() - expected.max()).norm(), 1e-9);
  }
}

TEST(WorldBox, DepthExtentIsClamped) {
  EXPECT_DOUBLE_EQ(depth_half_extent(0.2, 0.1), 0.075);
  EXPECT_DOUBLE_EQ(depth_half_extent(0.01, 0.01), 0.02);
  EXPECT_DOUBLE_EQ(depth_half_extent(4, 4), 1.0);
}

TEST(WorldBox, CornersEnumerateAllExtremes) {
  const Aabb3 box(Vector3(0, 1, 2), Vector3(3, 4, 5));
  const auto c = corners(box);
  EXPECT_EQ(c[0], Vector3(0, 1, 2));
  EXPECT_EQ(c[7], Vector3(3, 4, 5));
  EXPECT_EQ(c[5], Vector3(3, 1, 5));
}

TEST(WorldBox, FloatInstantiation) {
  const Aabb3T<float> box(Vector3T<float>(0, 0, 0), Vector3T<float>(1, 1, 1));
  EXPECT_EQ(corners(box)[7], Vector3T<float>(1, 1, 1));
  Eigen::Vector2f px(100.f, 100.f);
  EXPECT_NEAR((project(CameraIntrinsics{}, back_project(CameraIntrinsics{}, px, 2.f)) - px).norm(), 0.f, 1e-3f);
}

}  // namespace
}  // namespace cogmap
