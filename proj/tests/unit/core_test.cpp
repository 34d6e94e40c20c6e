// Copyright 2026 The radarnet Authors
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

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "radarnet/error.hpp"
#include "radarnet/geometry.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet {
namespace {

void expect_pose_near(const Pose2& a, const Pose2& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(normalize_angle(a.yaw - b.yaw), 0.0, tol);
  EXPECT_NEAR(a.t, b.t, tol);
}

Pose2 random_pose(oracle::Rng& rng) {
  return {oracle::uniform(rng, -50, 50), oracle::uniform(rng, -50, 50), oracle::uniform(rng, -kPi, kPi),
          oracle::uniform(rng, 0, 10)};
}

TEST(Pose, ComposeExamples) {
  const Pose2 p{1.5, -2.0, 0.3, 0.0};
  expect_pose_near(compose(Pose2::identity(), p), p, 0.0);
  expect_pose_near(compose({1, 0, 0, 0}, {2, 3, 0, 0}), {3, 3, 0, 0}, 0.0);
  expect_pose_near(compose({0, 0, kPi / 2, 0}, {1, 0, 0, 0}), {0, 1, kPi / 2, 0}, 1e-15);
}

TEST(Pose, YawIsNormalized) {
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi + 0.1), -kPi + 0.1, 1e-12);
  const Pose2 c = compose({0, 0, 3.0, 0}, {0, 0, 3.0, 0});
  EXPECT_GT(c.yaw, -kPi);
  EXPECT_LE(c.yaw, kPi);
}

TEST(Pose, InverseAndAssociativity) {
  oracle::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Pose2 a = random_pose(rng), b = random_pose(rng), c = random_pose(rng);
    expect_pose_near(compose(a, invert(a)), Pose2::identity(), 1e-9);
    expect_pose_near(compose(compose(a, b), c), compose(a, compose(b, c)), 1e-9);
    // Not bit-exact in IEEE arithmetic; see the decisions ledger.
    expect_pose_near(invert(invert(a)), a, 1e-12);
  }
}

TEST(Grid, ResolutionAndValidation) {
  EXPECT_EQ(GridSpec::full_scale().resolution_mpp(), 0.25);
  EXPECT_EQ(GridSpec(256, 32.0).resolution_mpp(), 0.25);
  EXPECT_THROW(GridSpec(0, 1.0), ConfigError);
  EXPECT_THROW(GridSpec(8, 0.0), ConfigError);
  EXPECT_THROW(GridSpec(10, 1.0).downsampled(4), ConfigError);
  EXPECT_EQ(GridSpec(800, 100.0).downsampled(4), GridSpec(200, 100.0));
}

TEST(Grid, WorldToGridExamples) {
  const GridSpec g(8, 1.0);
  EXPECT_EQ(world_to_grid({0, 0}, g), (Cell{4, 4}));
  EXPECT_EQ(world_to_grid({0.3, 0.1}, g), (Cell{3, 5}));
  EXPECT_FALSE(world_to_grid({1.5, 0}, g).has_value());
  EXPECT_FALSE(world_to_grid({1.0, 0}, g).has_value());
  EXPECT_EQ(world_to_grid({-1.0, 0.99}, g), (Cell{0, 0}));
}

TEST(Grid, CellCenterRoundTrip) {
  oracle::Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const GridSpec g(oracle::uniform_int(rng, 1, 300), oracle::uniform(rng, 0.5, 150));
    const Point2 p{oracle::uniform(rng, -g.range_m(), g.range_m()), oracle::uniform(rng, -g.range_m(), g.range_m())};
    const auto c = world_to_grid(p, g);
    if (!c) continue;
    const Point2 q = cell_center(*c, g);
    const double bound = g.resolution_mpp() / std::sqrt(2.0);
    EXPECT_LT(std::abs(q.x - p.x), bound);
    EXPECT_LT(std::abs(q.y - p.y), bound);
    EXPECT_EQ(world_to_grid(q, g), c);
  }
}

TEST(Box, ContainsAndIou) {
  const OrientedBox b{1.0, 2.0, 2.0, 4.0, 0.0};
  EXPECT_TRUE(b.contains({3.0, 2.0}));  // boundary
  EXPECT_FALSE(b.contains({3.01, 2.0}));
  EXPECT_NEAR(rotated_iou(b, b), 1.0, 1e-12);
  EXPECT_NEAR(rotated_iou(b, {3.0, 2.0, 2.0, 4.0, 0.0}), 4.0 / 12.0, 1e-12);
  EXPECT_EQ(rotated_iou(b, {30.0, 2.0, 2.0, 4.0, 0.0}), 0.0);
  // A square rotated by 45 degrees inside itself.
  const OrientedBox sq{0, 0, 2, 2, 0}, diamond{0, 0, 2, 2, kPi / 4};
  EXPECT_NEAR(intersection_area(sq, diamond), 8.0 * (std::sqrt(2.0) - 1.0), 1e-12);
}

TEST(Tensor, BevtRoundTripAndRejects) {
  Tensor3 t(2, 3, 4);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = static_cast<float>(i) * 0.5f - 1.0f;
  std::stringstream ss;
  write_bevt(ss, t);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 4), "BEVT");
  EXPECT_EQ(bytes.size(), 4u + 1u + 12u + 4u * t.size());
  EXPECT_EQ(read_bevt(ss), t);

  std::stringstream bad("BEVX");
  EXPECT_THROW(read_bevt(bad), DataError);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_bevt(truncated), DataError);
}

}  // namespace
}  // namespace radarnet
