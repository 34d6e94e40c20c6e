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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "radarnet/error.hpp"
#include "radarnet/pipeline.hpp"
#include "radarnet/synth.hpp"

namespace radarnet::synth {
namespace {

Track box_track(int id, ObstacleClass cls, Point2 p, Point2 v = {0.0, 0.0}) {
  Track t;
  t.id = id;
  t.cls = cls;
  t.width = 2.0;
  t.length = 4.0;
  t.p0 = p;
  t.v = v;
  return t;
}

Scene static_scene(std::vector<Track> tracks) {
  Scene s;
  s.seed = 77;
  s.t0 = 0.0;
  s.t_ref = 0.5;
  s.tracks = std::move(tracks);
  return s;
}

SceneConfig quiet() {
  SceneConfig cfg;
  cfg.clutter_rate = 0.0;
  cfg.dropout = 0.0;
  return cfg;
}

// Distance from a point to the boundary of a box.
double boundary_distance(Point2 p, const OrientedBox& b) {
  const double c = std::cos(b.yaw), s = std::sin(b.yaw);
  const double u = std::abs(c * (p.x - b.cx) + s * (p.y - b.cy)) - 0.5 * b.length;
  const double v = std::abs(-s * (p.x - b.cx) + c * (p.y - b.cy)) - 0.5 * b.width;
  if (u <= 0.0 && v <= 0.0) return std::min(-u, -v);
  return std::hypot(std::max(u, 0.0), std::max(v, 0.0));
}

TEST(Scene, Deterministic) {
  SceneConfig cfg;
  cfg.seed = 12;
  const auto a = gen_frame(cfg, 3), b = gen_frame(cfg, 3);
  ASSERT_EQ(a.peaks.size(), b.peaks.size());
  for (std::size_t i = 0; i < a.peaks.size(); ++i) {
    EXPECT_EQ(a.peaks[i].x, b.peaks[i].x);
    EXPECT_EQ(a.peaks[i].doppler, b.peaks[i].doppler);
  }
  ASSERT_EQ(a.labels.size(), b.labels.size());
  EXPECT_EQ(a.labels.front().cx, b.labels.front().cx);
  EXPECT_NE(gen_frame(cfg, 4).peaks.size() + 1000 * gen_frame(cfg, 4).labels.size(),
            a.peaks.size() + 1000 * a.labels.size());
}

TEST(Scene, NoVehicles) {
  SceneConfig cfg;
  cfg.vehicles = {0, 0};
  for (std::uint64_t f = 0; f < 20; ++f) {
    for (const auto& l : gen_scene(cfg, f).labels_at(f + cfg.window_s)) EXPECT_NE(l.cls, ObstacleClass::kVehicle);
  }
}

TEST(Scene, NoOverlappingSpawns) {
  SceneConfig cfg;
  int pairs = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    cfg.seed = seed;
    const Scene s = gen_scene(cfg, 0);
    std::vector<OrientedBox> boxes;
    for (const auto& t : s.tracks) boxes.push_back(t.box_at(s.t_ref - s.t0));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) pairs += boxes_overlap(boxes[i], boxes[j]);
    }
  }
  EXPECT_EQ(pairs, 0);
}

TEST(Scene, InfeasibleSpawnThrows) {
  SceneConfig cfg;
  cfg.vehicles = {400, 400};
  cfg.spawn_range_min = 4.0;
  cfg.spawn_range_max = 6.0;
  cfg.max_spawn_retries = 5;
  EXPECT_THROW(gen_scene(cfg, 0), ConfigError);
}

TEST(Scene, ConfigValidation) {
  SceneConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dropout = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.vehicles = {3, 1};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Radar, StaticObjectHasZeroDoppler) {
  auto cfg = quiet();
  const Scene s = static_scene({box_track(0, ObstacleClass::kVehicle, {8.0, 3.0})});
  int n = 0;
  for (int i = 0; i < 10; ++i) {
    for (const auto& p : simulate_radar(s, cfg, 0.05 * i)) {
      EXPECT_LT(std::abs(p.peak.doppler), 5.0 * cfg.doppler_sigma);
      ++n;
    }
  }
  EXPECT_GT(n, 0);
}

TEST(Radar, RecedingObjectHasNegativeDoppler) {
  auto cfg = quiet();
  cfg.doppler_sigma = 0.0;
  const Scene s = static_scene({box_track(0, ObstacleClass::kVehicle, {20.0, 0.0}, {10.0, 0.0})});
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < 10; ++i) {
    for (const auto& p : simulate_radar(s, cfg, 0.05 * i)) {
      EXPECT_LT(p.peak.doppler, -9.9);
      EXPECT_GE(p.peak.doppler, -10.0);
      sum += p.peak.doppler;
      ++n;
    }
  }
  ASSERT_GT(n, 0);
  EXPECT_NEAR(sum / n, -10.0, 0.05);
}

TEST(Radar, EmptyWithoutClutterOrObjects) {
  const Scene s = static_scene({});
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(simulate_radar(s, quiet(), 0.05 * i).empty());
}

TEST(Radar, PeaksNearObjectFaces) {
  SceneConfig cfg;
  int checked = 0;
  for (std::uint64_t f = 0; f < 30; ++f) {
    const Scene s = gen_scene(cfg, f);
    const double t = s.t_ref;
    const Pose2 to_rig = invert(s.ego_pose(t));
    for (const auto& sp : simulate_radar(s, cfg, t)) {
      if (sp.object_id < 0) continue;
      const auto it = std::find_if(s.tracks.begin(), s.tracks.end(), [&](const Track& tr) { return tr.id == sp.object_id; });
      ASSERT_NE(it, s.tracks.end());
      OrientedBox b = it->box_at(t - s.t0);
      const Point2 c = transform_point(to_rig, {b.cx, b.cy});
      b = {c.x, c.y, b.width, b.length, normalize_angle(b.yaw + to_rig.yaw)};
      ASSERT_LE(boundary_distance({sp.peak.x, sp.peak.y}, b), 0.5);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Lidar, EmptySceneIsGroundOnly) {
  const Scene s = static_scene({});
  const auto scan = simulate_lidar(s, quiet(), 0.5);
  EXPECT_EQ(scan.points.size(), static_cast<std::size_t>(quiet().lidar_beams));
  for (const auto& p : scan.points) EXPECT_TRUE(p.is_ground);
}

TEST(Lidar, BoxAtTenMetres) {
  // Near face at x = 10 spanning y in [-1, 1].
  const Scene s = static_scene({box_track(0, ObstacleClass::kVehicle, {12.0, 0.0})});
  const auto scan = simulate_lidar(s, quiet(), 0.5);
  int hits = 0;
  for (const auto& p : scan.points) {
    const double a = std::atan2(p.y, p.x);
    if (std::abs(a) < 0.09) {
      EXPECT_FALSE(p.is_ground);
      EXPECT_NEAR(p.x, 10.0, 1e-9);
      ++hits;
    } else if (std::abs(a) > 0.11) {
      EXPECT_TRUE(p.is_ground);
    }
  }
  EXPECT_GT(hits, 40);
}

TEST(Lidar, FarObjectOccluded) {
  const Scene s = static_scene(
      {box_track(0, ObstacleClass::kVehicle, {12.0, 0.0}), box_track(1, ObstacleClass::kVehicle, {30.0, 0.0})});
  const auto scan = simulate_lidar(s, quiet(), 0.5);
  for (const auto& p : scan.points) {
    if (!p.is_ground && std::abs(std::atan2(p.y, p.x)) < 0.09) EXPECT_LT(p.x, 11.0);
  }
}

TEST(RayBox, Distances) {
  const OrientedBox b{12.0, 0.0, 2.0, 4.0, 0.0};
  EXPECT_NEAR(*ray_box_distance({0, 0}, {1, 0}, b), 10.0, 1e-12);
  EXPECT_FALSE(ray_box_distance({0, 0}, {-1, 0}, b).has_value());
  EXPECT_FALSE(ray_box_distance({0, 0}, {0, 1}, b).has_value());
}

TEST(Labels, NearbyVehiclesAverageFourPeaks) {
  SceneConfig cfg;
  pipeline::PrepareParams params;
  params.transfer.min_vehicle_peaks = 0;
  long peaks = 0, vehicles = 0;
  for (std::uint64_t f = 0; f < 20; ++f) {
    const auto prepared = pipeline::prepare_frame(gen_frame(cfg, f), params);
    for (const auto& l : prepared.labels) {
      if (l.cls != ObstacleClass::kVehicle || std::hypot(l.cx, l.cy) >= 70.0) continue;
      peaks += l.peak_count;
      ++vehicles;
    }
  }
  ASSERT_GT(vehicles, 20);
  EXPECT_GE(static_cast<double>(peaks) / vehicles, 4.0);
}

TEST(Dataset, FrameAndManifestRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "radarnet_synth_test";
  std::filesystem::remove_all(dir);
  SceneConfig cfg;
  const auto f = gen_frame(cfg, 2);
  write_frame(dir, 2, f);
  const auto back = read_frame(dir, 2);
  ASSERT_EQ(back.peaks.size(), f.peaks.size());
  EXPECT_EQ(back.peaks.back().rcs, f.peaks.back().rcs);
  EXPECT_EQ(back.labels.size(), f.labels.size());
  EXPECT_EQ(back.t_ref, f.t_ref);
  EXPECT_EQ(back.lidar.points.size(), f.lidar.points.size());

  const auto m = make_manifest(5, 10, 0.75);
  EXPECT_EQ(m.train.size(), 8u);
  EXPECT_EQ(m.test, (std::vector<int>{8, 9}));
  write_manifest(dir, m);
  const auto mb = read_manifest(dir);
  EXPECT_EQ(mb.train, m.train);
  EXPECT_EQ(mb.seed, 5u);
  EXPECT_THROW(read_frame(dir, 3), DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace radarnet::synth
