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


#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "radarnet/geometry.hpp"
#include "radarnet/ingest.hpp"
#include "radarnet/labelgen.hpp"

namespace radarnet::synth {

struct IntRange {
  int min = 0;
  int max = 0;
};

struct ClassSensorModel {
  double peak_k = 0.0;  // expected peaks per sweep at 1 m; rate is k / range
  double rcs_mean = 0.0;
  double rcs_sigma = 0.0;
};

struct SceneConfig {
  std::uint64_t seed = 1;
  IntRange vehicles{3, 12};
  IntRange pedestrians{0, 4};
  IntRange cyclists{0, 3};
  IntRange structures{2, 8};  // static, unlabeled
  double ego_speed_min = 0.0;
  double ego_speed_max = 15.0;
  double ego_yaw_rate_max = 0.1;
  double spawn_range_min = 4.0;
  double spawn_range_max = 98.0;
  int max_spawn_retries = 200;

  double window_s = 0.5;
  double sweep_period_s = 0.05;
  std::array<ClassSensorModel, kNumObstacleClasses> classes{{{40.0, 10.0, 5.0}, {8.0, -5.0, 4.0}, {12.0, 0.0, 4.0}}};
  ClassSensorModel structure{15.0, 5.0, 5.0};
  double max_peaks_per_sweep = 6.0;
  double doppler_sigma = 0.1;
  double clutter_rate = 3.0;  // uniform clutter peaks per sweep
  double clutter_range = 100.0;
  double clutter_rcs_mean = -35.0;
  double clutter_rcs_sigma = 8.0;
  double dropout = 0.05;
  int radar_sensors = 8;

  int lidar_beams = 1800;
  double lidar_range = 100.0;

  /// Throws ConfigError.
  void validate() const;
};

/// A box moving with constant velocity plus a small constant acceleration.
struct Track {
  int id = 0;
  bool labeled = true;
  ObstacleClass cls = ObstacleClass::kVehicle;
  double width = 0.0;
  double length = 0.0;
  double yaw = 0.0;
  Point2 p0;  // world position at t0
  Point2 v;   // world velocity at t0
  Point2 a;

  OrientedBox box_at(double dt) const;
  Point2 velocity_at(double dt) const;
};

/// Ego moving on a constant-curvature arc.
struct EgoMotion {
  Pose2 start;  // world pose at t0
  double speed = 0.0;
  double yaw_rate = 0.0;

  Pose2 at(double dt) const;
  Point2 velocity_at(double dt) const;
};

struct Scene {
  std::uint64_t seed = 0;
  double t0 = 0.0;
  double t_ref = 0.0;  // frame reference time, labels live in the rig frame here
  EgoMotion ego;
  std::vector<Track> tracks;  // labeled obstacles, then static structures

  Pose2 ego_pose(double t) const;
  /// Sampled trajectory covering [t0, t_ref] at the sweep period.
  std::vector<Pose2> trajectory(double period) const;
  /// Labeled boxes in the rig frame at t.
  std::vector<labelgen::ObstacleLabel> labels_at(double t) const;
};

/// Mixes a base seed with an index (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Scene for one frame; t0 = frame index, t_ref = t0 + window.
Scene gen_scene(const SceneConfig& cfg, std::uint64_t frame_index = 0);

struct SimulatedPeak {
  ingest::RadarPeak peak;
  int object_id = -1;  // track id, -1 for clutter
};

/// One sweep at time t, in the rig frame at t. Doppler is positive for approaching targets.
std::vector<SimulatedPeak> simulate_radar(const Scene& scene, const SceneConfig& cfg, double t);
labelgen::LidarScan simulate_lidar(const Scene& scene, const SceneConfig& cfg, double t);

/// Distance along a ray from `origin` in direction `dir` (unit) to the box, if hit.
std::optional<double> ray_box_distance(Point2 origin, Point2 dir, const OrientedBox& box);

struct Frame {
  double t_ref = 0.0;
  std::vector<ingest::RadarPeak> peaks;
  std::vector<Pose2> poses;
  std::vector<labelgen::ObstacleLabel> labels;
  labelgen::LidarScan lidar;
};

Frame gen_frame(const SceneConfig& cfg, std::uint64_t frame_index);

struct Manifest {
  std::uint64_t seed = 0;
  int frames = 0;
  std::vector<int> train;
  std::vector<int> test;
  std::vector<std::pair<std::string, std::string>> config;  // flat key/value snapshot
};

std::filesystem::path frame_path(const std::filesystem::path& dataset, int index, const char* kind);
void write_frame(const std::filesystem::path& dataset, int index, const Frame& f);
/// t_ref is the newest pose time. Throws DataError on missing or malformed files.
Frame read_frame(const std::filesystem::path& dataset, int index);

void write_manifest(const std::filesystem::path& dataset, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& dataset);

/// First round(train_fraction * n) frames train, the rest test.
Manifest make_manifest(std::uint64_t seed, int frames, double train_fraction);

}  // namespace radarnet::synth
