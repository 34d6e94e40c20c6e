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
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "radarnet/geometry.hpp"
#include "radarnet/ingest.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet {

enum class ObstacleClass : int { kVehicle = 0, kPedestrian = 1, kCyclist = 2 };
inline constexpr int kNumObstacleClasses = 3;
/// Class-head channel used for background.
inline constexpr int kBackgroundChannel = 3;
inline constexpr int kNumClassChannels = 4;

std::string_view class_name(ObstacleClass c);
/// Throws DataError for unknown names.
ObstacleClass parse_class(std::string_view name);

}  // namespace radarnet

namespace radarnet::labelgen {

struct ObstacleLabel {
  ObstacleClass cls = ObstacleClass::kVehicle;
  double cx = 0.0;
  double cy = 0.0;
  double w0 = 0.0;  // width, m
  double l0 = 0.0;  // length along the heading, m
  double yaw = 0.0;
  int peak_count = 0;

  OrientedBox box() const { return {cx, cy, w0, l0, yaw}; }
};

/// JSON-lines `cls,cx,cy,w0,l0,yaw` (+ optional `peak_count`).
std::vector<ObstacleLabel> load_labels(std::istream& is);
void write_labels(std::ostream& os, std::span<const ObstacleLabel> labels);

struct TransferParams {
  int min_vehicle_peaks = 4;
  double max_filter_range_m = 70.0;
};

/// Counts interior peaks per label, drops sparse nearby vehicles and labels
/// entirely outside the grid.
std::vector<ObstacleLabel> transfer_labels(std::span<const ObstacleLabel> labels,
                                           std::span<const ingest::CompensatedPeak> peaks, const GridSpec& grid,
                                           const TransferParams& params = {});

/// Head resolution relative to the input raster.
inline constexpr int kHeadStride = 4;
inline constexpr int kFreespaceStride = 2;

/// Per-pixel ownership at head resolution.
struct ClassTarget {
  GridSpec head_grid;
  std::vector<int> owner;                    // label index or -1 (background), row-major
  std::vector<std::vector<int>> foreground;  // per label: flat head pixels, ascending
  std::vector<bool> trainable;               // foreground non-empty

  /// Class channel (0..2 for obstacles, kBackgroundChannel otherwise).
  int class_channel(int pixel, std::span<const ObstacleLabel> labels) const {
    const int o = owner[static_cast<std::size_t>(pixel)];
    return o < 0 ? kBackgroundChannel : static_cast<int>(labels[static_cast<std::size_t>(o)].cls);
  }
  /// 1-channel map of class channels, for storage and plotting.
  Tensor3 class_map(std::span<const ObstacleLabel> labels) const;
};

ClassTarget make_class_target(std::span<const ObstacleLabel> labels, const GridSpec& grid);

/// Regression channel order.
enum class RegChannel : int { kDx = 0, kDy = 1, kW0 = 2, kL0 = 3, kSin = 4, kCos = 5 };
inline constexpr int kNumRegChannels = 6;

/// [dx, dy, w0, l0, sin(yaw), cos(yaw)] on foreground pixels, zero elsewhere.
/// dx/dy are centroid minus pixel centre along world +x/+y, in head pixels.
Tensor3 make_regression_target(std::span<const ObstacleLabel> labels, const ClassTarget& target);
Tensor3 make_regression_target(std::span<const ObstacleLabel> labels, const GridSpec& grid);

struct LidarScan {
  struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool is_ground = false;
  };
  std::vector<Point> points;
};

std::vector<LidarScan::Point> load_lidar(std::istream& is);
void write_lidar(std::ostream& os, const LidarScan& scan);

enum class FreeState : std::uint8_t { kFree = 0, kOccupied = 1, kUnobserved = 2, kPartiallyObserved = 3 };

struct ProbWeight {
  float prob = 0.0f;
  float weight = 0.0f;
};

/// Training encoding of a free-space state.
ProbWeight prob_weight(FreeState s);

struct FreespaceTarget {
  GridSpec grid;  // half input resolution
  std::vector<FreeState> states;

  FreeState at(Cell c) const { return states[static_cast<std::size_t>(grid.flat_index(c))]; }

  /// 1-channel BEVT encoding {0=Free,1=Occupied,2=Unobserved,3=PartiallyObserved}.
  Tensor3 to_tensor() const;
  /// Throws DataError on unknown codes or shape mismatch.
  static FreespaceTarget from_tensor(const Tensor3& t, const GridSpec& grid);
};

enum class RayState : std::uint8_t { kFree, kOccupied, kUnobserved };

struct TraceParams {
  int n_rays = 1440;
};

/// One traced ray: the distinct cells it visits in order of increasing range
/// with their per-ray state.
struct RayTrace {
  double angle = 0.0;
  std::vector<int> cells;
  std::vector<RayState> states;
};

/// Ray angle phi_k = -pi + (k + 0.5) * 2pi / n_rays; samples sit at
/// (s + 0.5) * step with step = half the target resolution, out to the grid
/// half-extent. A ray's hit sample is floor(r / step) of its nearest
/// non-ground point in the angular bin [-pi + k*dphi, -pi + (k+1)*dphi).
std::vector<RayTrace> trace_rays(const LidarScan& scan, const GridSpec& target_grid, const TraceParams& params = {});

/// Four-state free-space target at half the input resolution. Label boxes
/// are stamped Occupied on top of the ray evidence.
FreespaceTarget trace_freespace(const LidarScan& scan, std::span<const ObstacleLabel> labels, const GridSpec& grid,
                                const TraceParams& params = {});

}  // namespace radarnet::labelgen
