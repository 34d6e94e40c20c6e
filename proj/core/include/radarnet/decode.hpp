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
#include <iosfwd>
#include <vector>

#include "radarnet/geometry.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/model.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet::decode {

struct Detection {
  ObstacleClass cls = ObstacleClass::kVehicle;
  double score = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double w0 = 0.0;
  double l0 = 0.0;
  double yaw = 0.0;

  OrientedBox box() const { return {cx, cy, w0, l0, yaw}; }
};

/// Per-class score thresholds indexed by ObstacleClass.
using Thresholds = std::array<double, kNumObstacleClasses>;
inline constexpr Thresholds kDefaultThresholds{0.5, 0.3, 0.3};
inline constexpr double kMinExtent = 0.1;

/// `input_grid` is the raster the network consumed; heads are at a quarter of it.
/// Detections come out ordered by class, then by flat head pixel.
std::vector<Detection> decode_obstacles(const model::HeadOutputs& out, const Thresholds& thresholds,
                                        const GridSpec& input_grid);

struct OccupancyMap {
  GridSpec grid;
  std::vector<float> prob;  // row-major

  float at(Cell c) const { return prob[static_cast<std::size_t>(grid.flat_index(c))]; }
  Tensor3 to_tensor() const;
  /// Throws DataError on a shape mismatch or values outside [0,1].
  static OccupancyMap from_tensor(const Tensor3& t, const GridSpec& grid);
};

/// Occupied probability: softmax of the two free-space channels, channel 0.
OccupancyMap occupancy_prob(const model::HeadOutputs& out, const GridSpec& input_grid);

std::vector<Detection> load_detections(std::istream& is);
void write_detections(std::ostream& os, const std::vector<Detection>& dets);

}  // namespace radarnet::decode
