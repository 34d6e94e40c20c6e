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
#include <span>
#include <string_view>
#include <vector>

#include "radarnet/geometry.hpp"
#include "radarnet/ingest.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet::bev {

/// Input channel order.
enum class Feature : int { kDoppler = 0, kElevation = 1, kRcs = 2, kAzimuth = 3, kAge = 4 };
inline constexpr int kNumFeatures = 5;

std::string_view feature_name(Feature f);

struct ValueRange {
  double min = 0.0;
  double max = 1.0;
};

/// Per-feature normalization bounds (sensor hardware limits).
struct FeatureRanges {
  std::array<ValueRange, kNumFeatures> ranges{{
      {-30.0, 30.0},   // doppler, m/s
      {-0.35, 0.35},   // elevation, rad
      {-40.0, 30.0},   // rcs, dBm
      {-kPi, kPi},     // azimuth, rad
      {0.0, 0.5},      // age, s
  }};

  const ValueRange& operator[](Feature f) const { return ranges[static_cast<int>(f)]; }
  ValueRange& operator[](Feature f) { return ranges[static_cast<int>(f)]; }

  /// Throws ConfigError unless max > min for every feature.
  void validate() const;
};

/// (clamp(value) - min) / (max - min). Throws ConfigError when max <= min.
double normalize(double value, double min, double max);

/// Raw feature value of a peak in channel order.
double raw_feature(const ingest::CompensatedPeak& p, Feature f);

struct BevTensor {
  Tensor3 tensor;          // kNumFeatures x rows x cols
  std::vector<int> counts;  // peaks per cell, row-major
  GridSpec grid;
  std::size_t skipped = 0;  // peaks outside the raster
};

/// Averages raw features per cell (accumulated in double), then normalizes.
BevTensor rasterize(std::span<const ingest::CompensatedPeak> peaks, const GridSpec& grid,
                    const FeatureRanges& ranges = {});

}  // namespace radarnet::bev
