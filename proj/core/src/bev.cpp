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

#include "radarnet/bev.hpp"

#include <algorithm>
#include <cmath>

#include "radarnet/error.hpp"

namespace radarnet::bev {

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::kDoppler: return "doppler";
    case Feature::kElevation: return "elevation";
    case Feature::kRcs: return "rcs";
    case Feature::kAzimuth: return "azimuth";
    case Feature::kAge: return "age";
  }
  return "unknown";
}

void FeatureRanges::validate() const {
  for (int i = 0; i < kNumFeatures; ++i) {
    const auto& r = ranges[i];
    if (!(r.max > r.min) || !std::isfinite(r.min) || !std::isfinite(r.max)) {
      throw ConfigError("feature range for " + std::string(feature_name(static_cast<Feature>(i))) +
                        " must satisfy max > min");
    }
  }
}

double normalize(double value, double min, double max) {
  if (!(max > min)) throw ConfigError("normalization range requires max > min");
  return (std::clamp(value, min, max) - min) / (max - min);
}

double raw_feature(const ingest::CompensatedPeak& p, Feature f) {
  switch (f) {
    case Feature::kDoppler: return p.doppler;
    case Feature::kElevation: return p.elevation;
    case Feature::kRcs: return p.rcs;
    case Feature::kAzimuth: return p.azimuth;
    case Feature::kAge: return p.age;
  }
  return 0.0;
}

BevTensor rasterize(std::span<const ingest::CompensatedPeak> peaks, const GridSpec& grid,
                    const FeatureRanges& ranges) {
  ranges.validate();
  const std::size_t cells = static_cast<std::size_t>(grid.cell_count());
  std::vector<double> sums(cells * kNumFeatures, 0.0);
  BevTensor out{Tensor3(kNumFeatures, grid.height_px(), grid.width_px()), std::vector<int>(cells, 0), grid, 0};

  for (const auto& p : peaks) {
    const auto cell = world_to_grid({p.x, p.y}, grid);
    if (!cell) {
      ++out.skipped;
      continue;
    }
    const std::size_t idx = static_cast<std::size_t>(grid.flat_index(*cell));
    ++out.counts[idx];
    for (int f = 0; f < kNumFeatures; ++f) sums[idx * kNumFeatures + f] += raw_feature(p, static_cast<Feature>(f));
  }

  for (std::size_t idx = 0; idx < cells; ++idx) {
    const int n = out.counts[idx];
    if (n == 0) continue;
    for (int f = 0; f < kNumFeatures; ++f) {
      const auto& r = ranges.ranges[f];
      const double mean = sums[idx * kNumFeatures + f] / n;
      out.tensor.channel(f)[idx] = static_cast<float>(normalize(mean, r.min, r.max));
    }
  }
  return out;
}

}  // namespace radarnet::bev
