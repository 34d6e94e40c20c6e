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
#include <span>
#include <vector>

#include "radarnet/decode.hpp"
#include "radarnet/geometry.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/rdm.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet::plot {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Image(int w, int h, Rgb fill = {0, 0, 0});
  void set(int row, int col, Rgb c);
  Rgb get(int row, int col) const;
};

/// Deterministic 8-bit RGB PNG. Throws DataError on I/O failure.
void save_png(const std::filesystem::path& path, const Image& img);

/// Low values dark, then red, then yellow at 1.
Rgb heat(double p);
Rgb class_color(int channel);
Rgb state_color(labelgen::FreeState s);

/// Grayscale view of one channel, values clamped to [0,1].
Image render_channel(const Tensor3& t, int channel);
Image render_class_map(const Tensor3& class_map);
Image render_freespace(const labelgen::FreespaceTarget& target);
Image render_occupancy(const decode::OccupancyMap& occ);

/// Box outlines in grid coordinates of `grid` (the image must match it).
void draw_box(Image& img, const GridSpec& grid, const OrientedBox& box, Rgb color);
/// Free-space boundary points p_ref + d_f * (cos phi_f, sin phi_f).
void draw_rdm(Image& img, const GridSpec& grid, const rdm::RadialDistanceMap& rdm, Point2 p_ref, Rgb color);

}  // namespace radarnet::plot
