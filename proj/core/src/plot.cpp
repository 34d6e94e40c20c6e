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

#include "radarnet/plot.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "radarnet/error.hpp"

namespace radarnet::plot {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < rgb.size(); i += 3) std::copy(fill.begin(), fill.end(), rgb.begin() + i);
}

void Image::set(int row, int col, Rgb c) {
  if (row < 0 || col < 0 || row >= height || col >= width) return;
  std::copy(c.begin(), c.end(), rgb.begin() + (static_cast<std::ptrdiff_t>(row) * width + col) * 3);
}

Rgb Image::get(int row, int col) const {
  const auto* p = rgb.data() + (static_cast<std::ptrdiff_t>(row) * width + col) * 3;
  return {p[0], p[1], p[2]};
}

void save_png(const std::filesystem::path& path, const Image& img) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw DataError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    std::fclose(fp);
    throw DataError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw DataError("failed to encode " + path.string());
  }
  png_init_io(png, fp);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r) {
    png_write_row(png, img.rgb.data() + static_cast<std::size_t>(r) * img.width * 3);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw DataError("failed to close " + path.string());
}

namespace {

std::uint8_t byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

}  // namespace

Rgb heat(double p) {
  p = std::clamp(p, 0.0, 1.0);
  return {byte(2.0 * p), byte(2.0 * p - 1.0), 0};
}

Rgb class_color(int channel) {
  switch (channel) {
    case 0: return {230, 60, 60};
    case 1: return {60, 200, 80};
    case 2: return {70, 120, 240};
    default: return {0, 0, 0};
  }
}

Rgb state_color(labelgen::FreeState s) {
  switch (s) {
    case labelgen::FreeState::kFree: return {40, 160, 60};
    case labelgen::FreeState::kOccupied: return {220, 40, 40};
    case labelgen::FreeState::kPartiallyObserved: return {230, 200, 60};
    case labelgen::FreeState::kUnobserved: return {40, 40, 40};
  }
  return {0, 0, 0};
}

Image render_channel(const Tensor3& t, int channel) {
  Image img(t.cols(), t.rows());
  for (int r = 0; r < t.rows(); ++r) {
    for (int c = 0; c < t.cols(); ++c) {
      const auto v = byte(t.at(channel, r, c));
      img.set(r, c, {v, v, v});
    }
  }
  return img;
}

Image render_class_map(const Tensor3& class_map) {
  Image img(class_map.cols(), class_map.rows());
  for (int r = 0; r < class_map.rows(); ++r) {
    for (int c = 0; c < class_map.cols(); ++c) img.set(r, c, class_color(static_cast<int>(class_map.at(0, r, c))));
  }
  return img;
}

Image render_freespace(const labelgen::FreespaceTarget& target) {
  Image img(target.grid.width_px(), target.grid.height_px());
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) img.set(r, c, state_color(target.at({r, c})));
  }
  return img;
}

Image render_occupancy(const decode::OccupancyMap& occ) {
  Image img(occ.grid.width_px(), occ.grid.height_px());
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) img.set(r, c, heat(occ.at({r, c})));
  }
  return img;
}

namespace {

void draw_segment(Image& img, const GridSpec& grid, Point2 a, Point2 b, Rgb color) {
  const double res = grid.resolution_mpp();
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * len / res)));
  for (int i = 0; i <= steps; ++i) {
    const double s = static_cast<double>(i) / steps;
    if (const auto cell = world_to_grid({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}, grid)) {
      img.set(cell->row, cell->col, color);
    }
  }
}

}  // namespace

void draw_box(Image& img, const GridSpec& grid, const OrientedBox& box, Rgb color) {
  const auto c = box.corners();
  for (int k = 0; k < 4; ++k) draw_segment(img, grid, c[k], c[(k + 1) % 4], color);
}

void draw_rdm(Image& img, const GridSpec& grid, const rdm::RadialDistanceMap& rdm, Point2 p_ref, Rgb color) {
  const int n = rdm.n_phi();
  auto point = [&](int k) {
    const double phi = rdm.phi(k);
    const double d = rdm.d[static_cast<std::size_t>(k)];
    return Point2{p_ref.x + d * std::cos(phi), p_ref.y + d * std::sin(phi)};
  };
  for (int k = 0; k < n; ++k) draw_segment(img, grid, point(k), point((k + 1) % n), color);
}

}  // namespace radarnet::plot
