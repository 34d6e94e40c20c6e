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
#include <cstddef>
#include <optional>
#include <vector>

namespace radarnet {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

/// Planar rigid transform with a timestamp. Composition adds timestamps so
/// that a relative transform carries the time offset between its endpoints.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double t = 0.0;

  static Pose2 identity() { return {}; }
};

/// a ∘ b: apply b, then a.
Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 invert(const Pose2& p);

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

Point2 transform_point(const Pose2& p, Point2 q);

struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Square BEV raster centred on the ego vehicle. +x (vehicle front) runs
/// along increasing column, +y along decreasing row.
class GridSpec {
 public:
  GridSpec(int size_px, double range_m);

  /// 800 x 800 px over +-100 m.
  static GridSpec full_scale() { return GridSpec(800, 100.0); }

  int width_px() const noexcept { return size_px_; }
  int height_px() const noexcept { return size_px_; }
  int cell_count() const noexcept { return size_px_ * size_px_; }
  double range_m() const noexcept { return range_m_; }
  double resolution_mpp() const noexcept { return resolution_; }

  /// Same extent, `factor` times coarser. Throws ConfigError if the size is
  /// not divisible.
  GridSpec downsampled(int factor) const;

  bool contains(Cell c) const noexcept {
    return c.row >= 0 && c.col >= 0 && c.row < size_px_ && c.col < size_px_;
  }
  int flat_index(Cell c) const noexcept { return c.row * size_px_ + c.col; }
  Cell cell_of(int flat) const noexcept { return {flat / size_px_, flat % size_px_}; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.size_px_ == b.size_px_ && a.range_m_ == b.range_m_;
  }

 private:
  int size_px_;
  double range_m_;
  double resolution_;
};

/// Cell containing a world point, or nullopt when outside the raster.
std::optional<Cell> world_to_grid(Point2 p, const GridSpec& grid);

/// World coordinates of the cell centre.
Point2 cell_center(Cell c, const GridSpec& grid);

/// Oriented rectangle. `length` runs along the heading `yaw`, `width` across it.
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double width = 0.0;
  double length = 0.0;
  double yaw = 0.0;

  double area() const noexcept { return width * length; }
  /// Inclusive of the boundary.
  bool contains(Point2 p) const noexcept;
  /// Counter-clockwise corners.
  std::array<Point2, 4> corners() const;
};

using Polygon = std::vector<Point2>;

/// Signed shoelace area (positive for counter-clockwise).
double polygon_area(const Polygon& poly);

/// Clips convex `subject` by convex counter-clockwise `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

double intersection_area(const OrientedBox& a, const OrientedBox& b);
double rotated_iou(const OrientedBox& a, const OrientedBox& b);

/// True when the two boxes share interior area.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

}  // namespace radarnet
