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

#include "radarnet/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "radarnet/error.hpp"

namespace radarnet {

double normalize_angle(double radians) {
  double a = std::remainder(radians, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  const double c = std::cos(a.yaw);
  const double s = std::sin(a.yaw);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y, normalize_angle(a.yaw + b.yaw), a.t + b.t};
}

Pose2 invert(const Pose2& p) {
  const double c = std::cos(p.yaw);
  const double s = std::sin(p.yaw);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), normalize_angle(-p.yaw), -p.t};
}

Point2 transform_point(const Pose2& p, Point2 q) {
  const double c = std::cos(p.yaw);
  const double s = std::sin(p.yaw);
  return {p.x + c * q.x - s * q.y, p.y + s * q.x + c * q.y};
}

GridSpec::GridSpec(int size_px, double range_m) : size_px_(size_px), range_m_(range_m) {
  if (size_px <= 0) throw ConfigError("grid size must be positive");
  if (!(range_m > 0.0) || !std::isfinite(range_m)) throw ConfigError("grid range must be positive and finite");
  resolution_ = 2.0 * range_m_ / size_px_;
}

GridSpec GridSpec::downsampled(int factor) const {
  if (factor <= 0 || size_px_ % factor != 0) {
    throw ConfigError("grid size " + std::to_string(size_px_) + " not divisible by " + std::to_string(factor));
  }
  return GridSpec(size_px_ / factor, range_m_);
}

std::optional<Cell> world_to_grid(Point2 p, const GridSpec& grid) {
  const double res = grid.resolution_mpp();
  const double fc = std::floor((p.x + grid.range_m()) / res);
  const double fr = std::floor((grid.range_m() - p.y) / res);
  const double n = grid.width_px();
  if (!(fc >= 0.0 && fc < n && fr >= 0.0 && fr < n)) return std::nullopt;
  return Cell{static_cast<int>(fr), static_cast<int>(fc)};
}

Point2 cell_center(Cell c, const GridSpec& grid) {
  const double res = grid.resolution_mpp();
  return {(c.col + 0.5) * res - grid.range_m(), grid.range_m() - (c.row + 0.5) * res};
}

bool OrientedBox::contains(Point2 p) const noexcept {
  const double dx = p.x - cx;
  const double dy = p.y - cy;
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::abs(u) <= 0.5 * length && std::abs(v) <= 0.5 * width;
}

std::array<Point2, 4> OrientedBox::corners() const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  auto at = [&](double u, double v) { return Point2{cx + c * u - s * v, cy + s * u + c * v}; };
  return {at(hl, -hw), at(hl, hw), at(-hl, hw), at(-hl, -hw)};
}

double polygon_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    acc += a.x * b.y - b.x * a.y;
  }
  return 0.5 * acc;
}

namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

Point2 segment_line_intersection(Point2 p, Point2 q, Point2 a, Point2 b) {
  const double d1 = cross(a, b, p);
  const double d2 = cross(a, b, q);
  const double t = d1 / (d1 - d2);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

Polygon to_polygon(const OrientedBox& b) {
  const auto c = b.corners();
  return Polygon(c.begin(), c.end());
}

}  // namespace

// Sutherland-Hodgman.
Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Point2 a = clip[e];
    const Point2 b = clip[(e + 1) % m];
    Polygon in = std::move(out);
    out.clear();
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 p = in[i];
      const Point2 q = in[(i + 1) % n];
      const bool p_in = cross(a, b, p) >= 0.0;
      const bool q_in = cross(a, b, q) >= 0.0;
      if (p_in) out.push_back(p);
      if (p_in != q_in) out.push_back(segment_line_intersection(p, q, a, b));
    }
  }
  return out;
}

double intersection_area(const OrientedBox& a, const OrientedBox& b) {
  if (a.area() <= 0.0 || b.area() <= 0.0) return 0.0;
  const Polygon clipped = clip_convex(to_polygon(a), to_polygon(b));
  if (clipped.size() < 3) return 0.0;
  return std::max(0.0, polygon_area(clipped));
}

double rotated_iou(const OrientedBox& a, const OrientedBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) { return intersection_area(a, b) > 1e-12; }

}  // namespace radarnet
