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

#include "radarnet/labelgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "jsonl.hpp"

namespace radarnet {

std::string_view class_name(ObstacleClass c) {
  switch (c) {
    case ObstacleClass::kVehicle: return "vehicle";
    case ObstacleClass::kPedestrian: return "pedestrian";
    case ObstacleClass::kCyclist: return "cyclist";
  }
  return "unknown";
}

ObstacleClass parse_class(std::string_view name) {
  for (int i = 0; i < kNumObstacleClasses; ++i) {
    if (class_name(static_cast<ObstacleClass>(i)) == name) return static_cast<ObstacleClass>(i);
  }
  throw DataError("unknown obstacle class '" + std::string(name) + "'");
}

}  // namespace radarnet

namespace radarnet::labelgen {

using detail::Json;

std::vector<ObstacleLabel> load_labels(std::istream& is) {
  std::vector<ObstacleLabel> out;
  detail::for_each_jsonl(is, [&](const Json& j, std::size_t line) {
    ObstacleLabel l;
    auto cls = j.find("cls");
    if (cls == j.end() || !cls->is_string()) {
      throw DataError("line " + std::to_string(line) + ": missing string field 'cls'");
    }
    try {
      l.cls = parse_class(cls->get<std::string>());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line) + ": " + e.what());
    }
    l.cx = detail::finite_field(j, "cx", line);
    l.cy = detail::finite_field(j, "cy", line);
    l.w0 = detail::finite_field(j, "w0", line);
    l.l0 = detail::finite_field(j, "l0", line);
    l.yaw = normalize_angle(detail::finite_field(j, "yaw", line));
    if (!(l.w0 > 0.0) || !(l.l0 > 0.0)) throw RejectedRecord(line, "box dimensions must be positive");
    if (j.contains("peak_count")) l.peak_count = static_cast<int>(detail::integer_field(j, "peak_count", line));
    out.push_back(l);
  });
  return out;
}

void write_labels(std::ostream& os, std::span<const ObstacleLabel> labels) {
  for (const auto& l : labels) {
    Json j = {{"cls", class_name(l.cls)}, {"cx", l.cx},   {"cy", l.cy},
              {"w0", l.w0},               {"l0", l.l0},   {"yaw", l.yaw},
              {"peak_count", l.peak_count}};
    os << j.dump() << '\n';
  }
}

std::vector<ObstacleLabel> transfer_labels(std::span<const ObstacleLabel> labels,
                                           std::span<const ingest::CompensatedPeak> peaks, const GridSpec& grid,
                                           const TransferParams& params) {
  const OrientedBox extent{0.0, 0.0, 2.0 * grid.range_m(), 2.0 * grid.range_m(), 0.0};
  std::vector<ObstacleLabel> out;
  for (ObstacleLabel l : labels) {
    const OrientedBox box = l.box();
    l.peak_count = static_cast<int>(std::count_if(peaks.begin(), peaks.end(), [&](const ingest::CompensatedPeak& p) {
      return box.contains({p.x, p.y});
    }));
    if (!boxes_overlap(box, extent)) continue;
    const double range = std::hypot(l.cx, l.cy);
    if (l.cls == ObstacleClass::kVehicle && range <= params.max_filter_range_m &&
        l.peak_count < params.min_vehicle_peaks) {
      continue;
    }
    out.push_back(l);
  }
  return out;
}

namespace {

// Visits every cell of `grid` whose centre lies inside `box`.
template <typename Fn>
void for_each_cell_in_box(const OrientedBox& box, const GridSpec& grid, Fn&& fn) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& c : box.corners()) {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  const double res = grid.resolution_mpp();
  const int n = grid.width_px();
  const int c0 = std::max(0, static_cast<int>(std::floor((min_x + grid.range_m()) / res)) - 1);
  const int c1 = std::min(n - 1, static_cast<int>(std::floor((max_x + grid.range_m()) / res)) + 1);
  const int r0 = std::max(0, static_cast<int>(std::floor((grid.range_m() - max_y) / res)) - 1);
  const int r1 = std::min(n - 1, static_cast<int>(std::floor((grid.range_m() - min_y) / res)) + 1);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (box.contains(cell_center({r, c}, grid))) fn(Cell{r, c});
    }
  }
}

}  // namespace

Tensor3 ClassTarget::class_map(std::span<const ObstacleLabel> labels) const {
  Tensor3 t(1, head_grid.height_px(), head_grid.width_px());
  for (int i = 0; i < head_grid.cell_count(); ++i) t.data()[static_cast<std::size_t>(i)] = static_cast<float>(class_channel(i, labels));
  return t;
}

ClassTarget make_class_target(std::span<const ObstacleLabel> labels, const GridSpec& grid) {
  ClassTarget t{grid.downsampled(kHeadStride), {}, {}, {}};
  t.owner.assign(static_cast<std::size_t>(t.head_grid.cell_count()), -1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const OrientedBox box = labels[i].box();
    for_each_cell_in_box(box, t.head_grid, [&](Cell c) {
      int& o = t.owner[static_cast<std::size_t>(t.head_grid.flat_index(c))];
      if (o < 0 || box.area() < labels[static_cast<std::size_t>(o)].box().area()) o = static_cast<int>(i);
    });
  }
  t.foreground.assign(labels.size(), {});
  for (int p = 0; p < t.head_grid.cell_count(); ++p) {
    const int o = t.owner[static_cast<std::size_t>(p)];
    if (o >= 0) t.foreground[static_cast<std::size_t>(o)].push_back(p);
  }
  t.trainable.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) t.trainable[i] = !t.foreground[i].empty();
  return t;
}

Tensor3 make_regression_target(std::span<const ObstacleLabel> labels, const ClassTarget& target) {
  const GridSpec& g = target.head_grid;
  Tensor3 out(kNumRegChannels, g.height_px(), g.width_px());
  const double res = g.resolution_mpp();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const ObstacleLabel& l = labels[i];
    for (int p : target.foreground[i]) {
      const Cell c = g.cell_of(p);
      const Point2 pc = cell_center(c, g);
      out.at(static_cast<int>(RegChannel::kDx), c.row, c.col) = static_cast<float>((l.cx - pc.x) / res);
      out.at(static_cast<int>(RegChannel::kDy), c.row, c.col) = static_cast<float>((l.cy - pc.y) / res);
      out.at(static_cast<int>(RegChannel::kW0), c.row, c.col) = static_cast<float>(l.w0);
      out.at(static_cast<int>(RegChannel::kL0), c.row, c.col) = static_cast<float>(l.l0);
      out.at(static_cast<int>(RegChannel::kSin), c.row, c.col) = static_cast<float>(std::sin(l.yaw));
      out.at(static_cast<int>(RegChannel::kCos), c.row, c.col) = static_cast<float>(std::cos(l.yaw));
    }
  }
  return out;
}

Tensor3 make_regression_target(std::span<const ObstacleLabel> labels, const GridSpec& grid) {
  return make_regression_target(labels, make_class_target(labels, grid));
}

std::vector<LidarScan::Point> load_lidar(std::istream& is) {
  std::vector<LidarScan::Point> out;
  detail::for_each_jsonl(is, [&](const Json& j, std::size_t line) {
    LidarScan::Point p;
    p.x = detail::finite_field(j, "x", line);
    p.y = detail::finite_field(j, "y", line);
    p.z = detail::finite_field(j, "z", line);
    auto g = j.find("is_ground");
    if (g == j.end() || !g->is_boolean()) {
      throw DataError("line " + std::to_string(line) + ": missing boolean field 'is_ground'");
    }
    p.is_ground = g->get<bool>();
    out.push_back(p);
  });
  return out;
}

void write_lidar(std::ostream& os, const LidarScan& scan) {
  for (const auto& p : scan.points) {
    Json j = {{"x", p.x}, {"y", p.y}, {"z", p.z}, {"is_ground", p.is_ground}};
    os << j.dump() << '\n';
  }
}

ProbWeight prob_weight(FreeState s) {
  switch (s) {
    case FreeState::kFree: return {0.0f, 1.0f};
    case FreeState::kOccupied: return {1.0f, 1.0f};
    case FreeState::kPartiallyObserved: return {0.5f, 0.5f};
    case FreeState::kUnobserved: return {0.0f, 0.0f};
  }
  return {0.0f, 0.0f};
}

Tensor3 FreespaceTarget::to_tensor() const {
  Tensor3 t(1, grid.height_px(), grid.width_px());
  for (std::size_t i = 0; i < states.size(); ++i) t.data()[i] = static_cast<float>(states[i]);
  return t;
}

FreespaceTarget FreespaceTarget::from_tensor(const Tensor3& t, const GridSpec& grid) {
  if (t.channels() != 1 || t.rows() != grid.height_px() || t.cols() != grid.width_px()) {
    throw DataError("free-space tensor shape does not match the target grid");
  }
  FreespaceTarget out{grid, std::vector<FreeState>(t.size())};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const float v = t.data()[i];
    if (v != 0.0f && v != 1.0f && v != 2.0f && v != 3.0f) throw DataError("invalid free-space state code");
    out.states[i] = static_cast<FreeState>(static_cast<int>(v));
  }
  return out;
}

std::vector<RayTrace> trace_rays(const LidarScan& scan, const GridSpec& target_grid, const TraceParams& params) {
  if (params.n_rays <= 0) throw ConfigError("n_rays must be positive");
  const int n_rays = params.n_rays;
  const double dphi = 2.0 * kPi / n_rays;
  const double step = 0.5 * target_grid.resolution_mpp();
  const int n_samples = static_cast<int>(std::floor(target_grid.range_m() / step));

  // First hit sample per ray, n_samples meaning "nothing within range".
  std::vector<int> hit(static_cast<std::size_t>(n_rays), n_samples);
  for (const auto& p : scan.points) {
    if (p.is_ground) continue;
    int k = static_cast<int>(std::floor((std::atan2(p.y, p.x) + kPi) / dphi)) % n_rays;
    if (k < 0) k += n_rays;
    const double s = std::floor(std::hypot(p.x, p.y) / step);
    if (s < n_samples) hit[static_cast<std::size_t>(k)] = std::min(hit[static_cast<std::size_t>(k)], static_cast<int>(s));
  }

  std::vector<RayTrace> rays(static_cast<std::size_t>(n_rays));
  for (int k = 0; k < n_rays; ++k) {
    RayTrace& ray = rays[static_cast<std::size_t>(k)];
    ray.angle = -kPi + (k + 0.5) * dphi;
    const double c = std::cos(ray.angle);
    const double s = std::sin(ray.angle);
    const int h = hit[static_cast<std::size_t>(k)];
    for (int i = 0; i < n_samples; ++i) {
      const double r = (i + 0.5) * step;
      const auto cell = world_to_grid({r * c, r * s}, target_grid);
      if (!cell) continue;
      const int flat = target_grid.flat_index(*cell);
      const RayState st = i < h ? RayState::kFree : (i == h ? RayState::kOccupied : RayState::kUnobserved);
      if (!ray.cells.empty() && ray.cells.back() == flat) {
        if (st == RayState::kOccupied) ray.states.back() = st;
        continue;
      }
      ray.cells.push_back(flat);
      ray.states.push_back(st);
    }
  }
  return rays;
}

FreespaceTarget trace_freespace(const LidarScan& scan, std::span<const ObstacleLabel> labels, const GridSpec& grid,
                                const TraceParams& params) {
  const GridSpec target_grid = grid.downsampled(kFreespaceStride);
  const auto rays = trace_rays(scan, target_grid, params);

  enum : std::uint8_t { kSeenFree = 1, kSeenOcc = 2, kSeenUnobs = 4 };
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(target_grid.cell_count()), 0);
  for (const auto& ray : rays) {
    for (std::size_t i = 0; i < ray.cells.size(); ++i) {
      auto& f = seen[static_cast<std::size_t>(ray.cells[i])];
      switch (ray.states[i]) {
        case RayState::kFree: f |= kSeenFree; break;
        case RayState::kOccupied: f |= kSeenOcc; break;
        case RayState::kUnobserved: f |= kSeenUnobs; break;
      }
    }
  }

  FreespaceTarget out{target_grid, std::vector<FreeState>(seen.size(), FreeState::kUnobserved)};
  for (std::size_t i = 0; i < seen.size(); ++i) {
    const auto f = seen[i];
    if (f & kSeenOcc) {
      out.states[i] = FreeState::kOccupied;
    } else if ((f & kSeenFree) && (f & kSeenUnobs)) {
      out.states[i] = FreeState::kPartiallyObserved;
    } else if (f & kSeenFree) {
      out.states[i] = FreeState::kFree;
    }
  }
  for (const auto& l : labels) {
    for_each_cell_in_box(l.box(), target_grid, [&](Cell c) {
      out.states[static_cast<std::size_t>(target_grid.flat_index(c))] = FreeState::kOccupied;
    });
  }
  return out;
}

}  // namespace radarnet::labelgen
