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

#include "radarnet/decode.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>


#include "jsonl.hpp"
#include "radarnet/error.hpp"

namespace radarnet::decode {

std::vector<Detection> decode_obstacles(const model::HeadOutputs& out, const Thresholds& thresholds,
                                        const GridSpec& input_grid) {
  const GridSpec hg = input_grid.downsampled(labelgen::kHeadStride);
  const auto& cls = out.class_logits;
  const auto& reg = out.regression;
  if (cls.channels() != kNumClassChannels || cls.rows() != hg.height_px() || cls.cols() != hg.width_px() ||
      reg.channels() != labelgen::kNumRegChannels || reg.rows() != hg.height_px() || reg.cols() != hg.width_px()) {
    throw DataError("head outputs do not match the grid");
  }
  const std::size_t plane = cls.plane_size();
  // Softmax per pixel once.
  std::vector<double> prob(static_cast<std::size_t>(kNumObstacleClasses) * plane);
  for (std::size_t p = 0; p < plane; ++p) {
    double mx = -INFINITY;
    for (int c = 0; c < kNumClassChannels; ++c) mx = std::max(mx, static_cast<double>(cls.data()[c * plane + p]));
    double s = 0.0;
    for (int c = 0; c < kNumClassChannels; ++c) s += std::exp(cls.data()[c * plane + p] - mx);
    for (int c = 0; c < kNumObstacleClasses; ++c) prob[c * plane + p] = std::exp(cls.data()[c * plane + p] - mx) / s;
  }
  const double res = hg.resolution_mpp();
  auto ch = [&](labelgen::RegChannel r, std::size_t p) {
    return static_cast<double>(reg.data()[static_cast<std::size_t>(r) * plane + p]);
  };
  std::vector<Detection> dets;
  for (int c = 0; c < kNumObstacleClasses; ++c) {
    for (std::size_t p = 0; p < plane; ++p) {
      const double score = prob[c * plane + p];
      if (!(score > thresholds[static_cast<std::size_t>(c)])) continue;
      const Point2 pc = cell_center(hg.cell_of(static_cast<int>(p)), hg);
      Detection d;
      d.cls = static_cast<ObstacleClass>(c);
      d.score = score;
      d.cx = pc.x + ch(labelgen::RegChannel::kDx, p) * res;
      d.cy = pc.y + ch(labelgen::RegChannel::kDy, p) * res;
      d.w0 = std::max(kMinExtent, ch(labelgen::RegChannel::kW0, p));
      d.l0 = std::max(kMinExtent, ch(labelgen::RegChannel::kL0, p));
      d.yaw = normalize_angle(std::atan2(ch(labelgen::RegChannel::kSin, p), ch(labelgen::RegChannel::kCos, p)));
      dets.push_back(d);
    }
  }
  return dets;
}

Tensor3 OccupancyMap::to_tensor() const {
  Tensor3 t(1, grid.height_px(), grid.width_px());
  std::copy(prob.begin(), prob.end(), t.data().begin());
  return t;
}

OccupancyMap OccupancyMap::from_tensor(const Tensor3& t, const GridSpec& grid) {
  if (t.channels() != 1 || t.rows() != grid.height_px() || t.cols() != grid.width_px()) {
    throw DataError("occupancy tensor does not match the grid");
  }
  OccupancyMap m{grid, std::vector<float>(t.data().begin(), t.data().end())};
  for (float v : m.prob) {
    if (!(v >= 0.0f && v <= 1.0f)) throw DataError("occupancy probability outside [0,1]");
  }
  return m;
}

OccupancyMap occupancy_prob(const model::HeadOutputs& out, const GridSpec& input_grid) {
  const GridSpec fg = input_grid.downsampled(labelgen::kFreespaceStride);
  const auto& f = out.freespace_logits;
  if (f.channels() != 2 || f.rows() != fg.height_px() || f.cols() != fg.width_px()) {
    throw DataError("free-space logits do not match the grid");
  }
  const std::size_t plane = f.plane_size();
  OccupancyMap m{fg, std::vector<float>(plane)};
  for (std::size_t p = 0; p < plane; ++p) {
    const double z = static_cast<double>(f.data()[p]) - f.data()[plane + p];
    m.prob[p] = static_cast<float>(1.0 / (1.0 + std::exp(-z)));
  }
  return m;
}

std::vector<Detection> load_detections(std::istream& is) {
  std::vector<Detection> out;
  detail::for_each_jsonl(is, [&](const detail::Json& j, std::size_t line) {
    if (!j.is_object() || !j.contains("cls") || !j["cls"].is_string()) {
      throw DataError("detection line " + std::to_string(line) + ": missing class");
    }
    Detection d;
    d.cls = parse_class(j["cls"].get<std::string>());
    d.score = detail::finite_field(j, "score", line);
    d.cx = detail::finite_field(j, "cx", line);
    d.cy = detail::finite_field(j, "cy", line);
    d.w0 = detail::finite_field(j, "w0", line);
    d.l0 = detail::finite_field(j, "l0", line);
    d.yaw = detail::finite_field(j, "yaw", line);
    out.push_back(d);
  });
  return out;
}

void write_detections(std::ostream& os, const std::vector<Detection>& dets) {
  char buf[256];
  for (const auto& d : dets) {
    std::snprintf(buf, sizeof(buf),
                  "{\"cls\":\"%s\",\"score\":%.9g,\"cx\":%.9g,\"cy\":%.9g,\"w0\":%.9g,\"l0\":%.9g,\"yaw\":%.9g}\n",
                  std::string(class_name(d.cls)).c_str(), d.score, d.cx, d.cy, d.w0, d.l0, d.yaw);
    os << buf;
  }
}

}  // namespace radarnet::decode
