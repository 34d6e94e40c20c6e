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

#include "radarnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "jsonl.hpp"

namespace radarnet::ingest {

using detail::Json;

std::vector<RadarPeak> load_peaks(std::istream& is) {
  std::vector<RadarPeak> out;
  detail::for_each_jsonl(is, [&](const Json& j, std::size_t line) {
    RadarPeak p;
    p.x = detail::finite_field(j, "x", line);
    p.y = detail::finite_field(j, "y", line);
    p.z = detail::finite_field(j, "z", line);
    p.doppler = detail::finite_field(j, "doppler", line);
    p.azimuth = detail::finite_field(j, "azimuth", line);
    p.elevation = detail::finite_field(j, "elevation", line);
    p.rcs = detail::finite_field(j, "rcs", line);
    p.t = detail::finite_field(j, "t", line);
    p.sensor_id = static_cast<int>(detail::integer_field(j, "sensor_id", line));
    if (p.azimuth <= -kPi || p.azimuth > kPi) throw RejectedRecord(line, "azimuth outside (-pi, pi]");
    if (std::abs(p.elevation) > 0.5 * kPi) throw RejectedRecord(line, "elevation outside [-pi/2, pi/2]");
    out.push_back(p);
  });
  return out;
}

void write_peaks(std::ostream& os, std::span<const RadarPeak> peaks) {
  for (const auto& p : peaks) {
    Json j = {{"x", p.x},       {"y", p.y},     {"z", p.z}, {"doppler", p.doppler}, {"azimuth", p.azimuth},
              {"elevation", p.elevation}, {"rcs", p.rcs}, {"t", p.t}, {"sensor_id", p.sensor_id}};
    os << j.dump() << '\n';
  }
}

std::vector<Pose2> load_poses(std::istream& is) {
  std::vector<Pose2> out;
  detail::for_each_jsonl(is, [&](const Json& j, std::size_t line) {
    out.push_back({detail::finite_field(j, "x", line), detail::finite_field(j, "y", line),
                   normalize_angle(detail::finite_field(j, "yaw", line)), detail::finite_field(j, "t", line)});
  });
  return out;
}

void write_poses(std::ostream& os, std::span<const Pose2> poses) {
  for (const auto& p : poses) {
    Json j = {{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}, {"t", p.t}};
    os << j.dump() << '\n';
  }
}

std::vector<RadarPeak> filter_rcs(std::span<const RadarPeak> peaks, double floor_dbm) {
  std::vector<RadarPeak> out;
  out.reserve(peaks.size());
  std::copy_if(peaks.begin(), peaks.end(), std::back_inserter(out),
               [floor_dbm](const RadarPeak& p) { return p.rcs >= floor_dbm; });
  return out;
}

AccumBuffer::AccumBuffer(double window_s) : window_s_(window_s) {
  if (!(window_s > 0.0)) throw ConfigError("accumulation window must be positive");
}

void AccumBuffer::add_peaks(std::span<const RadarPeak> peaks) {
  peaks_.insert(peaks_.end(), peaks.begin(), peaks.end());
  std::stable_sort(peaks_.begin(), peaks_.end(), [](const RadarPeak& a, const RadarPeak& b) { return a.t < b.t; });
}

void AccumBuffer::add_pose(const Pose2& pose) {
  auto it = std::upper_bound(poses_.begin(), poses_.end(), pose.t,
                             [](double t, const Pose2& p) { return t < p.t; });
  poses_.insert(it, pose);
}

void AccumBuffer::maintain(double t_ref) {
  std::erase_if(peaks_, [&](const RadarPeak& p) { return t_ref - p.t > window_s_; });
}

Pose2 AccumBuffer::pose_at(double t) const {
  if (poses_.empty() || t < poses_.front().t || t > poses_.back().t) {
    std::ostringstream msg;
    msg << "time " << t << " outside pose coverage";
    throw DataError(msg.str());
  }
  auto hi = std::lower_bound(poses_.begin(), poses_.end(), t, [](const Pose2& p, double v) { return p.t < v; });
  if (hi->t == t) return *hi;
  auto lo = std::prev(hi);
  const double a = (t - lo->t) / (hi->t - lo->t);
  const double dyaw = normalize_angle(hi->yaw - lo->yaw);
  return {lo->x + a * (hi->x - lo->x), lo->y + a * (hi->y - lo->y), normalize_angle(lo->yaw + a * dyaw), t};
}

std::vector<CompensatedPeak> compensate(const AccumBuffer& buffer, double t_ref) {
  const Pose2 ref_inv = invert(buffer.pose_at(t_ref));
  std::vector<CompensatedPeak> out;
  out.reserve(buffer.peaks().size());
  for (std::size_t i = 0; i < buffer.peaks().size(); ++i) {
    const RadarPeak& p = buffer.peaks()[i];
    const double age = t_ref - p.t;
    if (age > buffer.window_s()) continue;
    if (age < 0.0) {
      std::ostringstream msg;
      msg << "peak " << i << " at t=" << p.t << " is newer than reference time " << t_ref;
      throw DataError(msg.str());
    }
    Pose2 capture;
    try {
      capture = buffer.pose_at(p.t);
    } catch (const DataError& e) {
      throw DataError("peak " + std::to_string(i) + ": " + e.what());
    }
    const Point2 q = transform_point(compose(ref_inv, capture), {p.x, p.y});
    CompensatedPeak c;
    static_cast<RadarPeak&>(c) = p;
    c.x = q.x;
    c.y = q.y;
    c.age = age;
    out.push_back(c);
  }
  return out;
}

}  // namespace radarnet::ingest
