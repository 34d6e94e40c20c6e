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

#include <iosfwd>
#include <span>
#include <vector>

#include "radarnet/geometry.hpp"

namespace radarnet::ingest {

/// One radar peak detection, expressed in the rig frame at capture time.
/// Doppler is the signed radial velocity, positive when approaching.
struct RadarPeak {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double doppler = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;
  double rcs = 0.0;  // dBm
  double t = 0.0;
  int sensor_id = 0;
};

/// A peak re-expressed in the rig frame at the reference time.
struct CompensatedPeak : RadarPeak {
  double age = 0.0;  // t_ref - t
};

inline constexpr double kDefaultWindowS = 0.5;
inline constexpr double kDefaultRcsFloorDbm = -40.0;

/// JSON-lines, one peak per line. Unknown fields are ignored; blank lines
/// are skipped. Throws DataError naming the line for malformed input and
/// RejectedRecord for non-finite values.
std::vector<RadarPeak> load_peaks(std::istream& is);
void write_peaks(std::ostream& os, std::span<const RadarPeak> peaks);

/// JSON-lines `x,y,yaw,t`.
std::vector<Pose2> load_poses(std::istream& is);
void write_poses(std::ostream& os, std::span<const Pose2> poses);

/// Keeps peaks with rcs >= floor_dbm, preserving order.
std::vector<RadarPeak> filter_rcs(std::span<const RadarPeak> peaks, double floor_dbm = kDefaultRcsFloorDbm);

/// Sliding accumulation window of peaks plus the ego trajectory used to
/// compensate them. Single writer.
class AccumBuffer {
 public:
  explicit AccumBuffer(double window_s = kDefaultWindowS);

  double window_s() const noexcept { return window_s_; }

  void add_peaks(std::span<const RadarPeak> peaks);
  void add_pose(const Pose2& pose);

  /// Drops peaks older than the window relative to t_ref.
  void maintain(double t_ref);

  /// Pose at time t: linear in x/y, shortest arc in yaw between the
  /// bracketing samples. Throws DataError outside coverage.
  Pose2 pose_at(double t) const;

  const std::vector<RadarPeak>& peaks() const noexcept { return peaks_; }
  const std::vector<Pose2>& poses() const noexcept { return poses_; }

 private:
  double window_s_;
  std::vector<RadarPeak> peaks_;
  std::vector<Pose2> poses_;
};

/// Re-expresses every peak within the window in the rig frame at t_ref.
/// Peaks older than the window are dropped.
std::vector<CompensatedPeak> compensate(const AccumBuffer& buffer, double t_ref);

}  // namespace radarnet::ingest
