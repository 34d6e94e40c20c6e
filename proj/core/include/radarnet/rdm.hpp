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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "radarnet/decode.hpp"
#include "radarnet/geometry.hpp"
#include "radarnet/labelgen.hpp"

namespace radarnet::rdm {

inline constexpr std::int32_t kOutOfGrid = -1;

struct PolarLut {
  GridSpec grid;
  Point2 p_ref;
  int n_phi = 0;
  int n_d = 0;
  double d_max = 0.0;
  std::vector<std::int32_t> index;  // n_phi x n_d, flat cell index or kOutOfGrid

  double phi(int k) const;
  double radius(int j) const;
  std::int32_t at(int k, int j) const { return index[static_cast<std::size_t>(k) * n_d + j]; }
  friend bool operator==(const PolarLut&, const PolarLut&) = default;
};

/// Throws ConfigError when n_phi, n_d or d_max is not positive.
PolarLut build_polar_lut(const GridSpec& grid, Point2 p_ref, int n_phi, int n_d, double d_max);

struct PolarMap {
  int n_phi = 0;
  int n_d = 0;
  double d_max = 0.0;
  std::vector<float> values;  // n_phi x n_d

  float at(int k, int j) const { return values[static_cast<std::size_t>(k) * n_d + j]; }
};

/// Out-of-grid samples read as 1.0. Throws DataError on a grid mismatch.
PolarMap to_polar(const decode::OccupancyMap& occ, const PolarLut& lut);

struct RadialDistanceMap {
  double d_max = 0.0;
  std::vector<double> d;

  int n_phi() const noexcept { return static_cast<int>(d.size()); }
  double phi(int k) const;
};

/// d_f is the centre radius of the first bin with value >= p_occ, d_max if none.
/// Throws ConfigError unless 0 < p_occ < 1.
RadialDistanceMap extract_rdm(const PolarMap& polar, double p_occ);

/// Resolved sampling parameters; zero n_d / d_max mean "derive from the grid".
struct RdmParams {
  Point2 p_ref{0.0, 0.0};
  int n_phi = 720;
  int n_d = 0;
  double d_max = 0.0;
  double p_occ = 0.4;

  RdmParams resolved(const GridSpec& grid) const;
  void validate() const;
};

/// Occupancy view of a target: Free 0, Occupied 1, PartiallyObserved 0.5, Unobserved 1.
decode::OccupancyMap target_occupancy(const labelgen::FreespaceTarget& target);

std::uint64_t lut_key(const GridSpec& grid, Point2 p_ref, int n_phi, int n_d, double d_max);
void write_lut(std::ostream& os, const PolarLut& lut);
PolarLut read_lut(std::istream& is);
/// Loads `dir/lut_<key>.bin` if present and consistent, else builds and stores it.
PolarLut cached_lut(const std::filesystem::path& dir, const GridSpec& grid, Point2 p_ref, int n_phi, int n_d,
                    double d_max);

void write_rdm_csv(std::ostream& os, const RadialDistanceMap& rdm);

}  // namespace radarnet::rdm
