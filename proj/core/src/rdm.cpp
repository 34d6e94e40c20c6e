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

#include "radarnet/rdm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "radarnet/binary_io.hpp"
#include "radarnet/error.hpp"

namespace radarnet::rdm {

namespace {

double bin_angle(int k, int n_phi) { return -kPi + (k + 0.5) * (2.0 * kPi / n_phi); }

constexpr char kLutMagic[4] = {'R', 'L', 'U', 'T'};
constexpr std::uint8_t kLutVersion = 1;

}  // namespace

double PolarLut::phi(int k) const { return bin_angle(k, n_phi); }
double PolarLut::radius(int j) const { return (j + 0.5) * d_max / n_d; }
double RadialDistanceMap::phi(int k) const { return bin_angle(k, n_phi()); }

PolarLut build_polar_lut(const GridSpec& grid, Point2 p_ref, int n_phi, int n_d, double d_max) {
  if (n_phi <= 0 || n_d <= 0) throw ConfigError("polar LUT needs positive bin counts");
  if (!(d_max > 0.0)) throw ConfigError("polar LUT needs a positive d_max");
  PolarLut lut{grid, p_ref, n_phi, n_d, d_max, {}};
  lut.index.resize(static_cast<std::size_t>(n_phi) * n_d);
  for (int k = 0; k < n_phi; ++k) {
    const double phi = lut.phi(k);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    for (int j = 0; j < n_d; ++j) {
      const double r = lut.radius(j);
      const auto cell = world_to_grid({p_ref.x + r * c, p_ref.y + r * s}, grid);
      lut.index[static_cast<std::size_t>(k) * n_d + j] = cell ? grid.flat_index(*cell) : kOutOfGrid;
    }
  }
  return lut;
}

PolarMap to_polar(const decode::OccupancyMap& occ, const PolarLut& lut) {
  if (!(occ.grid == lut.grid)) throw DataError("occupancy grid does not match the polar LUT grid");
  PolarMap m{lut.n_phi, lut.n_d, lut.d_max, std::vector<float>(lut.index.size())};
  for (std::size_t i = 0; i < lut.index.size(); ++i) {
    const auto idx = lut.index[i];
    m.values[i] = idx == kOutOfGrid ? 1.0f : occ.prob[static_cast<std::size_t>(idx)];
  }
  return m;
}

RadialDistanceMap extract_rdm(const PolarMap& polar, double p_occ) {
  if (!(p_occ > 0.0 && p_occ < 1.0)) throw ConfigError("p_occ must lie in (0,1)");
  RadialDistanceMap rdm{polar.d_max, std::vector<double>(static_cast<std::size_t>(polar.n_phi), polar.d_max)};
  for (int k = 0; k < polar.n_phi; ++k) {
    for (int j = 0; j < polar.n_d; ++j) {
      if (polar.at(k, j) >= p_occ) {
        rdm.d[static_cast<std::size_t>(k)] = (j + 0.5) * polar.d_max / polar.n_d;
        break;
      }
    }
  }
  return rdm;
}

RdmParams RdmParams::resolved(const GridSpec& grid) const {
  RdmParams r = *this;
  if (r.d_max <= 0.0) r.d_max = grid.range_m();
  if (r.n_d <= 0) r.n_d = static_cast<int>(std::ceil(r.d_max / grid.resolution_mpp()));
  return r;
}

void RdmParams::validate() const {
  if (n_phi <= 0) throw ConfigError("rdm n_phi must be positive");
  if (n_d < 0) throw ConfigError("rdm n_d must be non-negative");
  if (d_max < 0.0 || !std::isfinite(d_max)) throw ConfigError("rdm d_max must be non-negative");
  if (!(p_occ > 0.0 && p_occ < 1.0)) throw ConfigError("rdm p_occ must lie in (0,1)");
  if (!std::isfinite(p_ref.x) || !std::isfinite(p_ref.y)) throw ConfigError("rdm reference point must be finite");
}

decode::OccupancyMap target_occupancy(const labelgen::FreespaceTarget& target) {
  decode::OccupancyMap m{target.grid, std::vector<float>(target.states.size())};
  for (std::size_t i = 0; i < target.states.size(); ++i) {
    switch (target.states[i]) {
      case labelgen::FreeState::kFree: m.prob[i] = 0.0f; break;
      case labelgen::FreeState::kPartiallyObserved: m.prob[i] = 0.5f; break;
      case labelgen::FreeState::kOccupied:
      case labelgen::FreeState::kUnobserved: m.prob[i] = 1.0f; break;
    }
  }
  return m;
}

std::uint64_t lut_key(const GridSpec& grid, Point2 p_ref, int n_phi, int n_d, double d_max) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  };
  const std::int32_t ints[3] = {grid.width_px(), n_phi, n_d};
  const double reals[4] = {grid.range_m(), p_ref.x, p_ref.y, d_max};
  mix(ints, sizeof(ints));
  mix(reals, sizeof(reals));
  return h;
}

void write_lut(std::ostream& os, const PolarLut& lut) {
  os.write(kLutMagic, 4);
  binary::put_u8(os, kLutVersion);
  binary::put_u32(os, static_cast<std::uint32_t>(lut.grid.width_px()));
  binary::put_f64(os, lut.grid.range_m());
  binary::put_f64(os, lut.p_ref.x);
  binary::put_f64(os, lut.p_ref.y);
  binary::put_u32(os, static_cast<std::uint32_t>(lut.n_phi));
  binary::put_u32(os, static_cast<std::uint32_t>(lut.n_d));
  binary::put_f64(os, lut.d_max);
  for (auto v : lut.index) binary::put_u32(os, static_cast<std::uint32_t>(v));
  if (!os) throw DataError("failed to write polar LUT");
}

PolarLut read_lut(std::istream& is) {
  char magic[4];
  binary::read_exact(is, magic, 4);
  if (std::string_view(magic, 4) != std::string_view(kLutMagic, 4)) throw DataError("not a polar LUT file");
  if (binary::get_u8(is) != kLutVersion) throw DataError("unsupported polar LUT version");
  const auto px = static_cast<int>(binary::get_u32(is));
  const double range = binary::get_f64(is);
  PolarLut lut{GridSpec(px, range), {}, 0, 0, 0.0, {}};
  lut.p_ref.x = binary::get_f64(is);
  lut.p_ref.y = binary::get_f64(is);
  lut.n_phi = static_cast<int>(binary::get_u32(is));
  lut.n_d = static_cast<int>(binary::get_u32(is));
  lut.d_max = binary::get_f64(is);
  const std::size_t n = static_cast<std::size_t>(lut.n_phi) * static_cast<std::size_t>(lut.n_d);
  if (n > (std::size_t{1} << 31)) throw DataError("polar LUT too large");
  lut.index.resize(n);
  for (auto& v : lut.index) {
    v = static_cast<std::int32_t>(binary::get_u32(is));
    if (v != kOutOfGrid && (v < 0 || v >= lut.grid.cell_count())) throw DataError("polar LUT index out of range");
  }
  return lut;
}

PolarLut cached_lut(const std::filesystem::path& dir, const GridSpec& grid, Point2 p_ref, int n_phi, int n_d,
                    double d_max) {
  char name[40];
  std::snprintf(name, sizeof(name), "lut_%016llx.bin",
                static_cast<unsigned long long>(lut_key(grid, p_ref, n_phi, n_d, d_max)));
  const auto path = dir / name;
  if (std::ifstream in{path, std::ios::binary}) {
    try {
      auto lut = read_lut(in);
      if (lut.grid == grid && lut.p_ref.x == p_ref.x && lut.p_ref.y == p_ref.y && lut.n_phi == n_phi &&
          lut.n_d == n_d && lut.d_max == d_max) {
        return lut;
      }
    } catch (const DataError&) {
      // Stale or truncated cache entry; rebuild below.
    }
  }
  auto lut = build_polar_lut(grid, p_ref, n_phi, n_d, d_max);
  std::filesystem::create_directories(dir);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write LUT cache " + path.string());
  write_lut(out, lut);
  return lut;
}

void write_rdm_csv(std::ostream& os, const RadialDistanceMap& rdm) {
  os << "phi_rad,d_m\n";
  char buf[64];
  for (int k = 0; k < rdm.n_phi(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", rdm.phi(k), rdm.d[static_cast<std::size_t>(k)]);
    os << buf;
  }
}

}  // namespace radarnet::rdm
