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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "radarnet/error.hpp"
#include "radarnet/rdm.hpp"

namespace radarnet::rdm {
namespace {

const GridSpec kGrid(64, 16.0);  // 0.5 m cells

TEST(Lut, PlusXRay) {
  const auto lut = build_polar_lut(kGrid, {0.0, 0.0}, 4096, 16, 8.0);
  const int k = 2048;  // half a bin above +x
  for (int j = 0; j < 16; ++j) {
    const auto cell = kGrid.cell_of(lut.at(k, j));
    EXPECT_EQ(cell.row, 31) << j;
    EXPECT_EQ(cell.col, 32 + j) << j;
  }
}

TEST(Lut, OutOfGridAndValidation) {
  const auto lut = build_polar_lut(kGrid, {0.0, 0.0}, 8, 10, 40.0);
  for (int k = 0; k < 8; ++k) EXPECT_EQ(lut.at(k, 9), kOutOfGrid);
  EXPECT_THROW(build_polar_lut(kGrid, {0, 0}, 0, 4, 1.0), ConfigError);
  EXPECT_THROW(build_polar_lut(kGrid, {0, 0}, 4, 0, 1.0), ConfigError);
  EXPECT_THROW(build_polar_lut(kGrid, {0, 0}, 4, 4, 0.0), ConfigError);
}

TEST(Lut, MatchesDirectTrigonometry) {
  oracle::Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const Point2 ref{oracle::uniform(rng, -10, 10), oracle::uniform(rng, -10, 10)};
    const int n_phi = oracle::uniform_int(rng, 1, 720);
    const int n_d = oracle::uniform_int(rng, 1, 120);
    const double d_max = oracle::uniform(rng, 1.0, 30.0);
    const auto lut = build_polar_lut(kGrid, ref, n_phi, n_d, d_max);
    for (int k = 0; k < n_phi; ++k) {
      for (int j = 0; j < n_d; ++j) ASSERT_EQ(lut.at(k, j), oracle::lut_direct(kGrid, ref, n_phi, n_d, d_max, k, j));
    }
  }
}

TEST(Lut, BinCentres) {
  const auto lut = build_polar_lut(kGrid, {0, 0}, 4, 2, 4.0);
  EXPECT_DOUBLE_EQ(lut.phi(0), -kPi + kPi / 4);
  EXPECT_DOUBLE_EQ(lut.radius(1), 3.0);
}

decode::OccupancyMap constant_map(float v) {
  return {kGrid, std::vector<float>(static_cast<std::size_t>(kGrid.cell_count()), v)};
}

TEST(ToPolar, ConstantMap) {
  const auto lut = build_polar_lut(kGrid, {1.0, -2.0}, 90, 40, 20.0);
  const auto polar = to_polar(constant_map(0.3f), lut);
  for (int k = 0; k < 90; ++k) {
    for (int j = 0; j < 40; ++j) EXPECT_EQ(polar.at(k, j), lut.at(k, j) == kOutOfGrid ? 1.0f : 0.3f);
  }
}

TEST(ToPolar, SingleCell) {
  const auto lut = build_polar_lut(kGrid, {0, 0}, 360, 32, 16.0);
  auto m = constant_map(0.0f);
  const int hot = kGrid.flat_index({20, 40});
  m.prob[static_cast<std::size_t>(hot)] = 1.0f;
  const auto polar = to_polar(m, lut);
  int hits = 0;
  for (int k = 0; k < 360; ++k) {
    for (int j = 0; j < 32; ++j) {
      const bool indexes = lut.at(k, j) == hot;
      hits += indexes;
      EXPECT_EQ(polar.at(k, j) == 1.0f, indexes || lut.at(k, j) == kOutOfGrid);
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(ToPolar, GridMismatch) {
  const auto lut = build_polar_lut(GridSpec(32, 16.0), {0, 0}, 8, 8, 4.0);
  EXPECT_THROW(to_polar(constant_map(0.0f), lut), DataError);
}

TEST(ToPolar, MatchesDirectSampling) {
  oracle::Rng rng(42);
  auto m = constant_map(0.0f);
  for (auto& v : m.prob) v = static_cast<float>(oracle::uniform(rng, 0, 1));
  const auto lut = build_polar_lut(kGrid, {2.0, 3.0}, 100, 50, 25.0);
  const auto polar = to_polar(m, lut);
  for (int k = 0; k < 100; ++k) {
    for (int j = 0; j < 50; ++j) ASSERT_EQ(polar.at(k, j), oracle::polar_direct(m, {2.0, 3.0}, 100, 50, 25.0, k, j));
  }
}

PolarMap one_ray(std::vector<float> v, double d_max) {
  PolarMap p;
  p.n_phi = 1;
  p.n_d = static_cast<int>(v.size());
  p.d_max = d_max;
  p.values = std::move(v);
  return p;
}

TEST(Extract, Examples) {
  EXPECT_DOUBLE_EQ(extract_rdm(one_ray({0.1f, 0.2f, 0.7f, 0.9f}, 4.0), 0.65).d[0], 2.5);
  EXPECT_DOUBLE_EQ(extract_rdm(one_ray({0.1f, 0.2f, 0.3f}, 3.0), 0.65).d[0], 3.0);
  EXPECT_DOUBLE_EQ(extract_rdm(one_ray({0.9f, 0.0f}, 2.0), 0.65).d[0], 0.5);
  // Boundary: value equal to the threshold counts.
  EXPECT_DOUBLE_EQ(extract_rdm(one_ray({0.0f, 0.5f}, 2.0), 0.5).d[0], 1.5);
  EXPECT_THROW(extract_rdm(one_ray({0.0f}, 1.0), 1.0), ConfigError);
  EXPECT_THROW(extract_rdm(one_ray({0.0f}, 1.0), 0.0), ConfigError);
}

TEST(Extract, MatchesLinearScanAndBounds) {
  oracle::Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    const int n = oracle::uniform_int(rng, 1, 60);
    std::vector<float> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = static_cast<float>(oracle::uniform(rng, 0, 1));
    const double p = oracle::uniform(rng, 0.05, 0.95);
    const double d_max = oracle::uniform(rng, 1, 50);
    const double d = extract_rdm(one_ray(v, d_max), p).d[0];
    ASSERT_EQ(d, oracle::rdm_linear(v, p, d_max));
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, d_max);
  }
}

TEST(TargetOccupancy, Encoding) {
  const GridSpec g(2, 1.0);
  labelgen::FreespaceTarget t{g,
                              {labelgen::FreeState::kFree, labelgen::FreeState::kOccupied,
                               labelgen::FreeState::kPartiallyObserved, labelgen::FreeState::kUnobserved}};
  EXPECT_EQ(target_occupancy(t).prob, (std::vector<float>{0.0f, 1.0f, 0.5f, 1.0f}));
}

TEST(LutCache, RoundTripAndRebuild) {
  const auto lut = build_polar_lut(kGrid, {0.5, -1.0}, 120, 30, 15.0);
  std::stringstream ss;
  write_lut(ss, lut);
  EXPECT_EQ(read_lut(ss), lut);
  EXPECT_EQ(build_polar_lut(kGrid, {0.5, -1.0}, 120, 30, 15.0), lut);
  EXPECT_NE(lut_key(kGrid, {0.5, -1.0}, 120, 30, 15.0), lut_key(kGrid, {0.5, -1.0}, 121, 30, 15.0));

  const auto dir = std::filesystem::temp_directory_path() / "radarnet_lut_cache_test";
  std::filesystem::remove_all(dir);
  const auto a = cached_lut(dir, kGrid, {0.5, -1.0}, 120, 30, 15.0);
  EXPECT_EQ(a, lut);
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  EXPECT_EQ(cached_lut(dir, kGrid, {0.5, -1.0}, 120, 30, 15.0), lut);
  std::filesystem::remove_all(dir);

  std::stringstream bad("nope");
  EXPECT_THROW(read_lut(bad), DataError);
}

TEST(RdmCsv, Header) {
  RadialDistanceMap r{4.0, {1.0, 2.0}};
  std::ostringstream os;
  write_rdm_csv(os, r);
  const auto s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
}

}  // namespace
}  // namespace radarnet::rdm
