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
#include <cstring>
#include <numeric>

#include "oracles.hpp"
#include "radarnet/bev.hpp"
#include "radarnet/error.hpp"

namespace radarnet::bev {
namespace {

ingest::CompensatedPeak at(double x, double y, double doppler = 0.0) {
  ingest::CompensatedPeak p;
  p.x = x;
  p.y = y;
  p.doppler = doppler;
  return p;
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(-3.0, -3.0, 5.0), 0.0);
  EXPECT_EQ(normalize(1.0, -3.0, 5.0), 0.5);
  EXPECT_EQ(normalize(9.0, -3.0, 5.0), 1.0);
  EXPECT_EQ(normalize(-9.0, -3.0, 5.0), 0.0);
  EXPECT_THROW(normalize(0.0, 1.0, 1.0), ConfigError);
}

TEST(FeatureRanges, Validate) {
  FeatureRanges r;
  EXPECT_NO_THROW(r.validate());
  r[Feature::kRcs] = {5.0, 5.0};
  EXPECT_THROW(r.validate(), ConfigError);
}

TEST(Rasterize, NoPeaks) {
  const GridSpec g(16, 4.0);
  const auto b = rasterize({}, g);
  EXPECT_TRUE(std::all_of(b.tensor.data().begin(), b.tensor.data().end(), [](float v) { return v == 0.0f; }));
  EXPECT_TRUE(std::all_of(b.counts.begin(), b.counts.end(), [](int c) { return c == 0; }));
  EXPECT_EQ(b.tensor.channels(), kNumFeatures);
}

TEST(Rasterize, MeanThenNormalize) {
  const GridSpec g(8, 1.0);
  FeatureRanges r;
  r[Feature::kDoppler] = {0.0, 10.0};
  const std::vector<ingest::CompensatedPeak> peaks{at(0.1, 0.1, 2.0), at(0.15, 0.2, 4.0)};
  const auto b = rasterize(peaks, g, r);
  EXPECT_FLOAT_EQ(b.tensor.at(0, 3, 4), 0.3f);
  EXPECT_EQ(b.counts[static_cast<std::size_t>(g.flat_index({3, 4}))], 2);
}

TEST(Rasterize, SinglePeakCell) {
  const GridSpec g(8, 1.0);
  const std::vector<ingest::CompensatedPeak> peaks{at(0.3, 0.1)};
  const auto b = rasterize(peaks, g);
  for (int i = 0; i < g.cell_count(); ++i) {
    EXPECT_EQ(b.counts[static_cast<std::size_t>(i)], i == g.flat_index({3, 5}) ? 1 : 0);
  }
}

TEST(Rasterize, MatchesOracleBitExactly) {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const GridSpec g(oracle::uniform_int(rng, 1, 64), oracle::uniform(rng, 1.0, 50.0));
    const auto peaks = oracle::random_peaks(rng, g, oracle::uniform_int(rng, 0, 2000));
    const FeatureRanges r;
    const auto got = rasterize(peaks, g, r);
    const auto want = oracle::rasterize(peaks, g, r);
    ASSERT_EQ(got.tensor.size(), want.tensor.size());
    EXPECT_EQ(std::memcmp(got.tensor.data().data(), want.tensor.data().data(), got.tensor.size() * sizeof(float)), 0);
    EXPECT_EQ(got.counts, want.counts);
    EXPECT_EQ(got.skipped, want.skipped);
  }
}

TEST(Rasterize, Invariants) {
  oracle::Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const GridSpec g(oracle::uniform_int(rng, 4, 64), oracle::uniform(rng, 1.0, 50.0));
    auto peaks = oracle::random_peaks(rng, g, oracle::uniform_int(rng, 0, 3000));
    const auto b = rasterize(peaks, g);
    // Conservation.
    EXPECT_EQ(static_cast<std::size_t>(std::accumulate(b.counts.begin(), b.counts.end(), 0)) + b.skipped, peaks.size());
    for (int c = 0; c < kNumFeatures; ++c) {
      const auto ch = b.tensor.channel(c);
      for (std::size_t i = 0; i < ch.size(); ++i) {
        EXPECT_GE(ch[i], 0.0f);
        EXPECT_LE(ch[i], 1.0f);
        if (b.counts[i] == 0) EXPECT_EQ(ch[i], 0.0f);
      }
    }
    // Permutation invariance.
    std::shuffle(peaks.begin(), peaks.end(), rng);
    const auto s = rasterize(peaks, g);
    EXPECT_EQ(s.counts, b.counts);
    for (std::size_t i = 0; i < s.tensor.size(); ++i) EXPECT_NEAR(s.tensor.data()[i], b.tensor.data()[i], 1e-6);
  }
}

}  // namespace
}  // namespace radarnet::bev
