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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "radarnet/bev.hpp"
#include "radarnet/decode.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/model.hpp"
#include "radarnet/pipeline.hpp"
#include "radarnet/rdm.hpp"
#include "radarnet/synth.hpp"
#include "radarnet/train.hpp"

namespace {

using namespace radarnet;

std::vector<ingest::CompensatedPeak> random_peaks(int n, double range) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-range, range), u(0.0, 1.0);
  std::vector<ingest::CompensatedPeak> out(static_cast<std::size_t>(n));
  for (auto& p : out) {
    p.x = pos(rng);
    p.y = pos(rng);
    p.doppler = 20.0 * u(rng) - 10.0;
    p.rcs = 40.0 * u(rng) - 20.0;
    p.age = 0.5 * u(rng);
  }
  return out;
}

void BM_Rasterize(benchmark::State& state) {
  const GridSpec grid = GridSpec::full_scale();
  const auto peaks = random_peaks(static_cast<int>(state.range(0)), 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(bev::rasterize(peaks, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rasterize)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_TraceFreespace(benchmark::State& state) {
  synth::SceneConfig cfg;
  const auto frame = synth::gen_frame(cfg, 0);
  const GridSpec fs = GridSpec::full_scale().downsampled(labelgen::kFreespaceStride);
  for (auto _ : state) benchmark::DoNotOptimize(labelgen::trace_freespace(frame.lidar, frame.labels, fs));
}
BENCHMARK(BM_TraceFreespace)->Unit(benchmark::kMillisecond);

void BM_PrepareFrame(benchmark::State& state) {
  synth::SceneConfig cfg;
  const auto frame = synth::gen_frame(cfg, 0);
  const pipeline::PrepareParams params;
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::prepare_frame(frame, params));
}
BENCHMARK(BM_PrepareFrame)->Unit(benchmark::kMillisecond);

void BM_BuildLut(benchmark::State& state) {
  const GridSpec grid = GridSpec::full_scale().downsampled(labelgen::kFreespaceStride);
  for (auto _ : state) benchmark::DoNotOptimize(rdm::build_polar_lut(grid, {0.0, 0.0}, 720, 200, 100.0));
}
BENCHMARK(BM_BuildLut)->Unit(benchmark::kMillisecond);

// The per-frame cost once the table exists: one gather plus one scan.
void BM_PolarRdm(benchmark::State& state) {
  const GridSpec grid = GridSpec::full_scale().downsampled(labelgen::kFreespaceStride);
  const auto lut = rdm::build_polar_lut(grid, {0.0, 0.0}, 720, 200, 100.0);
  decode::OccupancyMap occ{grid, std::vector<float>(static_cast<std::size_t>(grid.cell_count()))};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> u(0.0f, 0.5f);
  for (auto& v : occ.prob) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(rdm::extract_rdm(rdm::to_polar(occ, lut), 0.4));
}
BENCHMARK(BM_PolarRdm)->Unit(benchmark::kMicrosecond);

void BM_Forward(benchmark::State& state) {
  const model::ModelConfig cfg{static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4};
  model::Network<float> net(cfg, 1);
  Tensor3 input(model::ModelConfig::kInputChannels, cfg.input_px, cfg.input_px, 0.1f);
  for (auto _ : state) benchmark::DoNotOptimize(net.infer(input));
}
BENCHMARK(BM_Forward)->Args({256, 16})->Args({800, 64})->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  synth::SceneConfig scene;
  scene.spawn_range_max = 30.0;
  pipeline::PrepareParams params;
  params.grid = GridSpec(256, 32.0);
  std::vector<train::TrainSample> data;
  for (int i = 0; i < 4; ++i) data.push_back(pipeline::to_sample(pipeline::prepare_frame(synth::gen_frame(scene, i), params)));
  train::TrainConfig cfg;
  cfg.iterations = 1;
  cfg.class_weights = train::ClassWeights{1.0, 1.0, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(train::train_loop(data, model::ModelConfig::desk(), cfg));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

void BM_Decode(benchmark::State& state) {
  const GridSpec grid = GridSpec::full_scale();
  model::HeadOutputs out{Tensor3(4, 200, 200), Tensor3(6, 200, 200), Tensor3(2, 400, 400)};
  std::mt19937_64 rng(3);
  std::normal_distribution<float> n(0.0f, 2.0f);
  for (auto& v : out.class_logits.data()) v = n(rng);
  for (auto _ : state) benchmark::DoNotOptimize(decode::decode_obstacles(out, decode::kDefaultThresholds, grid));
}
BENCHMARK(BM_Decode)->Unit(benchmark::kMillisecond);

void BM_OneNetAssign(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<train::LabelCandidates> labels(static_cast<std::size_t>(state.range(0)));
  for (auto& l : labels) {
    for (int p = 0; p < 64; ++p) {
      l.pixels.push_back(static_cast<int>(u(rng) * 40000));
      l.class_loss.push_back(u(rng));
      l.reg_loss.push_back(u(rng));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(train::onenet_assign(labels, 1.0));
}
BENCHMARK(BM_OneNetAssign)->Arg(16)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
