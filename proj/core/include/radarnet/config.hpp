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

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radarnet/bev.hpp"
#include "radarnet/decode.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/metrics.hpp"
#include "radarnet/model.hpp"
#include "radarnet/pipeline.hpp"
#include "radarnet/rdm.hpp"
#include "radarnet/synth.hpp"
#include "radarnet/train.hpp"

namespace radarnet {

/// Every tunable of a run. Defaults are the full-scale configuration.
struct RunConfig {
  int grid_px = 800;
  double grid_range_m = 100.0;
  bev::FeatureRanges features;
  double window_s = ingest::kDefaultWindowS;
  double rcs_floor_dbm = ingest::kDefaultRcsFloorDbm;
  labelgen::TransferParams transfer;
  labelgen::TraceParams trace;
  int base_channels = 64;
  train::TrainConfig train;
  decode::Thresholds thresholds = decode::kDefaultThresholds;
  metrics::EvalConfig eval;
  rdm::RdmParams rdm;
  synth::SceneConfig scene;
  int frames = 16;
  double train_fraction = 0.75;

  GridSpec grid() const { return GridSpec(grid_px, grid_range_m); }
  model::ModelConfig model() const { return {grid_px, base_channels, kNumClassChannels}; }
  pipeline::PrepareParams prepare() const;
  /// Re-validates every module's invariants. Throws ConfigError.
  void validate() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

const std::vector<ConfigKey>& config_keys();

/// Throws ConfigError for unknown keys or unparsable values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
/// `key = value` lines; '#' starts a comment. Throws ConfigError naming the line.
void apply_config(RunConfig& cfg, std::istream& is);
RunConfig load_config(const std::string& path);
std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& cfg);
void write_config(std::ostream& os, const RunConfig& cfg);

}  // namespace radarnet
