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

#include <filesystem>
#include <vector>

#include "radarnet/bev.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/synth.hpp"
#include "radarnet/train.hpp"

namespace radarnet::pipeline {

struct PrepareParams {
  GridSpec grid = GridSpec::full_scale();
  bev::FeatureRanges ranges;
  double window_s = ingest::kDefaultWindowS;
  double rcs_floor_dbm = ingest::kDefaultRcsFloorDbm;
  labelgen::TransferParams transfer;
  labelgen::TraceParams trace;
};

struct PreparedFrame {
  bev::BevTensor input;
  std::vector<labelgen::ObstacleLabel> labels;  // transferred and filtered
  labelgen::FreespaceTarget freespace;
};

/// RCS floor, accumulation and compensation at the frame's reference time,
/// rasterization, label transfer and free-space tracing.
PreparedFrame prepare_frame(const synth::Frame& frame, const PrepareParams& params);

/// Files under `dir`: NNNNNN.{input,cls,reg,fs}.bevt and NNNNNN.labels.jsonl.
std::filesystem::path prepared_path(const std::filesystem::path& dir, int index, const char* kind);
void write_prepared(const std::filesystem::path& dir, int index, const PreparedFrame& f);

struct LoadedFrame {
  Tensor3 input;
  std::vector<labelgen::ObstacleLabel> labels;
  labelgen::FreespaceTarget freespace;
};

/// Throws DataError when files are missing or do not match `grid`.
LoadedFrame read_prepared(const std::filesystem::path& dir, int index, const GridSpec& grid);

train::TrainSample to_sample(LoadedFrame f, const GridSpec& grid);
train::TrainSample to_sample(const PreparedFrame& f);

}  // namespace radarnet::pipeline
