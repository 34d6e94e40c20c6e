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

#include "radarnet/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "radarnet/error.hpp"

namespace radarnet::pipeline {

PreparedFrame prepare_frame(const synth::Frame& frame, const PrepareParams& params) {
  const auto kept = ingest::filter_rcs(frame.peaks, params.rcs_floor_dbm);
  ingest::AccumBuffer buffer(params.window_s);
  for (const auto& p : frame.poses) buffer.add_pose(p);
  buffer.add_peaks(kept);
  buffer.maintain(frame.t_ref);
  const auto comp = ingest::compensate(buffer, frame.t_ref);
  auto labels = labelgen::transfer_labels(frame.labels, comp, params.grid, params.transfer);
  auto freespace = labelgen::trace_freespace(frame.lidar, labels, params.grid, params.trace);
  return {bev::rasterize(comp, params.grid, params.ranges), std::move(labels), std::move(freespace)};
}

std::filesystem::path prepared_path(const std::filesystem::path& dir, int index, const char* kind) {
  char name[64];
  std::snprintf(name, sizeof(name), "%06d.%s", index, kind);
  return dir / name;
}

void write_prepared(const std::filesystem::path& dir, int index, const PreparedFrame& f) {
  std::filesystem::create_directories(dir);
  const auto ct = labelgen::make_class_target(f.labels, f.input.grid);
  save_bevt(prepared_path(dir, index, "input.bevt"), f.input.tensor);
  save_bevt(prepared_path(dir, index, "cls.bevt"), ct.class_map(f.labels));
  save_bevt(prepared_path(dir, index, "reg.bevt"), labelgen::make_regression_target(f.labels, ct));
  save_bevt(prepared_path(dir, index, "fs.bevt"), f.freespace.to_tensor());
  const auto path = prepared_path(dir, index, "labels.jsonl");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + path.string());
  labelgen::write_labels(os, f.labels);
}

LoadedFrame read_prepared(const std::filesystem::path& dir, int index, const GridSpec& grid) {
  auto input = load_bevt(prepared_path(dir, index, "input.bevt"));
  if (input.channels() != bev::kNumFeatures || input.rows() != grid.height_px() || input.cols() != grid.width_px()) {
    throw DataError("prepared input of frame " + std::to_string(index) + " does not match the configured grid");
  }
  auto freespace = labelgen::FreespaceTarget::from_tensor(load_bevt(prepared_path(dir, index, "fs.bevt")),
                                                          grid.downsampled(labelgen::kFreespaceStride));
  const auto path = prepared_path(dir, index, "labels.jsonl");
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  return {std::move(input), labelgen::load_labels(is), std::move(freespace)};
}

train::TrainSample to_sample(LoadedFrame f, const GridSpec& grid) {
  return {std::move(f.input), train::make_targets(std::move(f.labels), std::move(f.freespace), grid)};
}

train::TrainSample to_sample(const PreparedFrame& f) {
  return {f.input.tensor, train::make_targets(f.labels, f.freespace, f.input.grid)};
}

}  // namespace radarnet::pipeline
