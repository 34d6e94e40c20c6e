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

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "radarnet/error.hpp"
#include "radarnet/parallel.hpp"
#include "radarnet/plot.hpp"

namespace fs = std::filesystem;

namespace radarnet::cli {

namespace {

std::ofstream create(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + p.string());
  return os;
}

int jobs_of(const Runtime& rt) { return rt.deterministic ? 1 : rt.jobs; }

std::vector<int> split_frames(const synth::Manifest& m, const std::string& split) {
  if (split == "train") return m.train;
  if (split == "test") return m.test;
  if (split == "all") {
    std::vector<int> all(static_cast<std::size_t>(m.frames));
    for (int i = 0; i < m.frames; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  throw ConfigError("unknown split '" + split + "' (expected train, test or all)");
}

fs::path pred_path(const fs::path& dir, int index, const char* kind) {
  char name[64];
  std::snprintf(name, sizeof(name), "%06d.%s", index, kind);
  return dir / name;
}

}  // namespace

void cmd_synth(const Runtime& rt, const fs::path& out) {
  const auto& cfg = rt.cfg;
  auto manifest = synth::make_manifest(cfg.scene.seed, cfg.frames, cfg.train_fraction);
  manifest.config = config_pairs(cfg);
  parallel_for(cfg.frames, jobs_of(rt), [&](int i) {
    synth::write_frame(out, i, synth::gen_frame(cfg.scene, static_cast<std::uint64_t>(i)));
  });
  synth::write_manifest(out, manifest);
  std::cout << "wrote " << cfg.frames << " frames to " << out.string() << '\n';
}

void cmd_prepare(const Runtime& rt, const fs::path& data) {
  const auto manifest = synth::read_manifest(data);
  const auto params = rt.cfg.prepare();
  const fs::path dir = data / "prepared";
  std::vector<std::size_t> labels(static_cast<std::size_t>(manifest.frames));
  parallel_for(manifest.frames, jobs_of(rt), [&](int i) {
    const auto prepared = pipeline::prepare_frame(synth::read_frame(data, i), params);
    pipeline::write_prepared(dir, i, prepared);
    labels[static_cast<std::size_t>(i)] = prepared.labels.size();
  });
  std::size_t total = 0;
  for (auto n : labels) total += n;
  std::cout << "prepared " << manifest.frames << " frames (" << total << " labels) in " << dir.string() << '\n';
}

void cmd_train(const Runtime& rt, const fs::path& data, const fs::path& checkpoint, fs::path loss_csv) {
  const auto manifest = synth::read_manifest(data);
  const GridSpec grid = rt.cfg.grid();
  std::vector<train::TrainSample> samples;
  for (int i : manifest.train) {
    samples.push_back(pipeline::to_sample(pipeline::read_prepared(data / "prepared", i, grid), grid));
  }
  if (loss_csv.empty()) loss_csv = checkpoint.string() + ".loss.csv";
  auto on_checkpoint = [&](int iteration, const model::Checkpoint& ckpt) {
    model::save_checkpoint(checkpoint.string() + "." + std::to_string(iteration), ckpt);
  };
  const auto result = train::train_loop(samples, rt.cfg.model(), rt.cfg.train, on_checkpoint);
  if (checkpoint.has_parent_path()) fs::create_directories(checkpoint.parent_path());
  model::save_checkpoint(checkpoint, result.checkpoint());
  auto os = create(loss_csv);
  train::write_loss_csv(os, result.history);
  if (!result.history.empty()) {
    std::printf("trained %zu iterations: total loss %.6g -> %.6g\n", result.history.size(),
                result.history.front().total, result.history.back().total);
  }
}

void cmd_infer(const Runtime& rt, const fs::path& checkpoint, const fs::path& data, const fs::path& out,
               const std::string& split) {
  const auto ckpt = model::load_checkpoint(checkpoint);
  const GridSpec grid = rt.cfg.grid();
  if (ckpt.config.input_px != grid.width_px()) {
    throw ConfigError("checkpoint expects " + std::to_string(ckpt.config.input_px) + " px inputs but grid.size_px is " +
                      std::to_string(grid.width_px()));
  }
  model::Network<float> net(ckpt.config, 0);
  model::load_weights(net, ckpt);
  const auto manifest = synth::read_manifest(data);
  fs::create_directories(out);
  for (int i : split_frames(manifest, split)) {
    const auto input = load_bevt(pipeline::prepared_path(data / "prepared", i, "input.bevt"));
    const auto heads = net.infer(input);
    const auto dets = decode::decode_obstacles(heads, rt.cfg.thresholds, grid);
    auto os = create(pred_path(out, i, "detections.jsonl"));
    decode::write_detections(os, dets);
    save_bevt(pred_path(out, i, "occupancy.bevt"), decode::occupancy_prob(heads, grid).to_tensor());
  }
  std::cout << "wrote predictions to " << out.string() << '\n';
}

void cmd_eval(const Runtime& rt, const fs::path& pred, const fs::path& data, const fs::path& out,
              const std::string& split) {
  const auto manifest = synth::read_manifest(data);
  const GridSpec grid = rt.cfg.grid();
  const GridSpec fs_grid = grid.downsampled(labelgen::kFreespaceStride);
  metrics::DetectionEvaluator det_eval(rt.cfg.eval);
  metrics::FreespaceEvaluator fs_eval(rt.cfg.eval, rt.cfg.rdm);
  for (int i : split_frames(manifest, split)) {
    const auto frame = pipeline::read_prepared(data / "prepared", i, grid);
    std::ifstream is(pred_path(pred, i, "detections.jsonl"), std::ios::binary);
    if (!is) throw DataError("missing detections for frame " + std::to_string(i));
    det_eval.add_frame(decode::load_detections(is), frame.labels);
    fs_eval.add_frame(decode::OccupancyMap::from_tensor(load_bevt(pred_path(pred, i, "occupancy.bevt")), fs_grid),
                      frame.freespace);
  }
  const auto det = det_eval.report();
  const auto fsr = fs_eval.report();
  const auto tri = fs_eval.three_class();
  {
    auto os = create(out / "detection.csv");
    metrics::write_detection_csv(os, det, rt.cfg.eval.bins);
  }
  {
    auto os = create(out / "freespace.csv");
    metrics::write_freespace_csv(os, fsr, tri);
  }
  {
    auto os = create(out / "summary.json");
    os << metrics::summary_json(det, rt.cfg.eval.bins, &fsr, &tri);
  }
  std::printf("free-space accuracy %.4f iou %.4f rdm_mae %.3f m rdm_iou %.4f\n", fsr.accuracy, fsr.iou, fsr.rdm_mae,
              fsr.rdm_iou);
}

void cmd_rdm(const Runtime& rt, const fs::path& occupancy, const fs::path& out, const fs::path& lut_cache) {
  const GridSpec fs_grid = rt.cfg.grid().downsampled(labelgen::kFreespaceStride);
  const auto occ = decode::OccupancyMap::from_tensor(load_bevt(occupancy), fs_grid);
  const auto p = rt.cfg.rdm.resolved(fs_grid);
  const auto lut = lut_cache.empty() ? rdm::build_polar_lut(fs_grid, p.p_ref, p.n_phi, p.n_d, p.d_max)
                                     : rdm::cached_lut(lut_cache, fs_grid, p.p_ref, p.n_phi, p.n_d, p.d_max);
  const auto r = rdm::extract_rdm(rdm::to_polar(occ, lut), p.p_occ);
  auto os = create(out);
  rdm::write_rdm_csv(os, r);
}

void cmd_plot(const Runtime& rt, const fs::path& data, int frame, const fs::path& pred, const fs::path& out) {
  const GridSpec grid = rt.cfg.grid();
  const GridSpec fs_grid = grid.downsampled(labelgen::kFreespaceStride);
  const auto f = pipeline::read_prepared(data / "prepared", frame, grid);
  fs::create_directories(out);
  auto name = [&](const std::string& what) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06d.", frame);
    return out / (buf + what + ".png");
  };
  for (int c = 0; c < bev::kNumFeatures; ++c) {
    plot::save_png(name("input_" + std::string(bev::feature_name(static_cast<bev::Feature>(c)))),
                   plot::render_channel(f.input, c));
  }
  plot::save_png(name("class_target"),
                 plot::render_class_map(load_bevt(pipeline::prepared_path(data / "prepared", frame, "cls.bevt"))));
  auto fs_img = plot::render_freespace(f.freespace);
  for (const auto& l : f.labels) plot::draw_box(fs_img, fs_grid, l.box(), {255, 255, 255});
  plot::save_png(name("freespace_target"), fs_img);

  if (pred.empty()) return;
  const auto occ = decode::OccupancyMap::from_tensor(load_bevt(pred_path(pred, frame, "occupancy.bevt")), fs_grid);
  const auto p = rt.cfg.rdm.resolved(fs_grid);
  const auto lut = rdm::build_polar_lut(fs_grid, p.p_ref, p.n_phi, p.n_d, p.d_max);
  auto occ_img = plot::render_occupancy(occ);
  plot::draw_rdm(occ_img, fs_grid, rdm::extract_rdm(rdm::to_polar(occ, lut), p.p_occ), p.p_ref, {0, 220, 255});
  plot::save_png(name("occupancy"), occ_img);

  std::ifstream is(pred_path(pred, frame, "detections.jsonl"), std::ios::binary);
  if (!is) throw DataError("missing detections for frame " + std::to_string(frame));
  const auto dets = decode::load_detections(is);
  plot::Image det_img = plot::render_channel(f.input, static_cast<int>(bev::Feature::kRcs));
  for (const auto& l : f.labels) plot::draw_box(det_img, grid, l.box(), {60, 220, 60});
  for (const auto& d : dets) plot::draw_box(det_img, grid, d.box(), plot::class_color(static_cast<int>(d.cls)));
  plot::save_png(name("detections"), det_img);
}

}  // namespace radarnet::cli
