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

#include <malloc.h>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "radarnet/error.hpp"

using radarnet::RunConfig;

int main(int argc, char** argv) {
  // Keep large activation buffers on the heap between steps instead of
  // returning them to the kernel after every allocation.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);

  CLI::App app{"radarnet: radar-only BEV obstacle and free-space perception"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  radarnet::cli::Runtime rt;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override a key: --set key=value (repeatable)");
  app.add_option("--jobs", rt.jobs, "worker threads for per-frame work")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", rt.deterministic, "run per-frame work serially");

  const RunConfig defaults;
  std::map<std::string, std::string> flag_values;
  auto* keys = app.add_option_group("Configuration keys", "every configuration key as a flag");
  for (const auto& k : radarnet::config_keys()) {
    keys->add_option("--" + k.name, flag_values[k.name], k.help + " [" + k.get(defaults) + "]");
  }

  std::string out, data, checkpoint, loss_csv, pred, occupancy, lut_cache, split = "test";
  int frame = 0;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--out", out, "dataset directory")->required();

  auto* prepare = app.add_subcommand("prepare", "rasterize inputs and build targets for every frame");
  prepare->add_option("--data", data, "dataset directory")->required();

  auto* train = app.add_subcommand("train", "train on the training split");
  train->add_option("--data", data, "dataset directory")->required();
  train->add_option("--out", checkpoint, "checkpoint path")->required();
  train->add_option("--loss-csv", loss_csv, "loss history CSV [<out>.loss.csv]");

  auto* infer = app.add_subcommand("infer", "decode detections and occupancy for a split");
  infer->add_option("--checkpoint", checkpoint, "checkpoint path")->required();
  infer->add_option("--data", data, "dataset directory")->required();
  infer->add_option("--out", out, "prediction directory")->required();
  infer->add_option("--split", split, "train, test or all")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "score predictions against prepared targets");
  eval->add_option("--pred", pred, "prediction directory")->required();
  eval->add_option("--data", data, "dataset directory")->required();
  eval->add_option("--out", out, "metrics directory")->required();
  eval->add_option("--split", split, "train, test or all")->capture_default_str();

  auto* rdm = app.add_subcommand("rdm", "radial distance map of an occupancy tensor");
  rdm->add_option("--occupancy", occupancy, "occupancy BEVT file")->required();
  rdm->add_option("--out", out, "CSV path")->required();
  rdm->add_option("--lut-cache", lut_cache, "directory for cached polar lookup tables");

  auto* plot = app.add_subcommand("plot", "render PNGs of a frame");
  plot->add_option("--data", data, "dataset directory")->required();
  plot->add_option("--frame", frame, "frame index")->required();
  plot->add_option("--pred", pred, "prediction directory (optional)");
  plot->add_option("--out", out, "image directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) rt.cfg = radarnet::load_config(config_path);
    for (const auto& k : radarnet::config_keys()) {
      if (keys->get_option("--" + k.name)->count() > 0) radarnet::set_config_value(rt.cfg, k.name, flag_values[k.name]);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw radarnet::ConfigError("--set expects key=value, got '" + s + "'");
      radarnet::set_config_value(rt.cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    rt.cfg.validate();

    namespace cli = radarnet::cli;
    if (*synth) cli::cmd_synth(rt, out);
    if (*prepare) cli::cmd_prepare(rt, data);
    if (*train) cli::cmd_train(rt, data, checkpoint, loss_csv);
    if (*infer) cli::cmd_infer(rt, checkpoint, data, out, split);
    if (*eval) cli::cmd_eval(rt, pred, data, out, split);
    if (*rdm) cli::cmd_rdm(rt, occupancy, out, lut_cache);
    if (*plot) cli::cmd_plot(rt, data, frame, pred, out);
  } catch (const radarnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const radarnet::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const radarnet::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
