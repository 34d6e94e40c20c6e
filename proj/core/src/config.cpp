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

#include "radarnet/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "radarnet/error.hpp"

namespace radarnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ConfigError("non-finite value for " + std::string(key));
  }
  return v;
}

template <typename T>
std::string format_number(T v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::string format_list(const auto& values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ',';
    s += format_number(v);
  }
  return s;
}

template <typename T, typename Ref>
ConfigKey field(const char* name, const char* help, Ref ref) {
  return {name, help, [ref](const RunConfig& c) { return format_number<T>(ref(const_cast<RunConfig&>(c))); },
          [ref, name](RunConfig& c, std::string_view v) { ref(c) = parse_number<T>(name, v); }};
}

#define RN_FIELD(T, name, help, expr) field<T>(name, help, [](RunConfig& c) -> T& { return expr; })

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> k;
  k.push_back(RN_FIELD(int, "grid.size_px", "input raster width and height in pixels", c.grid_px));
  k.push_back(RN_FIELD(double, "grid.range_m", "raster half-extent in meters", c.grid_range_m));
  for (int f = 0; f < bev::kNumFeatures; ++f) {
    static const char* names[bev::kNumFeatures][2] = {
        {"features.doppler_min", "features.doppler_max"}, {"features.elevation_min", "features.elevation_max"},
        {"features.rcs_min", "features.rcs_max"},         {"features.azimuth_min", "features.azimuth_max"},
        {"features.age_min", "features.age_max"}};
    const auto idx = static_cast<std::size_t>(f);
    k.push_back(field<double>(names[f][0], "normalization lower bound",
                              [idx](RunConfig& c) -> double& { return c.features.ranges[idx].min; }));
    k.push_back(field<double>(names[f][1], "normalization upper bound",
                              [idx](RunConfig& c) -> double& { return c.features.ranges[idx].max; }));
  }
  k.push_back(RN_FIELD(double, "ingest.window_s", "peak accumulation window in seconds", c.window_s));
  k.push_back(RN_FIELD(double, "ingest.rcs_floor_dbm", "peaks below this RCS are dropped", c.rcs_floor_dbm));
  k.push_back(RN_FIELD(int, "labels.min_vehicle_peaks", "vehicles with fewer interior peaks are dropped",
                       c.transfer.min_vehicle_peaks));
  k.push_back(RN_FIELD(double, "labels.filter_range_m", "the vehicle peak filter applies within this range",
                       c.transfer.max_filter_range_m));
  k.push_back(RN_FIELD(int, "labels.n_rays", "free-space rays traced per frame", c.trace.n_rays));
  k.push_back(RN_FIELD(int, "model.base_channels", "stem width; later blocks scale it", c.base_channels));
  k.push_back(RN_FIELD(double, "train.lr", "Adam learning rate", c.train.lr));
  k.push_back(RN_FIELD(int, "train.iterations", "optimizer steps", c.train.iterations));
  k.push_back(RN_FIELD(int, "train.batch_size", "frames per step", c.train.batch_size));
  k.push_back(RN_FIELD(std::uint64_t, "train.seed", "initialization and shuffling seed", c.train.seed));
  k.push_back({"train.class_weights", "four class-loss weights (vehicle,pedestrian,cyclist,background) or auto",
               [](const RunConfig& c) { return c.train.class_weights ? format_list(*c.train.class_weights) : "auto"; },
               [](RunConfig& c, std::string_view v) {
                 if (trim(v) == "auto") {
                   c.train.class_weights.reset();
                   return;
                 }
                 const auto list = parse_list("train.class_weights", v);
                 if (list.size() != kNumClassChannels) throw ConfigError("train.class_weights needs four values");
                 train::ClassWeights w{};
                 std::copy(list.begin(), list.end(), w.begin());
                 c.train.class_weights = w;
               }});
  k.push_back(RN_FIELD(double, "train.onenet_class_weight", "class-loss factor in the assignment cost",
                       c.train.onenet_class_weight));
  k.push_back(RN_FIELD(int, "train.neg_ratio", "mined negatives per positive", c.train.neg_ratio));
  k.push_back(RN_FIELD(double, "train.beta1", "Adam first-moment decay", c.train.beta1));
  k.push_back(RN_FIELD(double, "train.beta2", "Adam second-moment decay", c.train.beta2));
  k.push_back(RN_FIELD(double, "train.adam_eps", "Adam epsilon", c.train.adam_eps));
  k.push_back(RN_FIELD(int, "train.checkpoint_every", "write a checkpoint every N steps (0 = only at the end)",
                       c.train.checkpoint_every));
  k.push_back(RN_FIELD(double, "decode.threshold_vehicle", "vehicle score threshold", c.thresholds[0]));
  k.push_back(RN_FIELD(double, "decode.threshold_pedestrian", "pedestrian score threshold", c.thresholds[1]));
  k.push_back(RN_FIELD(double, "decode.threshold_cyclist", "cyclist score threshold", c.thresholds[2]));
  k.push_back(RN_FIELD(double, "eval.vehicle_iou", "minimum rotated IoU for a vehicle match", c.eval.vehicle_iou));
  k.push_back(RN_FIELD(double, "eval.center_distance", "maximum centre distance for small-class matches",
                       c.eval.center_distance));
  k.push_back(RN_FIELD(double, "eval.p_free", "cells with occupancy below this are free", c.eval.p_free));
  k.push_back(RN_FIELD(double, "eval.three_class_low", "three-class free threshold", c.eval.three_class_low));
  k.push_back(RN_FIELD(double, "eval.three_class_high", "three-class occupied threshold", c.eval.three_class_high));
  k.push_back({"eval.range_bins", "detection range bin edges in meters",
               [](const RunConfig& c) { return format_list(c.eval.bins.edges); },
               [](RunConfig& c, std::string_view v) { c.eval.bins.edges = parse_list("eval.range_bins", v); }});
  k.push_back(RN_FIELD(int, "rdm.n_phi", "angular bins", c.rdm.n_phi));
  k.push_back(RN_FIELD(int, "rdm.n_d", "radial bins (0 = range / resolution)", c.rdm.n_d));
  k.push_back(RN_FIELD(double, "rdm.d_max", "maximum radius (0 = grid range)", c.rdm.d_max));
  k.push_back(RN_FIELD(double, "rdm.p_occ", "occupancy threshold for the boundary", c.rdm.p_occ));
  k.push_back(RN_FIELD(double, "rdm.ref_x", "reference point x in meters", c.rdm.p_ref.x));
  k.push_back(RN_FIELD(double, "rdm.ref_y", "reference point y in meters", c.rdm.p_ref.y));
  k.push_back(RN_FIELD(std::uint64_t, "synth.seed", "dataset seed", c.scene.seed));
  k.push_back(RN_FIELD(int, "synth.frames", "frames to generate", c.frames));
  k.push_back(RN_FIELD(double, "synth.train_fraction", "leading share of frames used for training",
                       c.train_fraction));
  k.push_back(RN_FIELD(int, "synth.vehicles_min", "vehicles per frame, lower bound", c.scene.vehicles.min));
  k.push_back(RN_FIELD(int, "synth.vehicles_max", "vehicles per frame, upper bound", c.scene.vehicles.max));
  k.push_back(RN_FIELD(int, "synth.pedestrians_min", "pedestrians per frame, lower bound", c.scene.pedestrians.min));
  k.push_back(RN_FIELD(int, "synth.pedestrians_max", "pedestrians per frame, upper bound", c.scene.pedestrians.max));
  k.push_back(RN_FIELD(int, "synth.cyclists_min", "cyclists per frame, lower bound", c.scene.cyclists.min));
  k.push_back(RN_FIELD(int, "synth.cyclists_max", "cyclists per frame, upper bound", c.scene.cyclists.max));
  k.push_back(RN_FIELD(int, "synth.structures_min", "static unlabeled structures, lower bound",
                       c.scene.structures.min));
  k.push_back(RN_FIELD(int, "synth.structures_max", "static unlabeled structures, upper bound",
                       c.scene.structures.max));
  k.push_back(RN_FIELD(double, "synth.ego_speed_min", "ego speed lower bound, m/s", c.scene.ego_speed_min));
  k.push_back(RN_FIELD(double, "synth.ego_speed_max", "ego speed upper bound, m/s", c.scene.ego_speed_max));
  k.push_back(RN_FIELD(double, "synth.ego_yaw_rate_max", "ego yaw rate bound, rad/s", c.scene.ego_yaw_rate_max));
  k.push_back(RN_FIELD(double, "synth.spawn_range_min", "closest spawn range, m", c.scene.spawn_range_min));
  k.push_back(RN_FIELD(double, "synth.spawn_range_max", "farthest spawn range, m", c.scene.spawn_range_max));
  k.push_back(RN_FIELD(int, "synth.max_spawn_retries", "placement attempts per object", c.scene.max_spawn_retries));
  k.push_back(RN_FIELD(double, "synth.window_s", "simulated span per frame, s", c.scene.window_s));
  k.push_back(RN_FIELD(double, "synth.sweep_period_s", "radar sweep period, s", c.scene.sweep_period_s));
  static const char* cls_keys[kNumObstacleClasses][3] = {
      {"synth.vehicle_peak_k", "synth.vehicle_rcs_mean", "synth.vehicle_rcs_sigma"},
      {"synth.pedestrian_peak_k", "synth.pedestrian_rcs_mean", "synth.pedestrian_rcs_sigma"},
      {"synth.cyclist_peak_k", "synth.cyclist_rcs_mean", "synth.cyclist_rcs_sigma"}};
  for (std::size_t i = 0; i < kNumObstacleClasses; ++i) {
    k.push_back(field<double>(cls_keys[i][0], "peaks per sweep at 1 m (rate falls as 1/range)",
                              [i](RunConfig& c) -> double& { return c.scene.classes[i].peak_k; }));
    k.push_back(field<double>(cls_keys[i][1], "mean RCS, dBm",
                              [i](RunConfig& c) -> double& { return c.scene.classes[i].rcs_mean; }));
    k.push_back(field<double>(cls_keys[i][2], "RCS standard deviation, dB",
                              [i](RunConfig& c) -> double& { return c.scene.classes[i].rcs_sigma; }));
  }
  k.push_back(RN_FIELD(double, "synth.structure_peak_k", "structure peaks per sweep at 1 m", c.scene.structure.peak_k));
  k.push_back(RN_FIELD(double, "synth.structure_rcs_mean", "structure mean RCS, dBm", c.scene.structure.rcs_mean));
  k.push_back(RN_FIELD(double, "synth.structure_rcs_sigma", "structure RCS deviation, dB",
                       c.scene.structure.rcs_sigma));
  k.push_back(RN_FIELD(double, "synth.max_peaks_per_sweep", "cap on the per-object peak rate",
                       c.scene.max_peaks_per_sweep));
  k.push_back(RN_FIELD(double, "synth.doppler_sigma", "Doppler noise, m/s", c.scene.doppler_sigma));
  k.push_back(RN_FIELD(double, "synth.clutter_rate", "clutter peaks per sweep", c.scene.clutter_rate));
  k.push_back(RN_FIELD(double, "synth.clutter_range", "clutter disc radius, m", c.scene.clutter_range));
  k.push_back(RN_FIELD(double, "synth.clutter_rcs_mean", "clutter mean RCS, dBm", c.scene.clutter_rcs_mean));
  k.push_back(RN_FIELD(double, "synth.clutter_rcs_sigma", "clutter RCS deviation, dB", c.scene.clutter_rcs_sigma));
  k.push_back(RN_FIELD(double, "synth.dropout", "probability of losing an object peak", c.scene.dropout));
  k.push_back(RN_FIELD(int, "synth.radar_sensors", "sensors around the rig", c.scene.radar_sensors));
  k.push_back(RN_FIELD(int, "synth.lidar_beams", "lidar beams per scan", c.scene.lidar_beams));
  k.push_back(RN_FIELD(double, "synth.lidar_range", "lidar range, m", c.scene.lidar_range));
  return k;
}

#undef RN_FIELD

}  // namespace

pipeline::PrepareParams RunConfig::prepare() const {
  return {grid(), features, window_s, rcs_floor_dbm, transfer, trace};
}

void RunConfig::validate() const {
  if (grid_px <= 0 || !(grid_range_m > 0.0)) throw ConfigError("grid size and range must be positive");
  model().validate();
  features.validate();
  if (!(window_s > 0.0)) throw ConfigError("ingest.window_s must be positive");
  if (transfer.min_vehicle_peaks < 0 || !(transfer.max_filter_range_m >= 0.0)) {
    throw ConfigError("label filter parameters must be non-negative");
  }
  if (trace.n_rays <= 0) throw ConfigError("labels.n_rays must be positive");
  train.validate();
  for (double t : thresholds) {
    if (!(t >= 0.0 && t < 1.0)) throw ConfigError("decode thresholds must lie in [0,1)");
  }
  eval.validate();
  rdm.validate();
  scene.validate();
  if (frames < 0) throw ConfigError("synth.frames must be non-negative");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) throw ConfigError("synth.train_fraction must lie in [0,1]");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_config(RunConfig& cfg, std::istream& is) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  RunConfig cfg;
  apply_config(cfg, is);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_pairs(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  for (const auto& [k, v] : config_pairs(cfg)) os << k << " = " << v << '\n';
}

}  // namespace radarnet
