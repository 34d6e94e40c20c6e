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

#include "radarnet/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"
#include "radarnet/error.hpp"

namespace radarnet::synth {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
double normal(Rng& rng, double mean, double sigma) {
  return sigma > 0.0 ? std::normal_distribution<double>(mean, sigma)(rng) : mean;
}
int uniform_int(Rng& rng, IntRange r) { return std::uniform_int_distribution<int>(r.min, r.max)(rng); }
int poisson(Rng& rng, double lambda) {
  return lambda > 0.0 ? std::poisson_distribution<int>(lambda)(rng) : 0;
}

Point2 rotate(Point2 p, double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

OrientedBox to_rig(const OrientedBox& world, const Pose2& ego) {
  const Point2 c = transform_point(invert(ego), {world.cx, world.cy});
  return {c.x, c.y, world.width, world.length, normalize_angle(world.yaw - ego.yaw)};
}

OrientedBox inflated(const OrientedBox& b, double margin) {
  return {b.cx, b.cy, b.width + 2.0 * margin, b.length + 2.0 * margin, b.yaw};
}

// Height range of returns per object kind.
std::pair<double, double> height_range(const Track& t) {
  if (!t.labeled) return {0.2, 2.0};
  switch (t.cls) {
    case ObstacleClass::kVehicle: return {0.3, 1.5};
    case ObstacleClass::kPedestrian: return {0.5, 1.7};
    case ObstacleClass::kCyclist: return {0.5, 1.6};
  }
  return {0.3, 1.5};
}

int sensor_of(double azimuth, int sensors) {
  const int s = static_cast<int>(std::floor((azimuth + kPi) / (2.0 * kPi / sensors)));
  return std::clamp(s, 0, sensors - 1);
}

constexpr double kEgoLength = 4.6;
constexpr double kEgoWidth = 2.0;
constexpr double kSpawnMargin = 0.2;
constexpr double kLidarHeight = 0.8;
constexpr double kGroundHeight = -1.8;

}  // namespace

void SceneConfig::validate() const {
  for (const auto* r : {&vehicles, &pedestrians, &cyclists, &structures}) {
    if (r->min < 0 || r->max < r->min) throw ConfigError("object count ranges must satisfy 0 <= min <= max");
  }
  if (!(ego_speed_min >= 0.0 && ego_speed_max >= ego_speed_min)) throw ConfigError("invalid ego speed range");
  if (!(ego_yaw_rate_max >= 0.0)) throw ConfigError("ego yaw rate bound must be non-negative");
  if (!(spawn_range_min >= 0.0 && spawn_range_max > spawn_range_min)) throw ConfigError("invalid spawn range");
  if (max_spawn_retries <= 0) throw ConfigError("spawn retries must be positive");
  if (!(window_s > 0.0) || !(sweep_period_s > 0.0) || sweep_period_s > window_s) {
    throw ConfigError("window and sweep period must be positive with period <= window");
  }
  for (const auto& c : classes) {
    if (!(c.peak_k >= 0.0) || !(c.rcs_sigma >= 0.0)) throw ConfigError("sensor model rates must be non-negative");
  }
  if (!(structure.peak_k >= 0.0) || !(structure.rcs_sigma >= 0.0)) {
    throw ConfigError("sensor model rates must be non-negative");
  }
  if (!(max_peaks_per_sweep >= 0.0) || !(doppler_sigma >= 0.0) || !(clutter_rate >= 0.0) ||
      !(clutter_range > 0.0) || !(clutter_rcs_sigma >= 0.0)) {
    throw ConfigError("sensor model rates must be non-negative");
  }
  if (!(dropout >= 0.0 && dropout <= 1.0)) throw ConfigError("dropout must lie in [0,1]");
  if (radar_sensors <= 0) throw ConfigError("radar sensor count must be positive");
  if (lidar_beams <= 0 || !(lidar_range > 0.0)) throw ConfigError("lidar beams and range must be positive");
}

OrientedBox Track::box_at(double dt) const {
  return {p0.x + v.x * dt + 0.5 * a.x * dt * dt, p0.y + v.y * dt + 0.5 * a.y * dt * dt, width, length, yaw};
}

Point2 Track::velocity_at(double dt) const { return {v.x + a.x * dt, v.y + a.y * dt}; }

Pose2 EgoMotion::at(double dt) const {
  const double th = start.yaw + yaw_rate * dt;
  Pose2 p;
  if (std::abs(yaw_rate) < 1e-9) {
    p.x = start.x + speed * dt * std::cos(start.yaw);
    p.y = start.y + speed * dt * std::sin(start.yaw);
  } else {
    const double r = speed / yaw_rate;
    p.x = start.x + r * (std::sin(th) - std::sin(start.yaw));
    p.y = start.y - r * (std::cos(th) - std::cos(start.yaw));
  }
  p.yaw = normalize_angle(th);
  p.t = start.t + dt;
  return p;
}

Point2 EgoMotion::velocity_at(double dt) const {
  const double th = start.yaw + yaw_rate * dt;
  return {speed * std::cos(th), speed * std::sin(th)};
}

Pose2 Scene::ego_pose(double t) const {
  Pose2 p = ego.at(t - t0);
  p.t = t;
  return p;
}

std::vector<Pose2> Scene::trajectory(double period) const {
  std::vector<Pose2> out;
  const int n = static_cast<int>(std::llround((t_ref - t0) / period));
  for (int i = 0; i <= n; ++i) out.push_back(ego_pose(i == n ? t_ref : t0 + i * period));
  return out;
}

std::vector<labelgen::ObstacleLabel> Scene::labels_at(double t) const {
  const Pose2 e = ego_pose(t);
  std::vector<labelgen::ObstacleLabel> out;
  for (const auto& tr : tracks) {
    if (!tr.labeled) continue;
    const OrientedBox b = to_rig(tr.box_at(t - t0), e);
    out.push_back({tr.cls, b.cx, b.cy, b.width, b.length, b.yaw, 0});
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Scene gen_scene(const SceneConfig& cfg, std::uint64_t frame_index) {
  cfg.validate();
  Scene s;
  s.seed = derive_seed(cfg.seed, frame_index);
  Rng rng(s.seed);
  s.t0 = static_cast<double>(frame_index);
  s.t_ref = s.t0 + cfg.window_s;
  s.ego.start = {0.0, 0.0, 0.0, s.t0};
  s.ego.speed = uniform(rng, cfg.ego_speed_min, cfg.ego_speed_max);
  s.ego.yaw_rate = uniform(rng, -cfg.ego_yaw_rate_max, cfg.ego_yaw_rate_max);
  const Pose2 ego_ref = s.ego.at(cfg.window_s);

  std::vector<OrientedBox> placed{{0.0, 0.0, kEgoWidth, kEgoLength, 0.0}};
  auto spawn = [&](bool labeled, ObstacleClass cls) {
    for (int attempt = 0; attempt < cfg.max_spawn_retries; ++attempt) {
      const double r = uniform(rng, cfg.spawn_range_min, cfg.spawn_range_max);
      const double phi = uniform(rng, -kPi, kPi);
      Track t;
      t.labeled = labeled;
      t.cls = cls;
      double speed = 0.0;
      double yaw = uniform(rng, -kPi, kPi);
      if (!labeled) {
        t.width = uniform(rng, 0.3, 1.0);
        t.length = uniform(rng, 0.3, 8.0);
      } else if (cls == ObstacleClass::kPedestrian) {
        t.width = uniform(rng, 0.5, 0.7);
        t.length = uniform(rng, 0.5, 0.7);
        speed = uniform(rng, 0.0, 1.5);
      } else {
        const bool vehicle = cls == ObstacleClass::kVehicle;
        t.width = vehicle ? uniform(rng, 1.7, 2.0) : uniform(rng, 0.5, 0.7);
        t.length = vehicle ? uniform(rng, 4.0, 5.0) : uniform(rng, 1.6, 2.0);
        if (uniform(rng, 0.0, 1.0) < 0.7) yaw = (uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : kPi) + normal(rng, 0.0, 0.1);
        const bool parked = vehicle && uniform(rng, 0.0, 1.0) < 0.3;
        speed = parked ? 0.0 : vehicle ? uniform(rng, 2.0, 12.0) : uniform(rng, 1.0, 6.0);
      }
      const OrientedBox local{r * std::cos(phi), r * std::sin(phi), t.width, t.length, normalize_angle(yaw)};
      const bool clear = std::none_of(placed.begin(), placed.end(), [&](const OrientedBox& o) {
        return boxes_overlap(inflated(local, kSpawnMargin), inflated(o, kSpawnMargin));
      });
      if (!clear) continue;
      placed.push_back(local);
      const Point2 c = transform_point(ego_ref, {local.cx, local.cy});
      t.yaw = normalize_angle(local.yaw + ego_ref.yaw);
      t.v = {speed * std::cos(t.yaw), speed * std::sin(t.yaw)};
      if (speed > 0.0) t.a = {normal(rng, 0.0, 0.2), normal(rng, 0.0, 0.2)};
      const double w = cfg.window_s;
      t.p0 = {c.x - t.v.x * w - 0.5 * t.a.x * w * w, c.y - t.v.y * w - 0.5 * t.a.y * w * w};
      t.id = static_cast<int>(s.tracks.size());
      s.tracks.push_back(t);
      return;
    }
    throw ConfigError("could not place a non-overlapping object after " + std::to_string(cfg.max_spawn_retries) +
                      " attempts");
  };
  const int nv = uniform_int(rng, cfg.vehicles);
  const int np = uniform_int(rng, cfg.pedestrians);
  const int nc = uniform_int(rng, cfg.cyclists);
  const int ns = uniform_int(rng, cfg.structures);
  for (int i = 0; i < nv; ++i) spawn(true, ObstacleClass::kVehicle);
  for (int i = 0; i < np; ++i) spawn(true, ObstacleClass::kPedestrian);
  for (int i = 0; i < nc; ++i) spawn(true, ObstacleClass::kCyclist);
  for (int i = 0; i < ns; ++i) spawn(false, ObstacleClass::kVehicle);
  return s;
}

std::optional<double> ray_box_distance(Point2 origin, Point2 dir, const OrientedBox& box) {
  const Point2 o = rotate({origin.x - box.cx, origin.y - box.cy}, -box.yaw);
  const Point2 d = rotate(dir, -box.yaw);
  const double half[2] = {0.5 * box.length, 0.5 * box.width};
  const double oo[2] = {o.x, o.y};
  const double dd[2] = {d.x, d.y};
  double tmin = -INFINITY, tmax = INFINITY;
  for (int k = 0; k < 2; ++k) {
    if (dd[k] == 0.0) {
      if (std::abs(oo[k]) > half[k]) return std::nullopt;
      continue;
    }
    double t1 = (-half[k] - oo[k]) / dd[k];
    double t2 = (half[k] - oo[k]) / dd[k];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  if (tmax < tmin || tmax < 0.0) return std::nullopt;
  return std::max(tmin, 0.0);
}

std::vector<SimulatedPeak> simulate_radar(const Scene& scene, const SceneConfig& cfg, double t) {
  Rng rng(derive_seed(scene.seed, std::bit_cast<std::uint64_t>(t)));
  const Pose2 e = scene.ego_pose(t);
  const Point2 ve = scene.ego.velocity_at(t - scene.t0);
  std::vector<OrientedBox> boxes;
  for (const auto& tr : scene.tracks) boxes.push_back(to_rig(tr.box_at(t - scene.t0), e));

  std::vector<SimulatedPeak> out;
  auto emit = [&](Point2 p, double z, Point2 v_world, double rcs, int id) {
    const double r = std::hypot(p.x, p.y);
    const Point2 u{p.x / r, p.y / r};
    const Point2 rel = rotate({v_world.x - ve.x, v_world.y - ve.y}, -e.yaw);
    SimulatedPeak sp;
    sp.object_id = id;
    auto& pk = sp.peak;
    pk.x = p.x;
    pk.y = p.y;
    pk.z = z;
    pk.doppler = -(rel.x * u.x + rel.y * u.y) + normal(rng, 0.0, cfg.doppler_sigma);
    pk.azimuth = normalize_angle(std::atan2(p.y, p.x));
    pk.elevation = std::atan2(z, r);
    pk.rcs = rcs;
    pk.t = t;
    pk.sensor_id = sensor_of(pk.azimuth, cfg.radar_sensors);
    out.push_back(sp);
  };

  for (std::size_t i = 0; i < scene.tracks.size(); ++i) {
    const Track& tr = scene.tracks[i];
    const OrientedBox& b = boxes[i];
    const ClassSensorModel& model = tr.labeled ? cfg.classes[static_cast<std::size_t>(tr.cls)] : cfg.structure;
    const double range = std::max(1.0, std::hypot(b.cx, b.cy));
    const int n = poisson(rng, std::min(cfg.max_peaks_per_sweep, model.peak_k / range));
    if (n == 0) continue;
    // Faces turned towards the sensor.
    const auto c = b.corners();
    std::array<double, 4> weight{};
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Point2 p = c[k], q = c[(k + 1) % 4];
      const double len = std::hypot(q.x - p.x, q.y - p.y);
      const Point2 normal_out{(q.y - p.y) / len, -(q.x - p.x) / len};
      const Point2 mid{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
      if (normal_out.x * mid.x + normal_out.y * mid.y < 0.0) weight[k] = len;
      total += weight[k];
    }
    if (total <= 0.0) continue;  // sensor inside the box
    const auto [zlo, zhi] = height_range(tr);
    for (int m = 0; m < n; ++m) {
      double pick = uniform(rng, 0.0, total);
      int k = -1;
      for (int e = 0; e < 4; ++e) {
        if (weight[e] == 0.0) continue;
        k = e;
        if (pick < weight[e]) break;
        pick -= weight[e];
      }
      const Point2 p = c[k], q = c[(k + 1) % 4];
      const double s = uniform(rng, 0.0, 1.0);
      const Point2 surf{p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)};
      const double len = std::hypot(q.x - p.x, q.y - p.y);
      const Point2 normal_out{(q.y - p.y) / len, -(q.x - p.x) / len};
      const double depth = uniform(rng, -0.1, 0.3);
      const Point2 pt{surf.x - normal_out.x * depth, surf.y - normal_out.y * depth};
      const double z = uniform(rng, zlo, zhi);
      const double rcs = normal(rng, model.rcs_mean, model.rcs_sigma);
      const bool dropped = uniform(rng, 0.0, 1.0) < cfg.dropout;
      const double dist = std::hypot(surf.x, surf.y);
      const Point2 dir{surf.x / dist, surf.y / dist};
      bool occluded = false;
      for (std::size_t j = 0; j < boxes.size() && !occluded; ++j) {
        if (j == i) continue;
        const auto d = ray_box_distance({0.0, 0.0}, dir, boxes[j]);
        occluded = d && *d < dist - 1e-6;
      }
      if (dropped || occluded || std::hypot(pt.x, pt.y) < 1e-3) continue;
      emit(pt, z, tr.velocity_at(t - scene.t0), rcs, tr.id);
    }
  }

  const int nc = poisson(rng, cfg.clutter_rate);
  for (int m = 0; m < nc; ++m) {
    const double r = cfg.clutter_range * std::sqrt(uniform(rng, 0.0, 1.0));
    const double phi = uniform(rng, -kPi, kPi);
    const double z = uniform(rng, -0.2, 0.5);
    const double rcs = normal(rng, cfg.clutter_rcs_mean, cfg.clutter_rcs_sigma);
    if (r < 1e-3) continue;
    emit({r * std::cos(phi), r * std::sin(phi)}, z, {0.0, 0.0}, rcs, -1);
  }
  return out;
}

labelgen::LidarScan simulate_lidar(const Scene& scene, const SceneConfig& cfg, double t) {
  Rng rng(derive_seed(scene.seed ^ 0x1D4Au, std::bit_cast<std::uint64_t>(t)));
  const Pose2 e = scene.ego_pose(t);
  std::vector<OrientedBox> boxes;
  for (const auto& tr : scene.tracks) boxes.push_back(to_rig(tr.box_at(t - scene.t0), e));
  labelgen::LidarScan scan;
  for (int k = 0; k < cfg.lidar_beams; ++k) {
    const double phi = -kPi + (k + 0.5) * (2.0 * kPi / cfg.lidar_beams);
    const Point2 dir{std::cos(phi), std::sin(phi)};
    double best = INFINITY;
    for (const auto& b : boxes) {
      const auto d = ray_box_distance({0.0, 0.0}, dir, b);
      if (d && *d < best) best = *d;
    }
    if (best <= cfg.lidar_range) {
      scan.points.push_back({best * dir.x, best * dir.y, kLidarHeight, false});
    } else {
      const double r = uniform(rng, 2.0, cfg.lidar_range);
      scan.points.push_back({r * dir.x, r * dir.y, kGroundHeight, true});
    }
  }
  return scan;
}

Frame gen_frame(const SceneConfig& cfg, std::uint64_t frame_index) {
  const Scene scene = gen_scene(cfg, frame_index);
  Frame f;
  f.t_ref = scene.t_ref;
  f.poses = scene.trajectory(cfg.sweep_period_s);
  // Sweeps at t_ref, t_ref - period, ... within the window, oldest first.
  const int sweeps = static_cast<int>(std::floor(cfg.window_s / cfg.sweep_period_s + 1e-9));
  for (int i = sweeps - 1; i >= 0; --i) {
    const double t = i == 0 ? scene.t_ref : scene.t_ref - i * cfg.sweep_period_s;
    if (t < scene.t0) continue;
    for (const auto& sp : simulate_radar(scene, cfg, t)) f.peaks.push_back(sp.peak);
  }
  f.labels = scene.labels_at(scene.t_ref);
  f.lidar = simulate_lidar(scene, cfg, scene.t_ref);
  return f;
}

std::filesystem::path frame_path(const std::filesystem::path& dataset, int index, const char* kind) {
  char name[64];
  std::snprintf(name, sizeof(name), "%06d.%s.jsonl", index, kind);
  return dataset / "frames" / name;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw DataError("cannot open " + p.string());
  return is;
}

template <typename Fn>
auto parse_file(const std::filesystem::path& p, Fn&& fn) {
  auto is = open_in(p);
  try {
    return fn(is);
  } catch (const RejectedRecord& e) {
    throw DataError(p.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

}  // namespace

void write_frame(const std::filesystem::path& dataset, int index, const Frame& f) {
  std::filesystem::create_directories(dataset / "frames");
  {
    auto os = open_out(frame_path(dataset, index, "peaks"));
    ingest::write_peaks(os, f.peaks);
  }
  {
    auto os = open_out(frame_path(dataset, index, "poses"));
    ingest::write_poses(os, f.poses);
  }
  {
    auto os = open_out(frame_path(dataset, index, "labels"));
    labelgen::write_labels(os, f.labels);
  }
  {
    auto os = open_out(frame_path(dataset, index, "lidar"));
    labelgen::write_lidar(os, f.lidar);
  }
}

Frame read_frame(const std::filesystem::path& dataset, int index) {
  Frame f;
  f.peaks = parse_file(frame_path(dataset, index, "peaks"), [](std::istream& is) { return ingest::load_peaks(is); });
  f.poses = parse_file(frame_path(dataset, index, "poses"), [](std::istream& is) { return ingest::load_poses(is); });
  f.labels =
      parse_file(frame_path(dataset, index, "labels"), [](std::istream& is) { return labelgen::load_labels(is); });
  f.lidar.points =
      parse_file(frame_path(dataset, index, "lidar"), [](std::istream& is) { return labelgen::load_lidar(is); });
  if (f.poses.empty()) throw DataError("frame " + std::to_string(index) + " has no poses");
  f.t_ref = std::max_element(f.poses.begin(), f.poses.end(), [](const Pose2& a, const Pose2& b) {
              return a.t < b.t;
            })->t;
  return f;
}

void write_manifest(const std::filesystem::path& dataset, const Manifest& m) {
  nlohmann::ordered_json j;
  j["seed"] = m.seed;
  j["frames"] = m.frames;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  j["split"] = {{"train", m.train}, {"test", m.test}};
  std::filesystem::create_directories(dataset);
  auto os = open_out(dataset / "manifest.json");
  os << j.dump(2) << '\n';
}

Manifest read_manifest(const std::filesystem::path& dataset) {
  auto is = open_in(dataset / "manifest.json");
  Manifest m;
  try {
    const auto j = nlohmann::ordered_json::parse(is);
    m.seed = j.at("seed").get<std::uint64_t>();
    m.frames = j.at("frames").get<int>();
    for (const auto& [k, v] : j.at("config").items()) m.config.emplace_back(k, v.get<std::string>());
    m.train = j.at("split").at("train").get<std::vector<int>>();
    m.test = j.at("split").at("test").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest: " + std::string(e.what()));
  }
  if (m.frames < 0) throw DataError("manifest frame count is negative");
  for (const auto* list : {&m.train, &m.test}) {
    for (int i : *list) {
      if (i < 0 || i >= m.frames) throw DataError("manifest split references a missing frame");
    }
  }
  return m;
}

Manifest make_manifest(std::uint64_t seed, int frames, double train_fraction) {
  if (frames < 0) throw ConfigError("frame count must be non-negative");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) throw ConfigError("train fraction must lie in [0,1]");
  Manifest m;
  m.seed = seed;
  m.frames = frames;
  const int n_train = static_cast<int>(std::lround(train_fraction * frames));
  for (int i = 0; i < frames; ++i) (i < n_train ? m.train : m.test).push_back(i);
  return m;
}

}  // namespace radarnet::synth
