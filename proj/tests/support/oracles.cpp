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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radarnet::oracle {

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

int flat_cell(double x, double y, int size_px, double range_m) {
  const double res = 2.0 * range_m / size_px;
  const double col = std::floor((x + range_m) / res);
  const double row = std::floor((range_m - y) / res);
  if (col < 0.0 || row < 0.0 || col >= size_px || row >= size_px) return -1;
  return static_cast<int>(row) * size_px + static_cast<int>(col);
}

std::vector<ingest::CompensatedPeak> random_peaks(Rng& rng, const GridSpec& grid, int n) {
  const double R = grid.range_m();
  const double res = grid.resolution_mpp();
  const int W = grid.width_px();
  std::vector<Point2> hot(static_cast<std::size_t>(uniform_int(rng, 1, 6)));
  for (auto& h : hot) h = {uniform(rng, -R, R), uniform(rng, -R, R)};

  std::vector<ingest::CompensatedPeak> out(static_cast<std::size_t>(n));
  for (auto& p : out) {
    const double mode = uniform(rng, 0.0, 1.0);
    if (mode < 0.4) {
      const auto& h = hot[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(hot.size()) - 1))];
      p.x = h.x + uniform(rng, -2.0, 2.0) * res;
      p.y = h.y + uniform(rng, -2.0, 2.0) * res;
    } else if (mode < 0.6) {
      p.x = -R + uniform_int(rng, 0, W) * res;
      p.y = R - uniform_int(rng, 0, W) * res;
    } else if (mode < 0.7) {
      p.x = uniform(rng, -1.3 * R, 1.3 * R);
      p.y = (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uniform(rng, R, 1.3 * R);
    } else {
      p.x = uniform(rng, -R, R);
      p.y = uniform(rng, -R, R);
    }
    p.z = uniform(rng, 0.0, 2.0);
    p.doppler = uniform(rng, -40.0, 40.0);
    p.elevation = uniform(rng, -0.5, 0.5);
    p.rcs = uniform(rng, -50.0, 40.0);
    p.azimuth = uniform(rng, -kPi, kPi);
    p.age = uniform(rng, 0.0, 0.6);
    p.t = -p.age;
    p.sensor_id = uniform_int(rng, 0, 7);
  }
  return out;
}

bev::BevTensor rasterize(std::span<const ingest::CompensatedPeak> peaks, const GridSpec& grid,
                         const bev::FeatureRanges& ranges) {
  const int W = grid.width_px();
  const auto cells = static_cast<std::size_t>(W) * W;
  std::vector<std::vector<std::size_t>> members(cells);
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const int c = flat_cell(peaks[i].x, peaks[i].y, W, grid.range_m());
    if (c < 0) {
      ++skipped;
    } else {
      members[static_cast<std::size_t>(c)].push_back(i);
    }
  }

  bev::BevTensor out{Tensor3(bev::kNumFeatures, W, W), std::vector<int>(cells, 0), grid, skipped};
  for (std::size_t c = 0; c < cells; ++c) {
    const auto& m = members[c];
    out.counts[c] = static_cast<int>(m.size());
    if (m.empty()) continue;
    for (int f = 0; f < bev::kNumFeatures; ++f) {
      double sum = 0.0;
      for (std::size_t i : m) {
        const auto& p = peaks[i];
        const double v[] = {p.doppler, p.elevation, p.rcs, p.azimuth, p.age};
        sum += v[f];
      }
      const double mean = sum / static_cast<double>(m.size());
      const auto& r = ranges.ranges[static_cast<std::size_t>(f)];
      const double clamped = mean < r.min ? r.min : (mean > r.max ? r.max : mean);
      out.tensor.data()[static_cast<std::size_t>(f) * cells + c] = static_cast<float>((clamped - r.min) / (r.max - r.min));
    }
  }
  return out;
}

AssignInstance random_assign_instance(Rng& rng, int max_side, int max_labels, bool ties) {
  AssignInstance inst;
  inst.rows = uniform_int(rng, 1, max_side);
  inst.cols = uniform_int(rng, 1, max_side);
  const int n = inst.rows * inst.cols;
  const int n_labels = uniform_int(rng, 1, max_labels);
  inst.class_weight = ties ? static_cast<double>(uniform_int(rng, 1, 3)) : uniform(rng, 0.1, 4.0);
  auto draw = [&] { return ties ? 0.25 * uniform_int(rng, 0, 4) : uniform(rng, 0.0, 5.0); };
  for (int l = 0; l < n_labels; ++l) {
    std::vector<bool> fg(static_cast<std::size_t>(n), false);
    // A rectangle, sometimes a scattered set, always non-empty.
    if (uniform(rng, 0.0, 1.0) < 0.7) {
      const int r0 = uniform_int(rng, 0, inst.rows - 1), r1 = uniform_int(rng, r0, inst.rows - 1);
      const int c0 = uniform_int(rng, 0, inst.cols - 1), c1 = uniform_int(rng, c0, inst.cols - 1);
      for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c) fg[static_cast<std::size_t>(r * inst.cols + c)] = true;
    } else {
      const double density = uniform(rng, 0.05, 0.5);
      for (int i = 0; i < n; ++i) fg[static_cast<std::size_t>(i)] = uniform(rng, 0.0, 1.0) < density;
      fg[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))] = true;
    }
    std::vector<double> cl(static_cast<std::size_t>(n)), rl(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      cl[static_cast<std::size_t>(i)] = draw();
      rl[static_cast<std::size_t>(i)] = draw();
    }
    inst.foreground.push_back(std::move(fg));
    inst.class_loss.push_back(std::move(cl));
    inst.reg_loss.push_back(std::move(rl));
  }
  return inst;
}

std::vector<int> assign_exhaustive(const AssignInstance& inst) {
  const std::size_t n_labels = inst.foreground.size();
  const int n = inst.rows * inst.cols;
  auto cost = [&](std::size_t l, int p) {
    return inst.class_weight * inst.class_loss[l][static_cast<std::size_t>(p)] + inst.reg_loss[l][static_cast<std::size_t>(p)];
  };
  // Row-major scan with strict < keeps the lexicographically smallest
  // (row, col) among equal costs.
  auto argmin = [&](std::size_t l, const std::vector<bool>& taken) {
    int best = -1;
    for (int p = 0; p < n; ++p) {
      if (!inst.foreground[l][static_cast<std::size_t>(p)] || taken[static_cast<std::size_t>(p)]) continue;
      if (best < 0 || cost(l, p) < cost(l, best)) best = p;
    }
    return best;
  };

  const std::vector<bool> none(static_cast<std::size_t>(n), false);
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t l = 0; l < n_labels; ++l) order.emplace_back(cost(l, argmin(l, none)), l);
  std::sort(order.begin(), order.end());

  std::vector<bool> taken = none;
  std::vector<int> out(n_labels, -1);
  for (const auto& [c, l] : order) {
    const int p = argmin(l, taken);
    out[l] = p;
    if (p >= 0) taken[static_cast<std::size_t>(p)] = true;
  }
  return out;
}

namespace {

void polar_point(Point2 p_ref, int n_phi, int n_d, double d_max, int k, int j, double& x, double& y) {
  const double phi = -kPi + (k + 0.5) * (2.0 * kPi / n_phi);
  const double r = (j + 0.5) * d_max / n_d;
  x = p_ref.x + r * std::cos(phi);
  y = p_ref.y + r * std::sin(phi);
}

}  // namespace

std::int32_t lut_direct(const GridSpec& grid, Point2 p_ref, int n_phi, int n_d, double d_max, int k, int j) {
  double x = 0.0, y = 0.0;
  polar_point(p_ref, n_phi, n_d, d_max, k, j, x, y);
  return flat_cell(x, y, grid.width_px(), grid.range_m());
}

float polar_direct(const decode::OccupancyMap& occ, Point2 p_ref, int n_phi, int n_d, double d_max, int k, int j) {
  const auto idx = lut_direct(occ.grid, p_ref, n_phi, n_d, d_max, k, j);
  return idx < 0 ? 1.0f : occ.prob[static_cast<std::size_t>(idx)];
}

double rdm_linear(std::span<const float> profile, double p_occ, double d_max) {
  const auto n_d = static_cast<int>(profile.size());
  for (int j = 0; j < n_d; ++j) {
    if (!(profile[static_cast<std::size_t>(j)] < p_occ)) return (j + 0.5) * d_max / n_d;
  }
  return d_max;
}

labelgen::FreespaceTarget trace_freespace(const labelgen::LidarScan& scan,
                                          std::span<const labelgen::ObstacleLabel> labels, const GridSpec& grid,
                                          int n_rays) {
  const GridSpec tg = grid.downsampled(labelgen::kFreespaceStride);
  const int W = tg.width_px();
  const double R = tg.range_m();
  const double step = 0.5 * (2.0 * R / W);
  const int n_samples = static_cast<int>(std::floor(R / step));
  const double dphi = 2.0 * kPi / n_rays;

  std::vector<int> hit(static_cast<std::size_t>(n_rays), n_samples);
  for (int k = 0; k < n_rays; ++k) {
    for (const auto& p : scan.points) {
      if (p.is_ground) continue;
      int bin = static_cast<int>(std::floor((std::atan2(p.y, p.x) + kPi) / dphi)) % n_rays;
      if (bin < 0) bin += n_rays;
      if (bin != k) continue;
      const double s = std::floor(std::hypot(p.x, p.y) / step);
      if (s < n_samples) hit[static_cast<std::size_t>(k)] = std::min(hit[static_cast<std::size_t>(k)], static_cast<int>(s));
    }
  }

  const auto cells = static_cast<std::size_t>(W) * W;
  std::vector<bool> any_free(cells, false), any_occ(cells, false), any_unobs(cells, false);
  for (int k = 0; k < n_rays; ++k) {
    const double phi = -kPi + (k + 0.5) * dphi;
    for (int i = 0; i < n_samples; ++i) {
      const double r = (i + 0.5) * step;
      const int c = flat_cell(r * std::cos(phi), r * std::sin(phi), W, R);
      if (c < 0) continue;
      const int h = hit[static_cast<std::size_t>(k)];
      if (i < h) any_free[static_cast<std::size_t>(c)] = true;
      if (i == h) any_occ[static_cast<std::size_t>(c)] = true;
      if (i > h) any_unobs[static_cast<std::size_t>(c)] = true;
    }
  }

  labelgen::FreespaceTarget out{tg, std::vector<labelgen::FreeState>(cells, labelgen::FreeState::kUnobserved)};
  for (std::size_t c = 0; c < cells; ++c) {
    if (any_occ[c]) {
      out.states[c] = labelgen::FreeState::kOccupied;
    } else if (any_free[c]) {
      out.states[c] = any_unobs[c] ? labelgen::FreeState::kPartiallyObserved : labelgen::FreeState::kFree;
    }
  }
  for (const auto& l : labels) {
    const auto box = l.box();
    for (std::size_t c = 0; c < cells; ++c) {
      if (box.contains(cell_center(tg.cell_of(static_cast<int>(c)), tg))) out.states[c] = labelgen::FreeState::kOccupied;
    }
  }
  return out;
}

labelgen::LidarScan random_scan(Rng& rng, double range_m, int n_points) {
  labelgen::LidarScan scan;
  for (int i = 0; i < n_points; ++i) {
    labelgen::LidarScan::Point p;
    const double phi = uniform(rng, -kPi, kPi);
    const double r = uniform(rng, 0.2, 1.2 * range_m);
    p.x = r * std::cos(phi);
    p.y = r * std::sin(phi);
    p.z = uniform(rng, 0.0, 2.0);
    p.is_ground = uniform(rng, 0.0, 1.0) < 0.3;
    scan.points.push_back(p);
  }
  return scan;
}

metrics::MatchResult match_table(std::span<const decode::Detection> dets,
                                 std::span<const labelgen::ObstacleLabel> gts, ObstacleClass cls,
                                 const metrics::EvalConfig& cfg) {
  const std::size_t nd = dets.size(), ng = gts.size();
  constexpr double kNo = -std::numeric_limits<double>::infinity();
  // quality[d][g]: kNo when the pair does not pass the match rule.
  std::vector<std::vector<double>> quality(nd, std::vector<double>(ng, kNo));
  for (std::size_t d = 0; d < nd; ++d) {
    for (std::size_t g = 0; g < ng; ++g) {
      if (cls == ObstacleClass::kVehicle) {
        const double iou = rotated_iou(dets[d].box(), gts[g].box());
        if (iou >= cfg.vehicle_iou) quality[d][g] = iou;
      } else {
        const double dist = std::hypot(dets[d].cx - gts[g].cx, dets[d].cy - gts[g].cy);
        if (dist <= cfg.center_distance) quality[d][g] = -dist;
      }
    }
  }
  // Detection rank: higher score first, lower index among equal scores.
  std::vector<std::size_t> rank(nd);
  for (std::size_t d = 0; d < nd; ++d) rank[d] = d;
  for (std::size_t a = 0; a < nd; ++a) {
    for (std::size_t b = a + 1; b < nd; ++b) {
      const auto &x = dets[rank[a]], &y = dets[rank[b]];
      if (y.score > x.score || (y.score == x.score && rank[b] < rank[a])) std::swap(rank[a], rank[b]);
    }
  }
  metrics::MatchResult m{std::vector<int>(nd, -1), std::vector<int>(ng, -1)};
  for (std::size_t d : rank) {
    int best = -1;
    for (std::size_t g = 0; g < ng; ++g) {
      if (m.gt_to_det[g] >= 0 || quality[d][g] == kNo) continue;
      if (best < 0 || quality[d][g] > quality[d][static_cast<std::size_t>(best)]) best = static_cast<int>(g);
    }
    if (best >= 0) {
      m.det_to_gt[d] = best;
      m.gt_to_det[static_cast<std::size_t>(best)] = static_cast<int>(d);
    }
  }
  return m;
}

}  // namespace radarnet::oracle
