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

#include "radarnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "radarnet/error.hpp"

namespace radarnet::metrics {

int RangeBins::bin_of(double range) const {
  if (!(range >= edges.front()) || range > edges.back()) return -1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), range);
  const int b = static_cast<int>(it - edges.begin()) - 1;
  return std::min(b, count() - 1);
}

std::string RangeBins::label(int bin) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g-%g", edges[static_cast<std::size_t>(bin)],
                edges[static_cast<std::size_t>(bin) + 1]);
  return buf;
}

void RangeBins::validate() const {
  if (edges.size() < 2) throw ConfigError("range bins need at least two edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) throw ConfigError("range bin edges must be strictly increasing");
  }
  if (!(edges.front() >= 0.0)) throw ConfigError("range bin edges must be non-negative");
}

void EvalConfig::validate() const {
  if (!(vehicle_iou > 0.0 && vehicle_iou <= 1.0)) throw ConfigError("vehicle IoU threshold must lie in (0,1]");
  if (!(center_distance > 0.0)) throw ConfigError("center distance threshold must be positive");
  if (!(p_free > 0.0 && p_free < 1.0)) throw ConfigError("p_free must lie in (0,1)");
  if (!(three_class_low > 0.0 && three_class_low < three_class_high && three_class_high < 1.0)) {
    throw ConfigError("three-class thresholds must satisfy 0 < low < high < 1");
  }
  bins.validate();
}

std::optional<double> Counts::precision() const {
  if (tp + fp == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> Counts::recall() const {
  if (tp + fn == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> Counts::f_score() const {
  if (tp + fp + fn == 0) return std::nullopt;
  // 2PR/(P+R) written on counts so empty precision or recall still yields 0.
  return 2.0 * tp / static_cast<double>(2 * tp + fp + fn);
}

Counts MatchResult::counts() const {
  Counts c;
  for (int g : det_to_gt) (g >= 0 ? c.tp : c.fp) += 1;
  for (int d : gt_to_det) c.fn += d < 0;
  return c;
}

bool is_match(const decode::Detection& det, const labelgen::ObstacleLabel& gt, ObstacleClass cls,
              const EvalConfig& cfg) {
  if (cls == ObstacleClass::kVehicle) return rotated_iou(det.box(), gt.box()) >= cfg.vehicle_iou;
  return std::hypot(det.cx - gt.cx, det.cy - gt.cy) <= cfg.center_distance;
}

MatchResult match_detections(std::span<const decode::Detection> dets,
                             std::span<const labelgen::ObstacleLabel> gts, ObstacleClass cls,
                             const EvalConfig& cfg) {
  MatchResult m{std::vector<int>(dets.size(), -1), std::vector<int>(gts.size(), -1)};
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  const bool vehicle = cls == ObstacleClass::kVehicle;
  for (std::size_t d : order) {
    int best = -1;
    double best_q = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (m.gt_to_det[g] >= 0 || !is_match(dets[d], gts[g], cls, cfg)) continue;
      // Quality: larger IoU or smaller centre distance wins.
      const double q = vehicle ? rotated_iou(dets[d].box(), gts[g].box())
                               : -std::hypot(dets[d].cx - gts[g].cx, dets[d].cy - gts[g].cy);
      if (best < 0 || q > best_q) {
        best = static_cast<int>(g);
        best_q = q;
      }
    }
    if (best >= 0) {
      m.det_to_gt[d] = best;
      m.gt_to_det[static_cast<std::size_t>(best)] = static_cast<int>(d);
    }
  }
  return m;
}

std::vector<Counts> counts_by_range(std::span<const decode::Detection> dets,
                                    std::span<const labelgen::ObstacleLabel> gts, const MatchResult& m,
                                    const RangeBins& bins) {
  std::vector<Counts> out(static_cast<std::size_t>(bins.count()));
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const int b = bins.bin_of(std::hypot(gts[g].cx, gts[g].cy));
    if (b < 0) continue;
    (m.gt_to_det[g] >= 0 ? out[static_cast<std::size_t>(b)].tp : out[static_cast<std::size_t>(b)].fn) += 1;
  }
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (m.det_to_gt[d] >= 0) continue;
    const int b = bins.bin_of(std::hypot(dets[d].cx, dets[d].cy));
    if (b >= 0) out[static_cast<std::size_t>(b)].fp += 1;
  }
  return out;
}

std::optional<double> average_precision(std::vector<ScoredDetection> dets, long n_gt) {
  if (n_gt <= 0) return std::nullopt;
  std::stable_sort(dets.begin(), dets.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  std::vector<double> prec, rec;
  long tp = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    tp += dets[i].tp;
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  // Precision envelope from the right.
  for (std::size_t i = prec.size(); i-- > 1;) prec[i - 1] = std::max(prec[i - 1], prec[i]);
  double ap = 0.0, prev_r = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    ap += (rec[i] - prev_r) * prec[i];
    prev_r = rec[i];
  }
  return ap;
}

DetectionEvaluator::DetectionEvaluator(EvalConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  for (auto& b : bins_) b.assign(static_cast<std::size_t>(cfg_.bins.count()), Counts{});
}

void DetectionEvaluator::add_frame(std::span<const decode::Detection> dets,
                                   std::span<const labelgen::ObstacleLabel> gts) {
  for (int c = 0; c < kNumObstacleClasses; ++c) {
    const auto cls = static_cast<ObstacleClass>(c);
    std::vector<decode::Detection> d;
    std::vector<labelgen::ObstacleLabel> g;
    for (const auto& x : dets) {
      if (x.cls == cls) d.push_back(x);
    }
    for (const auto& x : gts) {
      if (x.cls == cls) g.push_back(x);
    }
    const auto m = match_detections(d, g, cls, cfg_);
    const auto binned = counts_by_range(d, g, m, cfg_.bins);
    for (std::size_t b = 0; b < binned.size(); ++b) bins_[c][b] += binned[b];
    overall_[c] += m.counts();
    for (std::size_t i = 0; i < d.size(); ++i) scored_[c].push_back({d[i].score, m.det_to_gt[i] >= 0});
    n_gt_[c] += static_cast<long>(g.size());
  }
}

DetectionReport DetectionEvaluator::report() const {
  DetectionReport r;
  double sum = 0.0;
  int n = 0;
  for (int c = 0; c < kNumObstacleClasses; ++c) {
    r.classes[c].by_range = bins_[c];
    r.classes[c].overall = overall_[c];
    r.classes[c].ap = average_precision(scored_[c], n_gt_[c]);
    if (r.classes[c].ap) {
      sum += *r.classes[c].ap;
      ++n;
    }
  }
  if (n > 0) r.map = sum / n;
  return r;
}

OccupancyClass classify_three(double p, double low, double high) {
  // Maps hold f32 probabilities, so the boundaries are compared at that
  // precision: a stored 0.35f still reads as 0.35.
  const float q = static_cast<float>(p);
  if (q > static_cast<float>(high)) return OccupancyClass::kOccupied;
  if (q < static_cast<float>(low)) return OccupancyClass::kFree;
  return OccupancyClass::kUnobserved;
}

FreespaceEvaluator::FreespaceEvaluator(EvalConfig cfg, rdm::RdmParams rdm) : cfg_(std::move(cfg)), rdm_(rdm) {
  cfg_.validate();
  rdm_.validate();
}

void FreespaceEvaluator::add_frame(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target) {
  using labelgen::FreeState;
  if (!(occ.grid == target.grid) || occ.prob.size() != target.states.size()) {
    throw DataError("occupancy and free-space target grids differ");
  }
  ++frames_;
  std::array<long, 3> tp{}, pred{}, truth{};
  for (std::size_t i = 0; i < occ.prob.size(); ++i) {
    const FreeState s = target.states[i];
    const double p = occ.prob[i];
    if (s == FreeState::kFree || s == FreeState::kOccupied) {
      const bool pf = p < cfg_.p_free;
      const bool tf = s == FreeState::kFree;
      ++observed_;
      agree_ += pf == tf;
      inter_ += pf && tf;
      uni_ += pf || tf;
    }
    if (s == FreeState::kPartiallyObserved) continue;
    const auto pc = static_cast<std::size_t>(classify_three(p, cfg_.three_class_low, cfg_.three_class_high));
    const std::size_t tc = s == FreeState::kOccupied ? 0 : s == FreeState::kFree ? 1 : 2;
    ++pred[pc];
    ++truth[tc];
    tp[tc] += pc == tc;
  }
  for (std::size_t c = 0; c < 3; ++c) {
    tri_inter_[c] += tp[c];
    tri_union_[c] += pred[c] + truth[c] - tp[c];
  }

  if (!lut_ || !(lut_->grid == occ.grid)) {
    const auto r = rdm_.resolved(occ.grid);
    lut_ = rdm::build_polar_lut(occ.grid, r.p_ref, r.n_phi, r.n_d, r.d_max);
  }
  const auto pr = rdm::extract_rdm(rdm::to_polar(occ, *lut_), cfg_.p_free);
  const auto tr = rdm::extract_rdm(rdm::to_polar(rdm::target_occupancy(target), *lut_), cfg_.p_free);
  for (std::size_t k = 0; k < pr.d.size(); ++k) {
    abs_err_ += std::abs(pr.d[k] - tr.d[k]);
    const double lo = std::min(pr.d[k], tr.d[k]);
    const double hi = std::max(pr.d[k], tr.d[k]);
    min_sq_ += lo * lo;
    max_sq_ += hi * hi;
  }
  rdm_bins_ += static_cast<long>(pr.d.size());
}

FreespaceReport FreespaceEvaluator::report() const {
  FreespaceReport r;
  r.accuracy = observed_ > 0 ? static_cast<double>(agree_) / observed_ : 1.0;
  r.iou = uni_ > 0 ? static_cast<double>(inter_) / uni_ : 1.0;
  r.rdm_mae = rdm_bins_ > 0 ? abs_err_ / rdm_bins_ : 0.0;
  r.rdm_iou = max_sq_ > 0.0 ? min_sq_ / max_sq_ : 1.0;
  return r;
}

ThreeClassReport FreespaceEvaluator::three_class() const {
  ThreeClassReport r;
  double sum = 0.0;
  int n = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    if (tri_union_[c] == 0) continue;
    r.iou[c] = static_cast<double>(tri_inter_[c]) / tri_union_[c];
    sum += *r.iou[c];
    ++n;
  }
  if (n > 0) r.miou = sum / n;
  return r;
}

FreespaceReport freespace_metrics(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target,
                                  const EvalConfig& cfg, const rdm::RdmParams& rdm) {
  FreespaceEvaluator e(cfg, rdm);
  e.add_frame(occ, target);
  return e.report();
}

ThreeClassReport three_class_occupancy(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target,
                                       const EvalConfig& cfg) {
  FreespaceEvaluator e(cfg);
  e.add_frame(occ, target);
  return e.three_class();
}

namespace {

std::string fmt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json counts_json(const Counts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"precision", opt(c.precision())},
          {"recall", opt(c.recall())}, {"f_score", opt(c.f_score())}};
}

}  // namespace

void write_detection_csv(std::ostream& os, const DetectionReport& r, const RangeBins& bins) {
  os << "class,range,tp,fp,fn,precision,recall,f_score,ap\n";
  auto row = [&](int c, const std::string& range, const Counts& k, const std::string& ap) {
    os << class_name(static_cast<ObstacleClass>(c)) << ',' << range << ',' << k.tp << ',' << k.fp << ',' << k.fn
       << ',' << fmt(k.precision()) << ',' << fmt(k.recall()) << ',' << fmt(k.f_score()) << ',' << ap << '\n';
  };
  for (int c = 0; c < kNumObstacleClasses; ++c) {
    const auto& cr = r.classes[c];
    for (int b = 0; b < bins.count(); ++b) row(c, bins.label(b), cr.by_range[static_cast<std::size_t>(b)], "");
    row(c, "all", cr.overall, fmt(cr.ap));
  }
}

void write_freespace_csv(std::ostream& os, const FreespaceReport& f, const ThreeClassReport& t) {
  os << "accuracy,iou,rdm_mae,rdm_iou,iou_occupied,iou_free,iou_unobserved,miou\n";
  os << fmt(f.accuracy) << ',' << fmt(f.iou) << ',' << fmt(f.rdm_mae) << ',' << fmt(f.rdm_iou) << ','
     << fmt(t.iou[0]) << ',' << fmt(t.iou[1]) << ',' << fmt(t.iou[2]) << ',' << fmt(t.miou) << '\n';
}

std::string summary_json(const DetectionReport& d, const RangeBins& bins, const FreespaceReport* f,
                         const ThreeClassReport* t) {
  nlohmann::json j;
  nlohmann::json det = nlohmann::json::object();
  for (int c = 0; c < kNumObstacleClasses; ++c) {
    const auto& cr = d.classes[c];
    nlohmann::json by = nlohmann::json::object();
    for (int b = 0; b < bins.count(); ++b) by[bins.label(b)] = counts_json(cr.by_range[static_cast<std::size_t>(b)]);
    det[std::string(class_name(static_cast<ObstacleClass>(c)))] = {
        {"by_range", by}, {"overall", counts_json(cr.overall)}, {"ap", opt(cr.ap)}};
  }
  j["detection"] = det;
  j["map"] = opt(d.map);
  if (f) {
    j["freespace"] = {{"accuracy", f->accuracy}, {"iou", f->iou}, {"rdm_mae", f->rdm_mae}, {"rdm_iou", f->rdm_iou}};
  }
  if (t) {
    j["three_class"] = {{"occupied", opt(t->iou[0])}, {"free", opt(t->iou[1])},
                        {"unobserved", opt(t->iou[2])}, {"miou", opt(t->miou)}};
  }
  return j.dump(2) + "\n";
}

}  // namespace radarnet::metrics
