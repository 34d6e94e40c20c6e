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

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radarnet/decode.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/rdm.hpp"

namespace radarnet::metrics {

struct RangeBins {
  std::vector<double> edges{0.0, 10.0, 25.0, 40.0, 70.0, 100.0};

  int count() const noexcept { return static_cast<int>(edges.size()) - 1; }
  /// Bins are [a, b); the last one also holds its upper edge. -1 outside.
  int bin_of(double range) const;
  std::string label(int bin) const;
  /// Throws ConfigError unless edges are strictly increasing and at least two.
  void validate() const;
};

struct EvalConfig {
  double vehicle_iou = 0.3;
  double center_distance = 2.0;  // pedestrians and cyclists, m
  double p_free = 0.4;           // free iff p < p_free
  double three_class_low = 0.35;
  double three_class_high = 0.65;
  RangeBins bins;

  void validate() const;
};

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  /// Undefined (n/a) when the bin holds no gts and no detections.
  std::optional<double> f_score() const;
};

struct MatchResult {
  std::vector<int> det_to_gt;  // per detection: matched gt index or -1
  std::vector<int> gt_to_det;  // per gt: matched detection index or -1
  Counts counts() const;
};

/// Greedy by descending score (stable). All inputs are taken to be of `cls`.
MatchResult match_detections(std::span<const decode::Detection> dets,
                             std::span<const labelgen::ObstacleLabel> gts, ObstacleClass cls,
                             const EvalConfig& cfg);

/// Whether a detection satisfies the match criterion for a gt of `cls`.
bool is_match(const decode::Detection& det, const labelgen::ObstacleLabel& gt, ObstacleClass cls,
              const EvalConfig& cfg);

/// TP and FN binned by gt range, FP by detection range.
std::vector<Counts> counts_by_range(std::span<const decode::Detection> dets,
                                    std::span<const labelgen::ObstacleLabel> gts, const MatchResult& m,
                                    const RangeBins& bins);

struct ScoredDetection {
  double score = 0.0;
  bool tp = false;
};

/// All-point interpolated AP. Undefined when there are no gts.
std::optional<double> average_precision(std::vector<ScoredDetection> dets, long n_gt);

struct ClassReport {
  std::vector<Counts> by_range;
  Counts overall;
  std::optional<double> ap;
};

struct DetectionReport {
  std::array<ClassReport, kNumObstacleClasses> classes;
  std::optional<double> map;  // mean over classes with a defined AP
};

/// Accumulates matches over frames in call order.
class DetectionEvaluator {
 public:
  explicit DetectionEvaluator(EvalConfig cfg);
  void add_frame(std::span<const decode::Detection> dets, std::span<const labelgen::ObstacleLabel> gts);
  DetectionReport report() const;

 private:
  EvalConfig cfg_;
  std::array<std::vector<Counts>, kNumObstacleClasses> bins_;
  std::array<Counts, kNumObstacleClasses> overall_;
  std::array<std::vector<ScoredDetection>, kNumObstacleClasses> scored_;
  std::array<long, kNumObstacleClasses> n_gt_{};
};

struct FreespaceReport {
  double accuracy = 0.0;
  double iou = 0.0;
  double rdm_mae = 0.0;
  double rdm_iou = 0.0;
};

enum class OccupancyClass : int { kOccupied = 0, kFree = 1, kUnobserved = 2 };

/// Three-way thresholding of an occupied probability, compared in single
/// precision.
OccupancyClass classify_three(double p, double low = 0.35, double high = 0.65);

struct ThreeClassReport {
  std::array<std::optional<double>, 3> iou;  // indexed by OccupancyClass
  std::optional<double> miou;
};

class FreespaceEvaluator {
 public:
  /// `rdm` is resolved against the occupancy grid on first use.
  FreespaceEvaluator(EvalConfig cfg, rdm::RdmParams rdm = {});
  void add_frame(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target);
  long frames() const noexcept { return frames_; }
  FreespaceReport report() const;
  ThreeClassReport three_class() const;

 private:
  EvalConfig cfg_;
  rdm::RdmParams rdm_;
  std::optional<rdm::PolarLut> lut_;
  long frames_ = 0;
  long observed_ = 0, agree_ = 0, inter_ = 0, uni_ = 0;
  long rdm_bins_ = 0;
  double abs_err_ = 0.0, min_sq_ = 0.0, max_sq_ = 0.0;
  std::array<long, 3> tri_inter_{}, tri_union_{};
};

/// Single-frame conveniences built on the evaluators.
FreespaceReport freespace_metrics(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target,
                                  const EvalConfig& cfg, const rdm::RdmParams& rdm = {});
ThreeClassReport three_class_occupancy(const decode::OccupancyMap& occ, const labelgen::FreespaceTarget& target,
                                       const EvalConfig& cfg);

/// `class,range,tp,fp,fn,precision,recall,f_score,ap`; n/a for undefined values.
void write_detection_csv(std::ostream& os, const DetectionReport& r, const RangeBins& bins);
/// `accuracy,iou,rdm_mae,rdm_iou,iou_occupied,iou_free,iou_unobserved,miou`.
void write_freespace_csv(std::ostream& os, const FreespaceReport& f, const ThreeClassReport& t);
std::string summary_json(const DetectionReport& d, const RangeBins& bins, const FreespaceReport* f,
                         const ThreeClassReport* t);

}  // namespace radarnet::metrics
