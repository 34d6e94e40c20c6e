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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "radarnet/bev.hpp"
#include "radarnet/labelgen.hpp"
#include "radarnet/model.hpp"

namespace radarnet::train {

inline constexpr int kNumTasks = 3;

/// Learned per-task log-variances; task weight w_i = exp(-delta_i).
struct MultiTaskWeights {
  std::array<double, kNumTasks> delta{0.0, 0.0, 0.0};

  std::array<double, kNumTasks> weights() const;
  double mean_weight() const;
};

using TaskLosses = std::array<double, kNumTasks>;  // [class, regression, ism]

/// sum_i L_i exp(-delta_i) + mean_i exp(-delta_i).
double total_loss(const TaskLosses& losses, const MultiTaskWeights& w);
/// d total / d delta_i = -L_i exp(-delta_i) - exp(-delta_i) / K.
std::array<double, kNumTasks> total_loss_delta_gradient(const TaskLosses& losses, const MultiTaskWeights& w);

// ------------------------------------------------------------ assignment

struct LabelCandidates {
  std::vector<int> pixels;  // flat head pixels (row-major)
  std::vector<double> class_loss;
  std::vector<double> reg_loss;
};

/// For each label, picks the foreground pixel minimising
/// class_weight * class_loss + reg_loss (ties: lowest flat index). Labels are
/// served in ascending order of their best cost (ties: label index); a pixel
/// taken by an earlier label is skipped. Returns the chosen pixel per label,
/// or -1 if every candidate was taken.
std::vector<int> onenet_assign(std::span<const LabelCandidates> labels, double class_weight);

/// The ratio * n_pos highest-loss candidates (ties: lowest pixel index), or
/// all of them if fewer exist. Returned in descending loss order.
std::vector<int> mine_negatives(std::span<const int> pixels, std::span<const double> losses, int n_pos,
                                int ratio = 3);

enum class PixelRole : std::uint8_t { kUnusedBackground, kPositive, kIgnoredForeground, kMinedNegative };

struct AssignmentResult {
  std::vector<int> selected;       // per label, -1 when untrainable or unassigned
  std::vector<int> label_channel;  // class channel per label
  std::vector<PixelRole> roles;    // per head pixel
  std::vector<int> negatives;      // mined background pixels

  int n_pos() const;
};

using ClassWeights = std::array<double, kNumClassChannels>;

struct LossConfig {
  ClassWeights class_weights{1.0, 1.0, 1.0, 1.0};
  double onenet_class_weight = 1.0;
  int neg_ratio = 3;
};

/// Everything the losses need about one frame.
struct FrameTargets {
  std::vector<labelgen::ObstacleLabel> labels;
  labelgen::ClassTarget class_target;
  Tensor3 reg_target;
  labelgen::FreespaceTarget freespace;
};

FrameTargets make_targets(std::vector<labelgen::ObstacleLabel> labels, labelgen::FreespaceTarget freespace,
                          const GridSpec& input_grid);

/// Runs OneNet selection and hard-negative mining on one frame's head outputs.
AssignmentResult assign_frame(const Tensor3& class_logits, const Tensor3& regression, const FrameTargets& targets,
                              const LossConfig& cfg);

/// Softmax cross-entropy over positives (weighted by class) and mined
/// negatives (background weight), divided by max(1, n_pos).
double class_loss(const Tensor3& logits, const AssignmentResult& a, const ClassWeights& weights);
/// Mean over positives of the 6-channel L1 distance.
double reg_loss(const Tensor3& regression, const Tensor3& targets, const AssignmentResult& a);
/// Weighted binary cross-entropy of the occupied probability against the
/// target encoding, averaged over cells with non-zero weight.
double ism_loss(const Tensor3& freespace_logits, const labelgen::FreespaceTarget& target);

/// Batched losses and their gradients w.r.t. the head outputs (unweighted
/// by the task weights). The assignment is treated as constant.
template <typename T>
struct BatchLoss {
  TaskLosses losses{0.0, 0.0, 0.0};
  int n_pos = 0;
  model::HeadBlobs<T> grad;  // dL0/dclass, dL1/dregression, dL2/dfreespace
  std::vector<AssignmentResult> assignments;
};

template <typename T>
BatchLoss<T> compute_batch_loss(const model::HeadBlobs<T>& out, std::span<const FrameTargets* const> targets,
                                const LossConfig& cfg, bool want_grad = true);

/// Inverse square-root frequency over the pixels that enter the class loss
/// (one positive per trainable label, neg_ratio negatives per positive),
/// renormalised to mean 1.
ClassWeights class_weights_from_targets(std::span<const FrameTargets> frames, int neg_ratio = 3);

// ------------------------------------------------------------ training

struct TrainSample {
  Tensor3 input;
  FrameTargets targets;
};

struct TrainConfig {
  double lr = 1e-3;
  int iterations = 500;
  int batch_size = 4;
  std::uint64_t seed = 1;
  std::optional<ClassWeights> class_weights;  // default: from training-set frequency
  double onenet_class_weight = 1.0;
  int neg_ratio = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int checkpoint_every = 0;  // 0 disables periodic checkpoints

  void validate() const;
};

struct LossRecord {
  int iter = 0;
  TaskLosses losses{};
  std::array<double, kNumTasks> delta{};
  double total = 0.0;
};

void write_loss_csv(std::ostream& os, std::span<const LossRecord> history);

struct TrainResult {
  std::unique_ptr<model::Network<float>> net;
  MultiTaskWeights weights;
  LossConfig loss_config;
  std::vector<LossRecord> history;

  model::Checkpoint checkpoint() const;
};

using CheckpointCallback = std::function<void(int iteration, const model::Checkpoint&)>;

/// Adam over network parameters and the task log-variances. Deterministic
/// for a given seed. Throws NumericError on a non-finite loss.
TrainResult train_loop(std::span<const TrainSample> dataset, const model::ModelConfig& model_cfg,
                       const TrainConfig& cfg, const CheckpointCallback& on_checkpoint = {});

/// Losses over `samples` in one batch with the given batch-norm mode.
TaskLosses evaluate_losses(model::Network<float>& net, std::span<const TrainSample> samples, const LossConfig& cfg,
                           nn::Mode mode);

}  // namespace radarnet::train
