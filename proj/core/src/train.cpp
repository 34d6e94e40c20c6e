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

#include "radarnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "radarnet/error.hpp"

namespace radarnet::train {

using labelgen::FreeState;

std::array<double, kNumTasks> MultiTaskWeights::weights() const {
  std::array<double, kNumTasks> w{};
  for (int i = 0; i < kNumTasks; ++i) w[i] = std::exp(-delta[i]);
  return w;
}

double MultiTaskWeights::mean_weight() const {
  const auto w = weights();
  return std::accumulate(w.begin(), w.end(), 0.0) / kNumTasks;
}

double total_loss(const TaskLosses& losses, const MultiTaskWeights& w) {
  const auto wi = w.weights();
  double total = 0.0;
  for (int i = 0; i < kNumTasks; ++i) total += losses[i] * wi[i];
  return total + w.mean_weight();
}

std::array<double, kNumTasks> total_loss_delta_gradient(const TaskLosses& losses, const MultiTaskWeights& w) {
  const auto wi = w.weights();
  std::array<double, kNumTasks> g{};
  for (int i = 0; i < kNumTasks; ++i) g[i] = -losses[i] * wi[i] - wi[i] / kNumTasks;
  return g;
}

// ------------------------------------------------------------ assignment

std::vector<int> onenet_assign(std::span<const LabelCandidates> labels, double class_weight) {
  const std::size_t n = labels.size();
  auto cost = [&](std::size_t l, std::size_t k) {
    return class_weight * labels[l].class_loss[k] + labels[l].reg_loss[k];
  };
  // Best-first ordering key per label.
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < n; ++l) {
    const auto& c = labels[l];
    if (c.class_loss.size() != c.pixels.size() || c.reg_loss.size() != c.pixels.size()) {
      throw DataError("onenet_assign: candidate arrays must have equal length");
    }
    int best_pixel = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k < c.pixels.size(); ++k) {
      const double v = cost(l, k);
      if (v < best[l] || (v == best[l] && c.pixels[k] < best_pixel)) {
        best[l] = v;
        best_pixel = c.pixels[k];
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return best[a] < best[b]; });

  std::vector<int> selected(n, -1);
  std::vector<int> taken;
  for (std::size_t l : order) {
    const auto& c = labels[l];
    double best_cost = std::numeric_limits<double>::infinity();
    int best_pixel = -1;
    for (std::size_t k = 0; k < c.pixels.size(); ++k) {
      const int p = c.pixels[k];
      if (std::find(taken.begin(), taken.end(), p) != taken.end()) continue;
      const double v = cost(l, k);
      if (best_pixel < 0 || v < best_cost || (v == best_cost && p < best_pixel)) {
        best_cost = v;
        best_pixel = p;
      }
    }
    selected[l] = best_pixel;
    if (best_pixel >= 0) taken.push_back(best_pixel);
  }
  return selected;
}

std::vector<int> mine_negatives(std::span<const int> pixels, std::span<const double> losses, int n_pos, int ratio) {
  if (pixels.size() != losses.size()) throw DataError("mine_negatives: pixel and loss arrays differ in length");
  if (n_pos <= 0 || ratio <= 0) return {};
  const std::size_t want = std::min(pixels.size(), static_cast<std::size_t>(n_pos) * static_cast<std::size_t>(ratio));
  std::vector<std::size_t> idx(pixels.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto harder = [&](std::size_t a, std::size_t b) {
    if (losses[a] != losses[b]) return losses[a] > losses[b];
    return pixels[a] < pixels[b];
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(want), idx.end(), harder);
  std::vector<int> out(want);
  for (std::size_t i = 0; i < want; ++i) out[i] = pixels[idx[i]];
  return out;
}

int AssignmentResult::n_pos() const {
  return static_cast<int>(std::count_if(selected.begin(), selected.end(), [](int p) { return p >= 0; }));
}

FrameTargets make_targets(std::vector<labelgen::ObstacleLabel> labels, labelgen::FreespaceTarget freespace,
                          const GridSpec& input_grid) {
  if (!(freespace.grid == input_grid.downsampled(labelgen::kFreespaceStride))) {
    throw DataError("free-space target grid does not match half the input grid");
  }
  auto ct = labelgen::make_class_target(labels, input_grid);
  auto reg = labelgen::make_regression_target(labels, ct);
  return FrameTargets{std::move(labels), std::move(ct), std::move(reg), std::move(freespace)};
}

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// -log softmax(logits)[channel] at one pixel of a channel-major frame.
template <typename T>
double neg_log_softmax(const T* logits, int channels, std::size_t plane, std::size_t pixel, int channel) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < channels; ++c) mx = std::max(mx, static_cast<double>(logits[c * plane + pixel]));
  double s = 0.0;
  for (int c = 0; c < channels; ++c) s += std::exp(static_cast<double>(logits[c * plane + pixel]) - mx);
  return mx + std::log(s) - static_cast<double>(logits[channel * plane + pixel]);
}

// Adds scale * d(-log softmax[channel])/dlogits into grad.
template <typename T>
void add_ce_grad(const T* logits, int channels, std::size_t plane, std::size_t pixel, int channel, double scale,
                 T* grad) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < channels; ++c) mx = std::max(mx, static_cast<double>(logits[c * plane + pixel]));
  double s = 0.0;
  for (int c = 0; c < channels; ++c) s += std::exp(static_cast<double>(logits[c * plane + pixel]) - mx);
  for (int c = 0; c < channels; ++c) {
    const double p = std::exp(static_cast<double>(logits[c * plane + pixel]) - mx) / s;
    grad[c * plane + pixel] += static_cast<T>(scale * (p - (c == channel ? 1.0 : 0.0)));
  }
}

template <typename T>
double l1_at(const T* reg, const Tensor3& target, std::size_t plane, std::size_t pixel) {
  double s = 0.0;
  for (int c = 0; c < labelgen::kNumRegChannels; ++c) {
    s += std::abs(static_cast<double>(reg[c * plane + pixel]) - target.data()[c * plane + pixel]);
  }
  return s;
}

template <typename T>
AssignmentResult assign_core(const T* cls, int channels, const T* reg, const FrameTargets& t, const LossConfig& cfg) {
  const auto& ct = t.class_target;
  const std::size_t plane = static_cast<std::size_t>(ct.head_grid.cell_count());
  if (channels != kNumClassChannels) throw DataError("class logits must have 4 channels");
  AssignmentResult a;
  a.roles.assign(plane, PixelRole::kUnusedBackground);
  a.label_channel.resize(t.labels.size());

  std::vector<LabelCandidates> cands;
  std::vector<std::size_t> cand_label;
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    a.label_channel[i] = static_cast<int>(t.labels[i].cls);
    if (!ct.trainable[i]) continue;
    LabelCandidates c;
    const double w = cfg.class_weights[static_cast<std::size_t>(a.label_channel[i])];
    for (int p : ct.foreground[i]) {
      const auto px = static_cast<std::size_t>(p);
      c.pixels.push_back(p);
      c.class_loss.push_back(w * neg_log_softmax(cls, channels, plane, px, a.label_channel[i]));
      c.reg_loss.push_back(l1_at(reg, t.reg_target, plane, px));
      a.roles[px] = PixelRole::kIgnoredForeground;
    }
    cands.push_back(std::move(c));
    cand_label.push_back(i);
  }
  const auto chosen = onenet_assign(cands, cfg.onenet_class_weight);
  a.selected.assign(t.labels.size(), -1);
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    a.selected[cand_label[k]] = chosen[k];
    if (chosen[k] >= 0) a.roles[static_cast<std::size_t>(chosen[k])] = PixelRole::kPositive;
  }

  std::vector<int> bg_pixels;
  std::vector<double> bg_loss;
  const double w_bg = cfg.class_weights[kBackgroundChannel];
  for (std::size_t p = 0; p < plane; ++p) {
    if (ct.owner[p] >= 0) continue;
    bg_pixels.push_back(static_cast<int>(p));
    bg_loss.push_back(w_bg * neg_log_softmax(cls, channels, plane, p, kBackgroundChannel));
  }
  a.negatives = mine_negatives(bg_pixels, bg_loss, a.n_pos(), cfg.neg_ratio);
  for (int p : a.negatives) a.roles[static_cast<std::size_t>(p)] = PixelRole::kMinedNegative;
  return a;
}

// Unnormalised class loss sum; adds scale * gradient when grad != nullptr.
template <typename T>
double class_sum(const T* cls, int channels, std::size_t plane, const AssignmentResult& a, const ClassWeights& w,
                 double scale, T* grad) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.selected.size(); ++i) {
    if (a.selected[i] < 0) continue;
    const auto px = static_cast<std::size_t>(a.selected[i]);
    const int ch = a.label_channel[i];
    const double wc = w[static_cast<std::size_t>(ch)];
    s += wc * neg_log_softmax(cls, channels, plane, px, ch);
    if (grad) add_ce_grad(cls, channels, plane, px, ch, scale * wc, grad);
  }
  const double wb = w[kBackgroundChannel];
  for (int p : a.negatives) {
    const auto px = static_cast<std::size_t>(p);
    s += wb * neg_log_softmax(cls, channels, plane, px, kBackgroundChannel);
    if (grad) add_ce_grad(cls, channels, plane, px, kBackgroundChannel, scale * wb, grad);
  }
  return s;
}

template <typename T>
double reg_sum(const T* reg, const Tensor3& target, std::size_t plane, const AssignmentResult& a, double scale,
               T* grad) {
  double s = 0.0;
  for (int p : a.selected) {
    if (p < 0) continue;
    const auto px = static_cast<std::size_t>(p);
    for (int c = 0; c < labelgen::kNumRegChannels; ++c) {
      const double d = static_cast<double>(reg[c * plane + px]) - target.data()[c * plane + px];
      s += std::abs(d);
      if (grad) grad[c * plane + px] += static_cast<T>(scale * ((d > 0.0) - (d < 0.0)));
    }
  }
  return s;
}

// Returns {weighted BCE sum, number of weighted cells}.
template <typename T>
std::pair<double, std::size_t> ism_sum(const T* fs, const labelgen::FreespaceTarget& target, double scale, T* grad,
                                       bool want_grad) {
  const std::size_t plane = target.states.size();
  double s = 0.0;
  std::size_t count = 0;
  for (std::size_t p = 0; p < plane; ++p) {
    const auto pw = labelgen::prob_weight(target.states[p]);
    if (pw.weight <= 0.0f) continue;
    ++count;
    const double z = static_cast<double>(fs[p]) - static_cast<double>(fs[plane + p]);
    const double t = pw.prob;
    s += pw.weight * (t * softplus(-z) + (1.0 - t) * softplus(z));
    if (want_grad) {
      const double g = scale * pw.weight * (1.0 / (1.0 + std::exp(-z)) - t);
      grad[p] += static_cast<T>(g);
      grad[plane + p] -= static_cast<T>(g);
    }
  }
  return {s, count};
}

}  // namespace

AssignmentResult assign_frame(const Tensor3& class_logits, const Tensor3& regression, const FrameTargets& targets,
                              const LossConfig& cfg) {
  const auto& hg = targets.class_target.head_grid;
  if (class_logits.rows() != hg.height_px() || class_logits.cols() != hg.width_px() ||
      regression.rows() != hg.height_px() || regression.channels() != labelgen::kNumRegChannels) {
    throw DataError("head outputs do not match the target head grid");
  }
  return assign_core(class_logits.data().data(), class_logits.channels(), regression.data().data(), targets, cfg);
}

double class_loss(const Tensor3& logits, const AssignmentResult& a, const ClassWeights& weights) {
  const double s =
      class_sum<float>(logits.data().data(), logits.channels(), logits.plane_size(), a, weights, 0.0, nullptr);
  return s / std::max(1, a.n_pos());
}

double reg_loss(const Tensor3& regression, const Tensor3& targets, const AssignmentResult& a) {
  if (!regression.same_shape(targets)) throw DataError("regression output and target shapes differ");
  const int n = a.n_pos();
  if (n == 0) return 0.0;
  return reg_sum<float>(regression.data().data(), targets, regression.plane_size(), a, 0.0, nullptr) / n;
}

double ism_loss(const Tensor3& freespace_logits, const labelgen::FreespaceTarget& target) {
  if (freespace_logits.channels() != 2 || freespace_logits.plane_size() != target.states.size()) {
    throw DataError("free-space logits do not match the target grid");
  }
  const auto [s, count] = ism_sum<float>(freespace_logits.data().data(), target, 0.0, nullptr, false);
  return count == 0 ? 0.0 : s / static_cast<double>(count);
}

template <typename T>
BatchLoss<T> compute_batch_loss(const model::HeadBlobs<T>& out, std::span<const FrameTargets* const> targets,
                                const LossConfig& cfg, bool want_grad) {
  const int n = out.class_logits.n;
  if (static_cast<std::size_t>(n) != targets.size()) throw DataError("batch size and target count differ");
  BatchLoss<T> r;
  const std::size_t head_plane = out.class_logits.plane();
  const std::size_t fs_plane = out.freespace_logits.plane();
  for (int i = 0; i < n; ++i) {
    const auto& t = *targets[static_cast<std::size_t>(i)];
    if (t.class_target.owner.size() != head_plane || t.freespace.states.size() != fs_plane) {
      throw DataError("targets do not match the head output resolution");
    }
    r.assignments.push_back(
        assign_core(out.class_logits.sample(i), out.class_logits.c, out.regression.sample(i), t, cfg));
    r.n_pos += r.assignments.back().n_pos();
  }
  std::size_t fs_count = 0;
  for (int i = 0; i < n; ++i) {
    for (auto s : targets[static_cast<std::size_t>(i)]->freespace.states) {
      if (labelgen::prob_weight(s).weight > 0.0f) ++fs_count;
    }
  }
  if (want_grad) {
    r.grad.class_logits = nn::Blob<T>(n, out.class_logits.c, out.class_logits.h, out.class_logits.w);
    r.grad.regression = nn::Blob<T>(n, out.regression.c, out.regression.h, out.regression.w);
    r.grad.freespace_logits = nn::Blob<T>(n, out.freespace_logits.c, out.freespace_logits.h, out.freespace_logits.w);
  }
  const double cls_scale = 1.0 / std::max(1, r.n_pos);
  const double reg_scale = r.n_pos > 0 ? 1.0 / r.n_pos : 0.0;
  const double fs_scale = fs_count > 0 ? 1.0 / static_cast<double>(fs_count) : 0.0;
  double cls = 0.0, reg = 0.0, ism = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& t = *targets[static_cast<std::size_t>(i)];
    const auto& a = r.assignments[static_cast<std::size_t>(i)];
    cls += class_sum(out.class_logits.sample(i), out.class_logits.c, head_plane, a, cfg.class_weights, cls_scale,
                     want_grad ? r.grad.class_logits.sample(i) : nullptr);
    reg += reg_sum(out.regression.sample(i), t.reg_target, head_plane, a, reg_scale,
                   want_grad ? r.grad.regression.sample(i) : nullptr);
    ism += ism_sum(out.freespace_logits.sample(i), t.freespace, fs_scale,
                   want_grad ? r.grad.freespace_logits.sample(i) : nullptr, want_grad)
               .first;
  }
  r.losses = {cls * cls_scale, reg * reg_scale, ism * fs_scale};
  return r;
}

template BatchLoss<float> compute_batch_loss<float>(const model::HeadBlobs<float>&,
                                                    std::span<const FrameTargets* const>, const LossConfig&, bool);
template BatchLoss<double> compute_batch_loss<double>(const model::HeadBlobs<double>&,
                                                      std::span<const FrameTargets* const>, const LossConfig&, bool);

ClassWeights class_weights_from_targets(std::span<const FrameTargets> frames, int neg_ratio) {
  std::array<double, kNumClassChannels> counts{};
  double positives = 0.0;
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < f.labels.size(); ++i) {
      if (!f.class_target.trainable[i]) continue;
      counts[static_cast<std::size_t>(f.labels[i].cls)] += 1.0;
      positives += 1.0;
    }
  }
  counts[kBackgroundChannel] = neg_ratio * positives;
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  ClassWeights w{1.0, 1.0, 1.0, 1.0};
  if (total <= 0.0) return w;
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = 1.0 / std::sqrt(std::max(counts[c], 1.0) / total);
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  for (double& v : w) v /= mean;
  return w;
}

// ------------------------------------------------------------ training

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train lr must be positive");
  if (iterations < 0) throw ConfigError("train iterations must be non-negative");
  if (batch_size <= 0) throw ConfigError("train batch_size must be positive");
  if (!(onenet_class_weight > 0.0)) throw ConfigError("onenet class weight must be positive");
  if (neg_ratio <= 0) throw ConfigError("hard-negative ratio must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("adam betas must lie in (0,1)");
  if (!(adam_eps > 0.0)) throw ConfigError("adam epsilon must be positive");
  if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be non-negative");
  if (class_weights) {
    for (double w : *class_weights) {
      if (!(w > 0.0)) throw ConfigError("class weights must be positive");
    }
  }
}

void write_loss_csv(std::ostream& os, std::span<const LossRecord> history) {
  os << "iter,L_class,L_reg,L_ism,delta0,delta1,delta2,total\n";
  char buf[512];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.iter, r.losses[0], r.losses[1],
                  r.losses[2], r.delta[0], r.delta[1], r.delta[2], r.total);
    os << buf;
  }
}

model::Checkpoint TrainResult::checkpoint() const {
  return model::make_checkpoint(*net, weights.delta, history.size());
}

namespace {

struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::array<double, kNumTasks> dm{};
  std::array<double, kNumTasks> dv{};
  long step = 0;
};

// Deterministic Fisher-Yates independent of the standard library's
// distribution implementations.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

TrainResult train_loop(std::span<const TrainSample> dataset, const model::ModelConfig& model_cfg,
                       const TrainConfig& cfg, const CheckpointCallback& on_checkpoint) {
  cfg.validate();
  model_cfg.validate();
  TrainResult result;
  result.net = std::make_unique<model::Network<float>>(model_cfg, cfg.seed);
  auto& net = *result.net;
  if (cfg.iterations > 0 && dataset.empty()) throw DataError("training dataset is empty");

  result.loss_config.onenet_class_weight = cfg.onenet_class_weight;
  result.loss_config.neg_ratio = cfg.neg_ratio;
  if (cfg.class_weights) {
    result.loss_config.class_weights = *cfg.class_weights;
  } else {
    std::vector<FrameTargets> targets;
    targets.reserve(dataset.size());
    for (const auto& s : dataset) targets.push_back(s.targets);
    result.loss_config.class_weights = class_weights_from_targets(targets, cfg.neg_ratio);
  }
  if (cfg.iterations == 0) return result;

  const auto params = net.parameters();
  AdamState adam;
  for (auto* p : params) {
    adam.m.emplace_back(p->size(), 0.0);
    adam.v.emplace_back(p->size(), 0.0);
  }

  std::mt19937_64 rng(cfg.seed ^ 0x5DEECE66Dull);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  std::size_t cursor = 0;
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), dataset.size());

  for (int it = 0; it < cfg.iterations; ++it) {
    std::vector<const Tensor3*> inputs;
    std::vector<const FrameTargets*> targets;
    for (std::size_t b = 0; b < batch; ++b) {
      if (cursor == order.size()) {
        shuffle(order, rng);
        cursor = 0;
      }
      const auto& s = dataset[order[cursor++]];
      inputs.push_back(&s.input);
      targets.push_back(&s.targets);
    }

    const auto out = net.forward(model::to_blob<float>(inputs), nn::Mode::kTrain);
    auto loss = compute_batch_loss<float>(out, targets, result.loss_config, true);
    const double total = total_loss(loss.losses, result.weights);
    if (!std::isfinite(total)) throw NumericError("non-finite loss at iteration " + std::to_string(it));
    result.history.push_back({it, loss.losses, result.weights.delta, total});

    const auto w = result.weights.weights();
    for (auto& v : loss.grad.class_logits.data) v = static_cast<float>(v * w[0]);
    for (auto& v : loss.grad.regression.data) v = static_cast<float>(v * w[1]);
    for (auto& v : loss.grad.freespace_logits.data) v = static_cast<float>(v * w[2]);
    net.zero_grad();
    net.backward(loss.grad);

    ++adam.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto* p = params[k];
      if (!p->trainable) continue;
      auto& m = adam.m[k];
      auto& v = adam.v[k];
      for (std::size_t j = 0; j < p->size(); ++j) {
        const double g = p->grad[j];
        m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g;
        v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g;
        p->value[j] = static_cast<float>(p->value[j] - cfg.lr * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + cfg.adam_eps));
      }
    }
    const auto dg = total_loss_delta_gradient(loss.losses, result.weights);
    for (int i = 0; i < kNumTasks; ++i) {
      adam.dm[i] = cfg.beta1 * adam.dm[i] + (1.0 - cfg.beta1) * dg[i];
      adam.dv[i] = cfg.beta2 * adam.dv[i] + (1.0 - cfg.beta2) * dg[i] * dg[i];
      result.weights.delta[i] -= cfg.lr * (adam.dm[i] / bc1) / (std::sqrt(adam.dv[i] / bc2) + cfg.adam_eps);
    }

    if (on_checkpoint && cfg.checkpoint_every > 0 && (it + 1) % cfg.checkpoint_every == 0) {
      on_checkpoint(it + 1, model::make_checkpoint(net, result.weights.delta, static_cast<std::uint64_t>(it + 1)));
    }
  }
  return result;
}

TaskLosses evaluate_losses(model::Network<float>& net, std::span<const TrainSample> samples, const LossConfig& cfg,
                           nn::Mode mode) {
  if (samples.empty()) return {0.0, 0.0, 0.0};
  std::vector<const Tensor3*> inputs;
  std::vector<const FrameTargets*> targets;
  for (const auto& s : samples) {
    inputs.push_back(&s.input);
    targets.push_back(&s.targets);
  }
  const auto out = net.forward(model::to_blob<float>(inputs), mode);
  return compute_batch_loss<float>(out, targets, cfg, false).losses;
}

}  // namespace radarnet::train
