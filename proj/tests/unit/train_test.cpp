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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gradcheck.hpp"
#include "oracles.hpp"
#include "radarnet/error.hpp"
#include "radarnet/train.hpp"

namespace radarnet::train {
namespace {

LabelCandidates dense(const std::vector<double>& cls, const std::vector<double>& reg) {
  LabelCandidates c;
  for (std::size_t i = 0; i < cls.size(); ++i) c.pixels.push_back(static_cast<int>(i));
  c.class_loss = cls;
  c.reg_loss = reg;
  return c;
}

TEST(OneNet, SingleLabelArgmin) {
  const std::vector<LabelCandidates> l{dense({0.5, 0.2, 0.9, 0.4}, {0, 0, 0, 0})};
  EXPECT_EQ(onenet_assign(l, 1.0), std::vector<int>{1});
}

TEST(OneNet, ClassWeightScalesClassTerm) {
  // cost = w*cls + reg: w=1 picks pixel 0, w=10 picks pixel 1.
  const std::vector<LabelCandidates> l{dense({0.5, 0.1}, {0.0, 0.5})};
  EXPECT_EQ(onenet_assign(l, 1.0), std::vector<int>{0});
  EXPECT_EQ(onenet_assign(l, 10.0), std::vector<int>{1});
}

TEST(OneNet, SharedPixelGoesToCheaperLabel) {
  // Both labels prefer pixel 5; label 1 is cheaper there and is served first.
  LabelCandidates a{{5, 6}, {0.4, 0.6}, {0.0, 0.0}};
  LabelCandidates b{{5, 7}, {0.1, 0.9}, {0.0, 0.0}};
  const std::vector<LabelCandidates> l{a, b};
  EXPECT_EQ(onenet_assign(l, 1.0), (std::vector<int>{6, 5}));
}

TEST(OneNet, AllEqualPicksLowestPixel) {
  LabelCandidates a{{9, 3, 4, 0}, {1, 1, 1, 1}, {1, 1, 1, 1}};
  const std::vector<LabelCandidates> l{a};
  EXPECT_EQ(onenet_assign(l, 1.0), std::vector<int>{0});
}

TEST(OneNet, ExhaustedCandidates) {
  LabelCandidates a{{2}, {0.1}, {0.0}};
  LabelCandidates b{{2}, {0.5}, {0.0}};
  const std::vector<LabelCandidates> l{b, a};
  EXPECT_EQ(onenet_assign(l, 1.0), (std::vector<int>{-1, 2}));
}

TEST(OneNet, MatchesExhaustiveSearch) {
  oracle::Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto inst = oracle::random_assign_instance(rng, 12, 6, t % 2 == 0);
    std::vector<LabelCandidates> cands(inst.foreground.size());
    for (std::size_t l = 0; l < cands.size(); ++l) {
      for (int p = inst.rows * inst.cols - 1; p >= 0; --p) {
        if (!inst.foreground[l][static_cast<std::size_t>(p)]) continue;
        cands[l].pixels.push_back(p);
        cands[l].class_loss.push_back(inst.class_loss[l][static_cast<std::size_t>(p)]);
        cands[l].reg_loss.push_back(inst.reg_loss[l][static_cast<std::size_t>(p)]);
      }
    }
    ASSERT_EQ(onenet_assign(cands, inst.class_weight), oracle::assign_exhaustive(inst)) << "instance " << t;
  }
}

TEST(MineNegatives, Examples) {
  std::vector<int> px(100);
  std::iota(px.begin(), px.end(), 0);
  std::vector<double> loss(100);
  for (int i = 0; i < 100; ++i) loss[static_cast<std::size_t>(i)] = static_cast<double>((i * 37) % 100);
  const auto top = mine_negatives(px, loss, 2, 3);
  ASSERT_EQ(top.size(), 6u);
  for (std::size_t i = 0; i < top.size(); ++i) EXPECT_EQ(loss[static_cast<std::size_t>(top[i])], 99.0 - i);

  EXPECT_TRUE(mine_negatives(px, loss, 0, 3).empty());
  const std::vector<int> two{4, 8};
  const std::vector<double> two_loss{0.1, 0.2};
  EXPECT_EQ(mine_negatives(two, two_loss, 1, 3), (std::vector<int>{8, 4}));
}

TEST(MineNegatives, TiesByLowestPixel) {
  const std::vector<int> px{7, 3, 5, 1};
  const std::vector<double> loss{1.0, 1.0, 2.0, 1.0};
  EXPECT_EQ(mine_negatives(px, loss, 1, 2), (std::vector<int>{5, 1}));
}

AssignmentResult one_positive(int pixel, int channel) {
  AssignmentResult a;
  a.selected = {pixel};
  a.label_channel = {channel};
  return a;
}

TEST(ClassLoss, Examples) {
  const ClassWeights ones{1, 1, 1, 1};
  Tensor3 uniform(4, 2, 2);
  EXPECT_NEAR(class_loss(uniform, one_positive(3, 1), ones), std::log(4.0), 1e-6);

  Tensor3 onehot(4, 2, 2);
  onehot.at(1, 1, 1) = 20.0f;
  onehot.at(3, 0, 0) = 20.0f;
  auto a = one_positive(3, 1);
  a.negatives = {0};
  EXPECT_LE(class_loss(onehot, a, ones), 1e-6);

  AssignmentResult empty;
  EXPECT_EQ(class_loss(uniform, empty, ones), 0.0);

  // Class weight multiplies the positive term; divided by n_pos = 1.
  EXPECT_NEAR(class_loss(uniform, one_positive(0, 2), {1, 1, 2.5, 1}), 2.5 * std::log(4.0), 1e-6);
}

TEST(RegLoss, Examples) {
  Tensor3 pred(6, 2, 2), target(6, 2, 2);
  EXPECT_EQ(reg_loss(pred, target, one_positive(0, 0)), 0.0);
  for (int c = 0; c < 6; ++c) pred.at(c, 0, 0) = 1.0f;
  EXPECT_EQ(reg_loss(pred, target, one_positive(0, 0)), 6.0);

  Tensor3 p2(6, 2, 2), t2(6, 2, 2);
  p2.at(0, 0, 1) = 2.0f;
  p2.at(2, 1, 0) = -4.0f;
  AssignmentResult a;
  a.selected = {1, 2};
  a.label_channel = {0, 0};
  EXPECT_EQ(reg_loss(p2, t2, a), 3.0);
  EXPECT_EQ(reg_loss(p2, t2, AssignmentResult{}), 0.0);
  EXPECT_THROW(reg_loss(Tensor3(6, 2, 2), Tensor3(6, 3, 2), a), DataError);
}

labelgen::FreespaceTarget fs_target(labelgen::FreeState s) {
  const GridSpec g(4, 2.0);
  return {g, std::vector<labelgen::FreeState>(16, s)};
}

TEST(IsmLoss, Examples) {
  Tensor3 even(2, 4, 4);
  EXPECT_NEAR(ism_loss(even, fs_target(labelgen::FreeState::kFree)), std::log(2.0), 1e-9);
  EXPECT_EQ(ism_loss(even, fs_target(labelgen::FreeState::kUnobserved)), 0.0);

  // Channel 0 is the occupied logit.
  Tensor3 free_pred(2, 4, 4);
  for (float& v : free_pred.channel(1)) v = 30.0f;
  EXPECT_LE(ism_loss(free_pred, fs_target(labelgen::FreeState::kFree)), 1e-9);
  Tensor3 occ_pred(2, 4, 4);
  for (float& v : occ_pred.channel(0)) v = 30.0f;
  EXPECT_LE(ism_loss(occ_pred, fs_target(labelgen::FreeState::kOccupied)), 1e-9);
  EXPECT_THROW(ism_loss(Tensor3(2, 3, 3), fs_target(labelgen::FreeState::kFree)), DataError);
}

TEST(TotalLoss, Examples) {
  EXPECT_DOUBLE_EQ(total_loss({1, 2, 3}, MultiTaskWeights{}), 7.0);
  EXPECT_NEAR(total_loss({1, 2, 3}, MultiTaskWeights{{std::log(2.0), 0, 0}}), 5.5 + 2.5 / 3.0, 1e-12);
  const MultiTaskWeights w{{0.4, -1.1, 2.0}};
  EXPECT_NEAR(total_loss({0, 0, 0}, w), w.mean_weight(), 1e-15);
  const auto g = total_loss_delta_gradient({1, 2, 3}, MultiTaskWeights{});
  EXPECT_NEAR(g[0], -1.0 - 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(g[2], -3.0 - 1.0 / 3.0, 1e-12);
}

TEST(TotalLoss, DeltaGradientMatchesFiniteDifferences) {
  EXPECT_LT(oracle::delta_gradient_check(5, 200, 1e-6), 1e-6);
}

// Four 16 px frames with one vehicle each, small enough to train in a test.
std::vector<TrainSample> micro_dataset() {
  oracle::Rng rng(3);
  const GridSpec grid(16, 8.0);
  const GridSpec fs_grid = grid.downsampled(labelgen::kFreespaceStride);
  std::vector<TrainSample> out;
  for (int f = 0; f < 4; ++f) {
    Tensor3 input(bev::kNumFeatures, 16, 16);
    labelgen::ObstacleLabel l;
    l.cx = oracle::uniform(rng, -4.0, 4.0);
    l.cy = oracle::uniform(rng, -4.0, 4.0);
    l.w0 = 3.0;
    l.l0 = 5.0;
    l.yaw = oracle::uniform(rng, -1.0, 1.0);
    const auto c = world_to_grid({l.cx, l.cy}, grid);
    for (int ch = 0; ch < bev::kNumFeatures; ++ch) input.at(ch, c->row, c->col) = 0.8f;
    labelgen::FreespaceTarget fs{fs_grid, std::vector<labelgen::FreeState>(static_cast<std::size_t>(fs_grid.cell_count()),
                                                                          labelgen::FreeState::kFree)};
    out.push_back({std::move(input), make_targets({l}, std::move(fs), grid)});
  }
  return out;
}

TEST(TrainLoop, ZeroIterationsReturnsInitialWeights) {
  const auto data = micro_dataset();
  TrainConfig cfg;
  cfg.iterations = 0;
  cfg.seed = 4;
  const auto r = train_loop(data, {16, 4, 4}, cfg);
  EXPECT_TRUE(r.history.empty());
  model::Network<float> fresh({16, 4, 4}, 4);
  const auto a = r.checkpoint();
  const auto b = model::make_checkpoint(fresh, {0, 0, 0}, 0);
  ASSERT_EQ(a.tensors.size(), b.tensors.size());
  for (std::size_t i = 0; i < a.tensors.size(); ++i) EXPECT_EQ(a.tensors[i].data, b.tensors[i].data) << a.tensors[i].name;
}

TEST(TrainLoop, SameSeedSameHistory) {
  const auto data = micro_dataset();
  TrainConfig cfg;
  cfg.iterations = 12;
  cfg.batch_size = 2;
  cfg.seed = 8;
  const auto a = train_loop(data, {16, 4, 4}, cfg);
  const auto b = train_loop(data, {16, 4, 4}, cfg);
  ASSERT_EQ(a.history.size(), 12u);
  std::ostringstream ca, cb;
  write_loss_csv(ca, a.history);
  write_loss_csv(cb, b.history);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_NE(a.history.front().total, a.history.back().total);
  EXPECT_EQ(ca.str().substr(0, 4), "iter");
}

TEST(TrainLoop, PeriodicCheckpoints) {
  const auto data = micro_dataset();
  TrainConfig cfg;
  cfg.iterations = 6;
  cfg.batch_size = 2;
  cfg.checkpoint_every = 2;
  std::vector<int> seen;
  train_loop(data, {16, 4, 4}, cfg, [&](int it, const model::Checkpoint&) { seen.push_back(it); });
  EXPECT_EQ(seen, (std::vector<int>{2, 4, 6}));
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lr = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace radarnet::train
