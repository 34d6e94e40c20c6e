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
#include <sstream>

#include "oracles.hpp"
#include "radarnet/error.hpp"
#include "radarnet/model.hpp"

namespace radarnet::model {
namespace {

Tensor3 random_input(oracle::Rng& rng, int px) {
  Tensor3 t(ModelConfig::kInputChannels, px, px);
  for (auto& v : t.data()) v = static_cast<float>(oracle::uniform(rng, 0.0, 1.0));
  return t;
}

TEST(ModelConfig, Validation) {
  EXPECT_NO_THROW(ModelConfig::full_scale().validate());
  EXPECT_NO_THROW(ModelConfig::desk().validate());
  EXPECT_THROW((ModelConfig{250, 16, 4}.validate()), ConfigError);
  EXPECT_THROW((ModelConfig{256, 0, 4}.validate()), ConfigError);
  EXPECT_THROW((Network<float>(ModelConfig{100, 16, 4}, 1)), ConfigError);
}

// Golden number from tools/param_count.py (hand count from the layer table).
TEST(Network, ParameterCountMatchesHandCount) {
  Network<float> full(ModelConfig::full_scale(), 1);
  EXPECT_EQ(full.parameter_count(), 11617422u);
  Network<float> desk(ModelConfig::desk(), 1);
  EXPECT_EQ(desk.parameter_count(), 746286u);
}

TEST(Network, DeskShapes) {
  oracle::Rng rng(9);
  Network<float> net(ModelConfig::desk(), 3);
  const auto out = net.infer(random_input(rng, 256));
  EXPECT_EQ(out.class_logits.channels(), 4);
  EXPECT_EQ(out.class_logits.rows(), 64);
  EXPECT_EQ(out.regression.channels(), 6);
  EXPECT_EQ(out.regression.cols(), 64);
  EXPECT_EQ(out.freespace_logits.channels(), 2);
  EXPECT_EQ(out.freespace_logits.rows(), 128);
  const auto& s = net.layer_shapes();
  ASSERT_FALSE(s.empty());
  EXPECT_EQ(s.front().name, "1");
  EXPECT_EQ(s.front().channels, 16);
  EXPECT_EQ(s.front().rows, 128);
  for (const auto& l : s) {
    if (l.name == "6d") {
      EXPECT_EQ(l.channels, 128);
      EXPECT_EQ(l.rows, 16);
    }
  }
}

TEST(Network, ZeroHeadWeightsGiveBiasOnlyLogits) {
  oracle::Rng rng(10);
  Network<float> net({64, 8, 4}, 4);
  auto* w = net.find("class_head.weight");
  auto* b = net.find("class_head.bias");
  ASSERT_NE(w, nullptr);
  ASSERT_NE(b, nullptr);
  std::fill(w->value.begin(), w->value.end(), 0.0f);
  for (std::size_t c = 0; c < b->size(); ++c) b->value[c] = 0.25f * static_cast<float>(c);
  const auto out = net.infer(random_input(rng, 64));
  for (int c = 0; c < 4; ++c) {
    for (float v : out.class_logits.channel(c)) EXPECT_EQ(v, 0.25f * static_cast<float>(c));
  }
}

TEST(Network, FiniteAndDeterministic) {
  oracle::Rng rng(11);
  const auto in = random_input(rng, 64);
  Network<float> a({64, 8, 4}, 5), b({64, 8, 4}, 5);
  const auto oa = a.infer(in), ob = b.infer(in);
  EXPECT_EQ(oa.class_logits, ob.class_logits);
  EXPECT_EQ(oa.regression, ob.regression);
  EXPECT_EQ(oa.freespace_logits, ob.freespace_logits);
  for (float v : oa.freespace_logits.data()) EXPECT_TRUE(std::isfinite(v));
  // Inference mode is a pure function of weights and input.
  EXPECT_EQ(a.infer(in).class_logits, oa.class_logits);
}

TEST(Network, InputShapeMismatch) {
  Network<float> net({64, 8, 4}, 1);
  EXPECT_THROW(net.infer(Tensor3(5, 32, 32)), DataError);
}

TEST(Network, BackwardRequiresTrainForward) {
  Network<double> net({16, 4, 4}, 1);
  HeadBlobs<double> up;
  EXPECT_THROW(net.backward(up), DataError);
  oracle::Rng rng(12);
  const auto in = random_input(rng, 16);
  net.forward(to_blob<double>({&in}), nn::Mode::kInference);
  EXPECT_THROW(net.backward(up), DataError);
}

TEST(Network, ZeroUpstreamAndFrozenParameter) {
  oracle::Rng rng(13);
  const Tensor3 in0 = random_input(rng, 16), in1 = random_input(rng, 16);
  Network<double> net({16, 4, 4}, 2);
  net.freeze("stem.conv.weight");
  const auto out = net.forward(to_blob<double>({&in0, &in1}), nn::Mode::kTrain);
  HeadBlobs<double> zero{nn::Blob<double>(2, 4, 4, 4), nn::Blob<double>(2, 6, 4, 4), nn::Blob<double>(2, 2, 8, 8)};
  net.zero_grad();
  net.backward(zero);
  for (auto* p : net.parameters()) {
    for (double g : p->grad) ASSERT_EQ(g, 0.0) << p->name;
  }
  HeadBlobs<double> ones = out;
  for (auto* b : {&ones.class_logits, &ones.regression, &ones.freespace_logits}) std::fill(b->data.begin(), b->data.end(), 1.0);
  net.forward(to_blob<double>({&in0, &in1}), nn::Mode::kTrain);
  net.zero_grad();
  net.backward(ones);
  auto* frozen = net.find("stem.conv.weight");
  ASSERT_NE(frozen, nullptr);
  EXPECT_TRUE(std::all_of(frozen->grad.begin(), frozen->grad.end(), [](double g) { return g == 0.0; }));
  auto* head = net.find("class_head.bias");
  EXPECT_TRUE(std::any_of(head->grad.begin(), head->grad.end(), [](double g) { return g != 0.0; }));
}

TEST(Checkpoint, RoundTrip) {
  Network<float> net({32, 4, 4}, 6);
  const auto ckpt = make_checkpoint(net, {0.1, -0.2, 0.3}, 42);
  std::stringstream ss;
  write_checkpoint(ss, ckpt);
  const auto back = read_checkpoint(ss);
  EXPECT_EQ(back.config, ckpt.config);
  EXPECT_EQ(back.iteration, 42u);
  EXPECT_EQ(back.log_variances, ckpt.log_variances);
  ASSERT_EQ(back.tensors.size(), ckpt.tensors.size());
  Network<float> other({32, 4, 4}, 99);
  load_weights(other, back);
  oracle::Rng rng(14);
  const auto in = random_input(rng, 32);
  EXPECT_EQ(other.infer(in).regression, net.infer(in).regression);

  Network<float> wrong({64, 4, 4}, 1);
  EXPECT_THROW(load_weights(wrong, back), DataError);
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_checkpoint(bad), DataError);
}

}  // namespace
}  // namespace radarnet::model
