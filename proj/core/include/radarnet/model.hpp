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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "radarnet/nn/layers.hpp"
#include "radarnet/tensor.hpp"

namespace radarnet::model {

struct ModelConfig {
  int input_px = 800;
  int base_channels = 64;
  int num_classes = 4;  // three obstacle classes + background
  static constexpr int kInputChannels = 5;
  static constexpr int kRegChannels = 6;
  static constexpr int kFreespaceChannels = 2;

  static ModelConfig full_scale() { return {800, 64, 4}; }
  static ModelConfig desk() { return {256, 16, 4}; }

  /// Throws ConfigError.
  void validate() const;
  int class_px() const noexcept { return input_px / 4; }
  int freespace_px() const noexcept { return input_px / 2; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Per-frame head outputs.
struct HeadOutputs {
  Tensor3 class_logits;      // num_classes x P/4 x P/4
  Tensor3 regression;        // 6 x P/4 x P/4
  Tensor3 freespace_logits;  // 2 x P/2 x P/2
};

template <typename T>
struct HeadBlobs {
  nn::Blob<T> class_logits;
  nn::Blob<T> regression;
  nn::Blob<T> freespace_logits;
};

struct LayerShape {
  std::string name;
  int channels = 0;
  int rows = 0;
  int cols = 0;
};

/// Encoder (stem + blocks 2..6) with class, regression and free-space heads.
template <typename T>
class Network {
 public:
  Network(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const noexcept { return cfg_; }

  /// Batch-norm uses batch statistics in kTrain mode and running statistics in
  /// kInference mode. Only a kTrain pass can be followed by backward().
  HeadBlobs<T> forward(const nn::Blob<T>& input, nn::Mode mode);

  /// Accumulates parameter gradients for the last recorded kTrain forward
  /// pass. Throws DataError when none is recorded.
  void backward(const HeadBlobs<T>& upstream);

  /// Single frame, inference mode.
  HeadOutputs infer(const Tensor3& input);

  /// Output shapes of the last forward pass, named after the reference
  /// architecture table (1, 2a..6d, freespace_output, regression_output,
  /// class_output).
  const std::vector<LayerShape>& layer_shapes() const noexcept { return shapes_; }

  /// Trainable parameters.
  std::vector<nn::Param<T>*> parameters();
  /// Non-trainable state (batch-norm running statistics).
  std::vector<nn::Param<T>*> buffers();
  nn::Param<T>* find(const std::string& name);
  std::size_t parameter_count();
  void zero_grad();
  /// Excludes a parameter from gradient accumulation.
  void freeze(const std::string& name);

 private:
  ModelConfig cfg_;
  nn::ConvBnRelu<T> stem_;
  std::vector<nn::ConvBnRelu<T>> blocks_;
  nn::ConvTranspose2d<T> class_head_;
  nn::ConvTranspose2d<T> reg_head_;
  nn::ConvTranspose2d<T> fs_up1_;
  nn::ReLU<T> fs_relu_;
  nn::ConvTranspose2d<T> fs_up2_;
  nn::Conv2d<T> fs_skip_;
  std::vector<LayerShape> shapes_;
  bool recorded_ = false;
};

/// Converts a batch of frame tensors into an NCHW blob.
template <typename T>
nn::Blob<T> to_blob(const std::vector<const Tensor3*>& frames);

/// Extracts frame i of a blob.
template <typename T>
Tensor3 frame_of(const nn::Blob<T>& blob, int i);

/// Checkpoint container: "RNCK", u32 version, ModelConfig, the three
/// loss-weight log-variances, then named shape-tagged f32 arrays.
struct Checkpoint {
  ModelConfig config;
  std::array<double, 3> log_variances{0.0, 0.0, 0.0};
  std::uint64_t iteration = 0;
  struct Entry {
    std::string name;
    std::vector<int> shape;
    std::vector<float> data;
  };
  std::vector<Entry> tensors;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

Checkpoint make_checkpoint(Network<float>& net, const std::array<double, 3>& log_variances, std::uint64_t iteration);
/// Copies checkpoint tensors into a network of the same configuration.
void load_weights(Network<float>& net, const Checkpoint& ckpt);

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& is);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace radarnet::model
