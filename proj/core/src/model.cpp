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

#include "radarnet/model.hpp"

#include <cmath>
#include <fstream>

#include "radarnet/binary_io.hpp"
#include "radarnet/error.hpp"

namespace radarnet::model {

using nn::Blob;
using nn::ConvGeometry;
using nn::Mode;

void ModelConfig::validate() const {
  if (input_px <= 0 || input_px % 16 != 0) throw ConfigError("model input_px must be a positive multiple of 16");
  if (base_channels <= 0) throw ConfigError("model base_channels must be positive");
  if (num_classes != 4) throw ConfigError("model num_classes must be 4 (three obstacle classes + background)");
}

namespace {

struct BlockSpec {
  const char* name;
  int in_mult;
  int out_mult;
  int stride;
};

// Channel multipliers of the base width per encoder layer.
constexpr BlockSpec kBlocks[] = {
    {"2a", 1, 1, 2}, {"2b", 1, 1, 1}, {"3a", 1, 1, 1}, {"3b", 1, 1, 1},
    {"4a", 1, 2, 2}, {"4b", 2, 2, 1}, {"4c", 2, 2, 1}, {"4d", 2, 2, 1},
    {"5a", 2, 4, 2}, {"5b", 4, 4, 1}, {"5c", 4, 4, 1}, {"5d", 4, 4, 1},
    {"6a", 4, 8, 1}, {"6b", 8, 8, 1}, {"6c", 8, 8, 1}, {"6d", 8, 8, 1},
};

constexpr ConvGeometry kHeadUp{4, 4, 0};
constexpr ConvGeometry kFreespaceUp{4, 2, 1};

const ModelConfig& validated(const ModelConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

template <typename T>
Network<T>::Network(const ModelConfig& cfg, std::uint64_t seed)
    : cfg_(validated(cfg)),
      stem_("stem", ModelConfig::kInputChannels, cfg.base_channels, ConvGeometry{7, 2, 3}),
      class_head_("class_head", 8 * cfg.base_channels, cfg.num_classes, kHeadUp),
      reg_head_("regression_head", 8 * cfg.base_channels, ModelConfig::kRegChannels, kHeadUp),
      fs_up1_("freespace_up1", 8 * cfg.base_channels, cfg.base_channels, kHeadUp),
      fs_up2_("freespace_up2", cfg.base_channels, ModelConfig::kFreespaceChannels, kFreespaceUp),
      fs_skip_("freespace_skip", cfg.base_channels, ModelConfig::kFreespaceChannels, ConvGeometry{1, 1, 0}, true) {
  const int b = cfg.base_channels;
  for (const auto& spec : kBlocks) {
    blocks_.emplace_back(std::string("block") + spec.name, spec.in_mult * b, spec.out_mult * b,
                         ConvGeometry{3, spec.stride, 1});
  }
  stem_.set_propagate_input(false);

  nn::ParamInit rng(seed);
  stem_.init(rng);
  for (auto& blk : blocks_) blk.init(rng);
  class_head_.init(rng, std::sqrt(3.0 / (8 * b)));
  reg_head_.init(rng, std::sqrt(3.0 / (8 * b)));
  fs_up1_.init(rng, std::sqrt(6.0 / (8 * b)));
  fs_up2_.init(rng, std::sqrt(3.0 / (4 * b)));
  fs_skip_.init(rng, std::sqrt(3.0 / b));
}

template <typename T>
HeadBlobs<T> Network<T>::forward(const Blob<T>& input, Mode mode) {
  if (input.c != ModelConfig::kInputChannels || input.h != cfg_.input_px || input.w != cfg_.input_px) {
    throw DataError("network input must be " + std::to_string(ModelConfig::kInputChannels) + "x" +
                    std::to_string(cfg_.input_px) + "x" + std::to_string(cfg_.input_px) + ", got " +
                    std::to_string(input.c) + "x" + std::to_string(input.h) + "x" + std::to_string(input.w));
  }
  if (input.n <= 0) throw DataError("network input batch is empty");
  shapes_.clear();
  auto record = [&](const std::string& name, const Blob<T>& b) { shapes_.push_back({name, b.c, b.h, b.w}); };

  Blob<T> stem = stem_.forward(input, mode);
  record("1", stem);
  Blob<T> x = blocks_.front().forward(stem, mode);
  record(blocks_.front().name().substr(5), x);
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    x = blocks_[i].forward(x, mode);
    record(blocks_[i].name().substr(5), x);
  }

  HeadBlobs<T> out;
  out.freespace_logits = fs_up2_.forward(fs_relu_.forward(fs_up1_.forward(x, mode), mode), mode);
  const Blob<T> skip = fs_skip_.forward(stem, mode);
  for (std::size_t i = 0; i < skip.data.size(); ++i) out.freespace_logits.data[i] += skip.data[i];
  out.regression = reg_head_.forward(x, mode);
  out.class_logits = class_head_.forward(x, mode);
  record("freespace_output", out.freespace_logits);
  record("regression_output", out.regression);
  record("class_output", out.class_logits);
  recorded_ = mode == Mode::kTrain;
  return out;
}

template <typename T>
void Network<T>::backward(const HeadBlobs<T>& upstream) {
  if (!recorded_) throw DataError("network backward called without a recorded training forward pass");
  recorded_ = false;
  Blob<T> dx = class_head_.backward(upstream.class_logits);
  const Blob<T> dreg = reg_head_.backward(upstream.regression);
  for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dreg.data[i];
  const Blob<T> dfs = fs_up1_.backward(fs_relu_.backward(fs_up2_.backward(upstream.freespace_logits)));
  for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dfs.data[i];
  for (std::size_t i = blocks_.size(); i-- > 0;) dx = blocks_[i].backward(dx);
  const Blob<T> dskip = fs_skip_.backward(upstream.freespace_logits);
  for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dskip.data[i];
  stem_.backward(dx);
}

template <typename T>
HeadOutputs Network<T>::infer(const Tensor3& input) {
  const auto blobs = forward(to_blob<T>({&input}), Mode::kInference);
  return {frame_of(blobs.class_logits, 0), frame_of(blobs.regression, 0), frame_of(blobs.freespace_logits, 0)};
}

template <typename T>
std::vector<nn::Param<T>*> Network<T>::parameters() {
  std::vector<nn::Param<T>*> out;
  auto add = [&](std::vector<nn::Param<T>*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  add(stem_.params());
  for (auto& b : blocks_) add(b.params());
  add(class_head_.params());
  add(reg_head_.params());
  add(fs_up1_.params());
  add(fs_up2_.params());
  add(fs_skip_.params());
  return out;
}

template <typename T>
std::vector<nn::Param<T>*> Network<T>::buffers() {
  std::vector<nn::Param<T>*> out = stem_.buffers();
  for (auto& b : blocks_) {
    auto bb = b.buffers();
    out.insert(out.end(), bb.begin(), bb.end());
  }
  return out;
}

template <typename T>
nn::Param<T>* Network<T>::find(const std::string& name) {
  for (auto* p : parameters()) {
    if (p->name == name) return p;
  }
  for (auto* p : buffers()) {
    if (p->name == name) return p;
  }
  return nullptr;
}

template <typename T>
std::size_t Network<T>::parameter_count() {
  std::size_t n = 0;
  for (auto* p : parameters()) n += p->size();
  return n;
}

template <typename T>
void Network<T>::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

template <typename T>
void Network<T>::freeze(const std::string& name) {
  auto* p = find(name);
  if (!p) throw ConfigError("no parameter named '" + name + "'");
  p->trainable = false;
  p->zero_grad();
}

template <typename T>
Blob<T> to_blob(const std::vector<const Tensor3*>& frames) {
  if (frames.empty()) throw DataError("empty frame batch");
  const Tensor3& f0 = *frames.front();
  Blob<T> b(static_cast<int>(frames.size()), f0.channels(), f0.rows(), f0.cols());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frames[i]->same_shape(f0)) throw DataError("frames in a batch must share one shape");
    std::copy(frames[i]->data().begin(), frames[i]->data().end(), b.sample(static_cast<int>(i)));
  }
  return b;
}

template <typename T>
Tensor3 frame_of(const Blob<T>& blob, int i) {
  Tensor3 t(blob.c, blob.h, blob.w);
  const T* src = blob.sample(i);
  for (std::size_t j = 0; j < t.size(); ++j) t.data()[j] = static_cast<float>(src[j]);
  return t;
}

template class Network<float>;
template class Network<double>;
template Blob<float> to_blob<float>(const std::vector<const Tensor3*>&);
template Blob<double> to_blob<double>(const std::vector<const Tensor3*>&);
template Tensor3 frame_of<float>(const Blob<float>&, int);
template Tensor3 frame_of<double>(const Blob<double>&, int);

// ------------------------------------------------------------ checkpoints

Checkpoint make_checkpoint(Network<float>& net, const std::array<double, 3>& log_variances, std::uint64_t iteration) {
  Checkpoint c;
  c.config = net.config();
  c.log_variances = log_variances;
  c.iteration = iteration;
  auto add = [&](const nn::Param<float>* p) { c.tensors.push_back({p->name, p->shape, p->value}); };
  for (auto* p : net.parameters()) add(p);
  for (auto* p : net.buffers()) add(p);
  return c;
}

void load_weights(Network<float>& net, const Checkpoint& ckpt) {
  if (!(ckpt.config == net.config())) throw DataError("checkpoint model configuration does not match the network");
  for (const auto& e : ckpt.tensors) {
    auto* p = net.find(e.name);
    if (!p) throw DataError("checkpoint tensor '" + e.name + "' has no counterpart in the network");
    if (p->shape != e.shape) throw DataError("checkpoint tensor '" + e.name + "' has the wrong shape");
    p->value = e.data;
  }
}

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
  os.write("RNCK", 4);
  binary::put_u32(os, kCheckpointVersion);
  binary::put_u32(os, static_cast<std::uint32_t>(ckpt.config.input_px));
  binary::put_u32(os, static_cast<std::uint32_t>(ckpt.config.base_channels));
  binary::put_u32(os, static_cast<std::uint32_t>(ckpt.config.num_classes));
  for (double d : ckpt.log_variances) binary::put_f64(os, d);
  binary::put_u64(os, ckpt.iteration);
  binary::put_u32(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& e : ckpt.tensors) {
    binary::put_string(os, e.name);
    binary::put_u32(os, static_cast<std::uint32_t>(e.shape.size()));
    for (int d : e.shape) binary::put_u32(os, static_cast<std::uint32_t>(d));
    binary::put_u64(os, e.data.size());
    for (float v : e.data) binary::put_f32(os, v);
  }
  if (!os) throw DataError("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& is) {
  char magic[4];
  binary::read_exact(is, magic, 4);
  if (std::string(magic, 4) != "RNCK") throw DataError("not a checkpoint (bad magic)");
  const auto version = binary::get_u32(is);
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  c.config.input_px = static_cast<int>(binary::get_u32(is));
  c.config.base_channels = static_cast<int>(binary::get_u32(is));
  c.config.num_classes = static_cast<int>(binary::get_u32(is));
  try {
    c.config.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint carries an invalid model configuration: ") + e.what());
  }
  for (double& d : c.log_variances) d = binary::get_f64(is);
  c.iteration = binary::get_u64(is);
  const auto n = binary::get_u32(is);
  for (std::uint32_t i = 0; i < n; ++i) {
    Checkpoint::Entry e;
    e.name = binary::get_string(is, 256);
    const auto rank = binary::get_u32(is);
    if (rank > 8) throw DataError("checkpoint tensor rank too large");
    std::uint64_t expected = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      e.shape.push_back(static_cast<int>(binary::get_u32(is)));
      expected *= static_cast<std::uint64_t>(e.shape.back());
    }
    const auto count = binary::get_u64(is);
    if (count != expected) throw DataError("checkpoint tensor '" + e.name + "' size does not match its shape");
    if (count > (1ull << 31)) throw DataError("checkpoint tensor too large");
    e.data.resize(count);
    for (float& v : e.data) v = binary::get_f32(is);
    c.tensors.push_back(std::move(e));
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_checkpoint(os, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace radarnet::model
