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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace radarnet::nn {

/// NCHW activation batch.
template <typename T>
struct Blob {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;
  std::vector<T> data;

  Blob() = default;
  Blob(int n_, int c_, int h_, int w_, T fill = T(0))
      : n(n_), c(c_), h(h_), w(w_), data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

  std::size_t sample_size() const noexcept { return static_cast<std::size_t>(c) * h * w; }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(h) * w; }
  T* sample(int i) noexcept { return data.data() + i * sample_size(); }
  const T* sample(int i) const noexcept { return data.data() + i * sample_size(); }
  bool same_shape(const Blob& o) const noexcept { return n == o.n && c == o.c && h == o.h && w == o.w; }
};

template <typename T>
struct Param {
  std::string name;
  std::vector<int> shape;
  std::vector<T> value;
  std::vector<T> grad;
  bool trainable = true;

  Param() = default;
  Param(std::string name_, std::vector<int> shape_, bool trainable_ = true);
  std::size_t size() const noexcept { return value.size(); }
  void zero_grad();
};

enum class Mode { kTrain, kInference };

/// Portable deterministic initializer (no reliance on std distributions).
class ParamInit {
 public:
  explicit ParamInit(std::uint64_t seed) : rng_(seed) {}
  double uniform(double bound) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return (2.0 * u - 1.0) * bound;
  }

 private:
  std::mt19937_64 rng_;
};

struct ConvGeometry {
  int kernel = 1;
  int stride = 1;
  int pad = 0;

  int out_size(int in) const { return (in + 2 * pad - kernel) / stride + 1; }
  /// Output size of the transposed convolution.
  int transposed_out_size(int in) const { return (in - 1) * stride - 2 * pad + kernel; }
};

/// im2col for a single CHW sample: writes a (C*k*k) x (Ho*Wo) row-major matrix.
template <typename T>
void im2col(const T* src, int channels, int h, int w, const ConvGeometry& g, T* cols);
/// Adjoint of im2col: accumulates the column matrix back into a zeroed CHW sample.
template <typename T>
void col2im(const T* cols, int channels, int h, int w, const ConvGeometry& g, T* dst);

template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, int in_ch, int out_ch, ConvGeometry g, bool bias);

  void init(ParamInit& rng, double bound);
  Blob<T> forward(const Blob<T>& x, Mode mode);
  Blob<T> backward(const Blob<T>& dy);
  std::vector<Param<T>*> params();

  int in_channels() const noexcept { return in_ch_; }
  int out_channels() const noexcept { return out_ch_; }
  const ConvGeometry& geometry() const noexcept { return g_; }

  /// When false, backward() returns a zero input gradient without computing it
  /// (first layer on raw data).
  void set_propagate_input(bool on) noexcept { propagate_input_ = on; }

 private:
  int in_ch_ = 0;
  int out_ch_ = 0;
  ConvGeometry g_;
  bool has_bias_ = false;
  bool propagate_input_ = true;
  Param<T> weight_;  // out x (in*k*k)
  Param<T> bias_;
  int in_h_ = 0, in_w_ = 0, batch_ = 0;
  std::vector<std::vector<T>> cols_;
};

template <typename T>
class ConvTranspose2d {
 public:
  ConvTranspose2d() = default;
  ConvTranspose2d(std::string name, int in_ch, int out_ch, ConvGeometry g);

  void init(ParamInit& rng, double bound);
  Blob<T> forward(const Blob<T>& x, Mode mode);
  Blob<T> backward(const Blob<T>& dy);
  std::vector<Param<T>*> params();

  int in_channels() const noexcept { return in_ch_; }

 private:
  int in_ch_ = 0;
  int out_ch_ = 0;
  ConvGeometry g_;
  Param<T> weight_;  // in x (out*k*k)
  Param<T> bias_;
  Blob<T> input_;
};

template <typename T>
class BatchNorm2d {
 public:
  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.1;

  BatchNorm2d() = default;
  BatchNorm2d(std::string name, int channels);

  Blob<T> forward(const Blob<T>& x, Mode mode);
  Blob<T> backward(const Blob<T>& dy);
  std::vector<Param<T>*> params();
  std::vector<Param<T>*> buffers();

 private:
  int channels_ = 0;
  Param<T> gamma_;
  Param<T> beta_;
  Param<T> running_mean_;
  Param<T> running_var_;
  Blob<T> xhat_;
  std::vector<T> inv_std_;
};

template <typename T>
class ReLU {
 public:
  Blob<T> forward(const Blob<T>& x, Mode mode);
  Blob<T> backward(const Blob<T>& dy);

 private:
  std::vector<std::uint8_t> mask_;
};

/// conv -> batch norm -> ReLU.
template <typename T>
class ConvBnRelu {
 public:
  ConvBnRelu() = default;
  ConvBnRelu(const std::string& name, int in_ch, int out_ch, ConvGeometry g);

  const std::string& name() const noexcept { return name_; }
  void init(ParamInit& rng);
  Blob<T> forward(const Blob<T>& x, Mode mode);
  Blob<T> backward(const Blob<T>& dy);
  std::vector<Param<T>*> params();
  std::vector<Param<T>*> buffers() { return bn_.buffers(); }
  void set_propagate_input(bool on) noexcept { conv_.set_propagate_input(on); }

 private:
  std::string name_;
  Conv2d<T> conv_;
  BatchNorm2d<T> bn_;
  ReLU<T> relu_;
};

}  // namespace radarnet::nn
