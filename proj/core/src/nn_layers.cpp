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

#include <algorithm>
#include <cmath>
#include <Eigen/Core>

#include "radarnet/error.hpp"
#include "radarnet/nn/layers.hpp"

namespace radarnet::nn {

namespace {

template <typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapR = Eigen::Map<MatR<T>>;
template <typename T>
using CMapR = Eigen::Map<const MatR<T>>;

std::size_t product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

}  // namespace

template <typename T>
Param<T>::Param(std::string name_, std::vector<int> shape_, bool trainable_)
    : name(std::move(name_)), shape(std::move(shape_)), trainable(trainable_) {
  value.assign(product(shape), T(0));
  grad.assign(value.size(), T(0));
}

template <typename T>
void Param<T>::zero_grad() {
  std::fill(grad.begin(), grad.end(), T(0));
}

template <typename T>
void im2col(const T* src, int channels, int h, int w, const ConvGeometry& g, T* cols) {
  const int ho = g.out_size(h);
  const int wo = g.out_size(w);
  const int k = g.kernel;
  for (int c = 0; c < channels; ++c) {
    const T* plane = src + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* dst = cols + (static_cast<std::size_t>(c * k + ky) * k + kx) * ho * wo;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          T* row = dst + static_cast<std::size_t>(oy) * wo;
          if (iy < 0 || iy >= h) {
            std::fill(row, row + wo, T(0));
            continue;
          }
          const T* in = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            row[ox] = (ix >= 0 && ix < w) ? in[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const T* cols, int channels, int h, int w, const ConvGeometry& g, T* dst) {
  const int ho = g.out_size(h);
  const int wo = g.out_size(w);
  const int k = g.kernel;
  for (int c = 0; c < channels; ++c) {
    T* plane = dst + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* src = cols + (static_cast<std::size_t>(c * k + ky) * k + kx) * ho * wo;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= h) continue;
          const T* row = src + static_cast<std::size_t>(oy) * wo;
          T* out = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < w) out[ix] += row[ox];
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------- Conv2d

template <typename T>
Conv2d<T>::Conv2d(std::string name, int in_ch, int out_ch, ConvGeometry g, bool bias)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      g_(g),
      has_bias_(bias),
      weight_(name + ".weight", {out_ch, in_ch, g.kernel, g.kernel}),
      bias_(name + ".bias", {bias ? out_ch : 0}) {}

template <typename T>
void Conv2d<T>::init(ParamInit& rng, double bound) {
  for (auto& v : weight_.value) v = static_cast<T>(rng.uniform(bound));
  std::fill(bias_.value.begin(), bias_.value.end(), T(0));
}

template <typename T>
Blob<T> Conv2d<T>::forward(const Blob<T>& x, Mode mode) {
  if (x.c != in_ch_) throw DataError(weight_.name + ": input has " + std::to_string(x.c) + " channels");
  const int ho = g_.out_size(x.h);
  const int wo = g_.out_size(x.w);
  const int kdim = in_ch_ * g_.kernel * g_.kernel;
  const int hw = ho * wo;
  Blob<T> y(x.n, out_ch_, ho, wo);
  in_h_ = x.h;
  in_w_ = x.w;
  batch_ = x.n;
  const bool keep = mode == Mode::kTrain;
  cols_.resize(keep ? static_cast<std::size_t>(x.n) : 1);
  CMapR<T> wm(weight_.value.data(), out_ch_, kdim);
  for (int i = 0; i < x.n; ++i) {
    auto& col = cols_[keep ? static_cast<std::size_t>(i) : 0];
    col.resize(static_cast<std::size_t>(kdim) * hw);
    im2col(x.sample(i), in_ch_, x.h, x.w, g_, col.data());
    MapR<T> ym(y.sample(i), out_ch_, hw);
    ym.noalias() = wm * CMapR<T>(col.data(), kdim, hw);
    if (has_bias_) {
      for (int o = 0; o < out_ch_; ++o) ym.row(o).array() += bias_.value[static_cast<std::size_t>(o)];
    }
  }
  if (!keep) cols_.clear();
  return y;
}

template <typename T>
Blob<T> Conv2d<T>::backward(const Blob<T>& dy) {
  if (cols_.size() != static_cast<std::size_t>(batch_) || batch_ == 0) {
    throw DataError(weight_.name + ": backward without a recorded training forward pass");
  }
  const int kdim = in_ch_ * g_.kernel * g_.kernel;
  const int hw = dy.h * dy.w;
  Blob<T> dx(dy.n, in_ch_, in_h_, in_w_);
  CMapR<T> wm(weight_.value.data(), out_ch_, kdim);
  MapR<T> dwm(weight_.grad.data(), out_ch_, kdim);
  std::vector<T> dcol(static_cast<std::size_t>(kdim) * hw);
  for (int i = 0; i < dy.n; ++i) {
    CMapR<T> dym(dy.sample(i), out_ch_, hw);
    CMapR<T> cm(cols_[static_cast<std::size_t>(i)].data(), kdim, hw);
    if (weight_.trainable) dwm.noalias() += dym * cm.transpose();
    if (has_bias_ && bias_.trainable) {
      for (int o = 0; o < out_ch_; ++o) bias_.grad[static_cast<std::size_t>(o)] += dym.row(o).sum();
    }
    if (!propagate_input_) continue;
    MapR<T>(dcol.data(), kdim, hw).noalias() = wm.transpose() * dym;
    col2im(dcol.data(), in_ch_, in_h_, in_w_, g_, dx.sample(i));
  }
  cols_.clear();
  batch_ = 0;
  return dx;
}

template <typename T>
std::vector<Param<T>*> Conv2d<T>::params() {
  if (has_bias_) return {&weight_, &bias_};
  return {&weight_};
}

// ------------------------------------------------------- ConvTranspose2d

template <typename T>
ConvTranspose2d<T>::ConvTranspose2d(std::string name, int in_ch, int out_ch, ConvGeometry g)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      g_(g),
      weight_(name + ".weight", {in_ch, out_ch, g.kernel, g.kernel}),
      bias_(name + ".bias", {out_ch}) {}

template <typename T>
void ConvTranspose2d<T>::init(ParamInit& rng, double bound) {
  for (auto& v : weight_.value) v = static_cast<T>(rng.uniform(bound));
  std::fill(bias_.value.begin(), bias_.value.end(), T(0));
}

template <typename T>
Blob<T> ConvTranspose2d<T>::forward(const Blob<T>& x, Mode mode) {
  if (x.c != in_ch_) throw DataError(weight_.name + ": input has " + std::to_string(x.c) + " channels");
  const int ho = g_.transposed_out_size(x.h);
  const int wo = g_.transposed_out_size(x.w);
  const int kdim = out_ch_ * g_.kernel * g_.kernel;
  const int hw = x.h * x.w;
  Blob<T> y(x.n, out_ch_, ho, wo);
  CMapR<T> wm(weight_.value.data(), in_ch_, kdim);
  std::vector<T> cols(static_cast<std::size_t>(kdim) * hw);
  for (int i = 0; i < x.n; ++i) {
    MapR<T>(cols.data(), kdim, hw).noalias() = wm.transpose() * CMapR<T>(x.sample(i), in_ch_, hw);
    col2im(cols.data(), out_ch_, ho, wo, g_, y.sample(i));
    T* out = y.sample(i);
    for (int o = 0; o < out_ch_; ++o) {
      const T b = bias_.value[static_cast<std::size_t>(o)];
      T* p = out + static_cast<std::size_t>(o) * y.plane();
      for (std::size_t j = 0; j < y.plane(); ++j) p[j] += b;
    }
  }
  if (mode == Mode::kTrain) {
    input_ = x;
  } else {
    input_ = Blob<T>();
  }
  return y;
}

template <typename T>
Blob<T> ConvTranspose2d<T>::backward(const Blob<T>& dy) {
  if (input_.n == 0) throw DataError(weight_.name + ": backward without a recorded training forward pass");
  const int kdim = out_ch_ * g_.kernel * g_.kernel;
  const int hw = input_.h * input_.w;
  Blob<T> dx(input_.n, in_ch_, input_.h, input_.w);
  CMapR<T> wm(weight_.value.data(), in_ch_, kdim);
  MapR<T> dwm(weight_.grad.data(), in_ch_, kdim);
  std::vector<T> dcols(static_cast<std::size_t>(kdim) * hw);
  for (int i = 0; i < dy.n; ++i) {
    im2col(dy.sample(i), out_ch_, dy.h, dy.w, g_, dcols.data());
    CMapR<T> dcm(dcols.data(), kdim, hw);
    if (weight_.trainable) dwm.noalias() += CMapR<T>(input_.sample(i), in_ch_, hw) * dcm.transpose();
    MapR<T>(dx.sample(i), in_ch_, hw).noalias() = wm * dcm;
    if (bias_.trainable) {
      const T* g = dy.sample(i);
      for (int o = 0; o < out_ch_; ++o) {
        T acc = T(0);
        const T* p = g + static_cast<std::size_t>(o) * dy.plane();
        for (std::size_t j = 0; j < dy.plane(); ++j) acc += p[j];
        bias_.grad[static_cast<std::size_t>(o)] += acc;
      }
    }
  }
  input_ = Blob<T>();
  return dx;
}

template <typename T>
std::vector<Param<T>*> ConvTranspose2d<T>::params() {
  return {&weight_, &bias_};
}

// ----------------------------------------------------------- BatchNorm2d

template <typename T>
BatchNorm2d<T>::BatchNorm2d(std::string name, int channels)
    : channels_(channels),
      gamma_(name + ".gamma", {channels}),
      beta_(name + ".beta", {channels}),
      running_mean_(name + ".running_mean", {channels}, false),
      running_var_(name + ".running_var", {channels}, false) {
  std::fill(gamma_.value.begin(), gamma_.value.end(), T(1));
  std::fill(running_var_.value.begin(), running_var_.value.end(), T(1));
}

template <typename T>
Blob<T> BatchNorm2d<T>::forward(const Blob<T>& x, Mode mode) {
  Blob<T> y(x.n, x.c, x.h, x.w);
  const std::size_t plane = x.plane();
  const double count = static_cast<double>(x.n) * plane;
  if (mode == Mode::kTrain) {
    xhat_ = Blob<T>(x.n, x.c, x.h, x.w);
    inv_std_.assign(static_cast<std::size_t>(channels_), T(0));
  }
  for (int c = 0; c < channels_; ++c) {
    double mean;
    double var;
    if (mode == Mode::kTrain) {
      double s = 0.0;
      for (int i = 0; i < x.n; ++i) {
        const T* p = x.sample(i) + c * plane;
        for (std::size_t j = 0; j < plane; ++j) s += p[j];
      }
      mean = s / count;
      double ss = 0.0;
      for (int i = 0; i < x.n; ++i) {
        const T* p = x.sample(i) + c * plane;
        for (std::size_t j = 0; j < plane; ++j) {
          const double d = p[j] - mean;
          ss += d * d;
        }
      }
      var = ss / count;
      const double unbiased = count > 1.0 ? ss / (count - 1.0) : var;
      auto& rm = running_mean_.value[static_cast<std::size_t>(c)];
      auto& rv = running_var_.value[static_cast<std::size_t>(c)];
      rm = static_cast<T>((1.0 - kMomentum) * rm + kMomentum * mean);
      rv = static_cast<T>((1.0 - kMomentum) * rv + kMomentum * unbiased);
    } else {
      mean = running_mean_.value[static_cast<std::size_t>(c)];
      var = running_var_.value[static_cast<std::size_t>(c)];
    }
    const T inv = static_cast<T>(1.0 / std::sqrt(var + kEps));
    const T g = gamma_.value[static_cast<std::size_t>(c)];
    const T b = beta_.value[static_cast<std::size_t>(c)];
    const T m = static_cast<T>(mean);
    if (mode == Mode::kTrain) inv_std_[static_cast<std::size_t>(c)] = inv;
    for (int i = 0; i < x.n; ++i) {
      const T* p = x.sample(i) + c * plane;
      T* q = y.sample(i) + c * plane;
      T* xh = mode == Mode::kTrain ? xhat_.sample(i) + c * plane : nullptr;
      for (std::size_t j = 0; j < plane; ++j) {
        const T v = (p[j] - m) * inv;
        if (xh) xh[j] = v;
        q[j] = g * v + b;
      }
    }
  }
  return y;
}

template <typename T>
Blob<T> BatchNorm2d<T>::backward(const Blob<T>& dy) {
  if (xhat_.n == 0) throw DataError(gamma_.name + ": backward without a recorded training forward pass");
  Blob<T> dx(dy.n, dy.c, dy.h, dy.w);
  const std::size_t plane = dy.plane();
  const double count = static_cast<double>(dy.n) * plane;
  for (int c = 0; c < channels_; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (int i = 0; i < dy.n; ++i) {
      const T* g = dy.sample(i) + c * plane;
      const T* xh = xhat_.sample(i) + c * plane;
      for (std::size_t j = 0; j < plane; ++j) {
        sum_dy += g[j];
        sum_dy_xhat += static_cast<double>(g[j]) * xh[j];
      }
    }
    if (gamma_.trainable) gamma_.grad[static_cast<std::size_t>(c)] += static_cast<T>(sum_dy_xhat);
    if (beta_.trainable) beta_.grad[static_cast<std::size_t>(c)] += static_cast<T>(sum_dy);
    const double scale = gamma_.value[static_cast<std::size_t>(c)] * inv_std_[static_cast<std::size_t>(c)] / count;
    const double mean_dy = sum_dy;
    const double mean_dyx = sum_dy_xhat;
    for (int i = 0; i < dy.n; ++i) {
      const T* g = dy.sample(i) + c * plane;
      const T* xh = xhat_.sample(i) + c * plane;
      T* d = dx.sample(i) + c * plane;
      for (std::size_t j = 0; j < plane; ++j) {
        d[j] = static_cast<T>(scale * (count * g[j] - mean_dy - xh[j] * mean_dyx));
      }
    }
  }
  xhat_ = Blob<T>();
  return dx;
}

template <typename T>
std::vector<Param<T>*> BatchNorm2d<T>::params() {
  return {&gamma_, &beta_};
}

template <typename T>
std::vector<Param<T>*> BatchNorm2d<T>::buffers() {
  return {&running_mean_, &running_var_};
}

// ------------------------------------------------------------------ ReLU

template <typename T>
Blob<T> ReLU<T>::forward(const Blob<T>& x, Mode mode) {
  Blob<T> y = x;
  if (mode == Mode::kTrain) mask_.assign(x.data.size(), 0);
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    if (y.data[i] > T(0)) {
      if (mode == Mode::kTrain) mask_[i] = 1;
    } else {
      y.data[i] = T(0);
    }
  }
  return y;
}

template <typename T>
Blob<T> ReLU<T>::backward(const Blob<T>& dy) {
  if (mask_.size() != dy.data.size()) throw DataError("relu: backward without a recorded training forward pass");
  Blob<T> dx = dy;
  for (std::size_t i = 0; i < dx.data.size(); ++i) {
    if (!mask_[i]) dx.data[i] = T(0);
  }
  mask_.clear();
  return dx;
}

// ------------------------------------------------------------ ConvBnRelu

template <typename T>
ConvBnRelu<T>::ConvBnRelu(const std::string& name, int in_ch, int out_ch, ConvGeometry g)
    : name_(name), conv_(name + ".conv", in_ch, out_ch, g, false), bn_(name + ".bn", out_ch) {}

template <typename T>
void ConvBnRelu<T>::init(ParamInit& rng) {
  const int fan_in = conv_.in_channels() * conv_.geometry().kernel * conv_.geometry().kernel;
  conv_.init(rng, std::sqrt(6.0 / fan_in));
}

template <typename T>
Blob<T> ConvBnRelu<T>::forward(const Blob<T>& x, Mode mode) {
  return relu_.forward(bn_.forward(conv_.forward(x, mode), mode), mode);
}

template <typename T>
Blob<T> ConvBnRelu<T>::backward(const Blob<T>& dy) {
  return conv_.backward(bn_.backward(relu_.backward(dy)));
}

template <typename T>
std::vector<Param<T>*> ConvBnRelu<T>::params() {
  auto p = conv_.params();
  for (auto* q : bn_.params()) p.push_back(q);
  return p;
}

#define RADARNET_INSTANTIATE(T)                                                              \
  template struct Param<T>;                                                                  \
  template void im2col<T>(const T*, int, int, int, const ConvGeometry&, T*);                \
  template void col2im<T>(const T*, int, int, int, const ConvGeometry&, T*);                \
  template class Conv2d<T>;                                                                  \
  template class ConvTranspose2d<T>;                                                         \
  template class BatchNorm2d<T>;                                                             \
  template class ReLU<T>;                                                                    \
  template class ConvBnRelu<T>;

RADARNET_INSTANTIATE(float)
RADARNET_INSTANTIATE(double)

#undef RADARNET_INSTANTIATE

}  // namespace radarnet::nn
