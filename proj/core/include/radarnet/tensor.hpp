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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace radarnet {

/// Dense 32-bit tensor, channel-outermost, row-major within a channel.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int channels, int rows, int cols, float fill = 0.0f);

  int channels() const noexcept { return channels_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept { return static_cast<std::size_t>(rows_) * cols_; }

  float& at(int c, int r, int col) { return data_[index(c, r, col)]; }
  float at(int c, int r, int col) const { return data_[index(c, r, col)]; }

  std::span<float> channel(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const float> channel(int c) const { return {data_.data() + c * plane_size(), plane_size()}; }

  std::vector<float>& data() noexcept { return data_; }
  const std::vector<float>& data() const noexcept { return data_; }

  bool same_shape(const Tensor3& o) const noexcept {
    return channels_ == o.channels_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t index(int c, int r, int col) const noexcept {
    return (static_cast<std::size_t>(c) * rows_ + r) * cols_ + col;
  }

  int channels_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> data_;
};

/// "BEVT" container: magic, u8 version, u32 channels/rows/cols, f32 data,
/// all little-endian.
inline constexpr unsigned char kBevtVersion = 1;

void write_bevt(std::ostream& os, const Tensor3& t);
Tensor3 read_bevt(std::istream& is);
void save_bevt(const std::filesystem::path& path, const Tensor3& t);
Tensor3 load_bevt(const std::filesystem::path& path);

}  // namespace radarnet
