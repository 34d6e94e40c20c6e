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

#include "radarnet/tensor.hpp"

#include <fstream>

#include "radarnet/binary_io.hpp"
#include "radarnet/error.hpp"

namespace radarnet {

Tensor3::Tensor3(int channels, int rows, int cols, float fill)
    : channels_(channels), rows_(rows), cols_(cols) {
  if (channels < 0 || rows < 0 || cols < 0) throw DataError("negative tensor dimension");
  data_.assign(static_cast<std::size_t>(channels) * rows * cols, fill);
}

void write_bevt(std::ostream& os, const Tensor3& t) {
  os.write("BEVT", 4);
  binary::put_u8(os, kBevtVersion);
  binary::put_u32(os, static_cast<std::uint32_t>(t.channels()));
  binary::put_u32(os, static_cast<std::uint32_t>(t.rows()));
  binary::put_u32(os, static_cast<std::uint32_t>(t.cols()));
  for (float v : t.data()) binary::put_f32(os, v);
  if (!os) throw DataError("failed writing BEVT stream");
}

Tensor3 read_bevt(std::istream& is) {
  char magic[4];
  binary::read_exact(is, magic, 4);
  if (std::string(magic, 4) != "BEVT") throw DataError("not a BEVT stream (bad magic)");
  const auto version = binary::get_u8(is);
  if (version != kBevtVersion) throw DataError("unsupported BEVT version " + std::to_string(version));
  const auto c = binary::get_u32(is);
  const auto r = binary::get_u32(is);
  const auto w = binary::get_u32(is);
  constexpr std::uint64_t kMaxElements = 1ull << 31;
  if (static_cast<std::uint64_t>(c) * r * w > kMaxElements) throw DataError("BEVT dimensions too large");
  Tensor3 t(static_cast<int>(c), static_cast<int>(r), static_cast<int>(w));
  for (float& v : t.data()) v = binary::get_f32(is);
  return t;
}

void save_bevt(const std::filesystem::path& path, const Tensor3& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_bevt(os, t);
}

Tensor3 load_bevt(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  try {
    return read_bevt(is);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace radarnet
