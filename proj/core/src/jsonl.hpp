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

#include <cmath>
#include <istream>
#include <string>

#include "json.hpp"
#include "radarnet/error.hpp"

namespace radarnet::detail {

using Json = nlohmann::json;

/// Calls fn(json, line_number) for every non-blank line of a JSON-lines stream.
template <typename Fn>
void for_each_jsonl(std::istream& is, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");
    fn(j, line_no);
  }
}

inline double finite_field(const Json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError("line " + std::to_string(line_no) + ": missing field '" + key + "'");
  if (it->is_string()) {
    throw RejectedRecord(line_no, std::string("field '") + key + "' is not a finite number (" +
                                      it->get<std::string>() + ")");
  }
  if (!it->is_number()) throw DataError("line " + std::to_string(line_no) + ": field '" + key + "' is not a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw RejectedRecord(line_no, std::string("field '") + key + "' is not finite");
  return v;
}

inline long long integer_field(const Json& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError("line " + std::to_string(line_no) + ": missing field '" + key + "'");
  if (!it->is_number_integer()) {
    throw DataError("line " + std::to_string(line_no) + ": field '" + key + "' must be an integer");
  }
  return it->get<long long>();
}

}  // namespace radarnet::detail
