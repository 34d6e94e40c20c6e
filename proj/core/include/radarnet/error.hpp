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

#include <stdexcept>
#include <string>

namespace radarnet {

/// Base of every error raised by the library. The CLI maps each subclass
/// onto a distinct process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad GridSpec, FeatureRanges, ModelConfig, unknown
/// config keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (files, streams, shapes, coverage).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A single input record that parsed but carries a value we refuse to use.
class RejectedRecord : public DataError {
 public:
  RejectedRecord(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": rejected record: " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite losses or other numeric breakdowns during training/inference.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace radarnet
