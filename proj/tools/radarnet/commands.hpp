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

#include <filesystem>
#include <string>

#include "radarnet/config.hpp"

namespace radarnet::cli {

struct Runtime {
  RunConfig cfg;
  int jobs = 1;
  bool deterministic = false;
};

void cmd_synth(const Runtime& rt, const std::filesystem::path& out);
void cmd_prepare(const Runtime& rt, const std::filesystem::path& data);
void cmd_train(const Runtime& rt, const std::filesystem::path& data, const std::filesystem::path& checkpoint,
               std::filesystem::path loss_csv);
void cmd_infer(const Runtime& rt, const std::filesystem::path& checkpoint, const std::filesystem::path& data,
               const std::filesystem::path& out, const std::string& split);
void cmd_eval(const Runtime& rt, const std::filesystem::path& pred, const std::filesystem::path& data,
              const std::filesystem::path& out, const std::string& split);
void cmd_rdm(const Runtime& rt, const std::filesystem::path& occupancy, const std::filesystem::path& out,
             const std::filesystem::path& lut_cache);
void cmd_plot(const Runtime& rt, const std::filesystem::path& data, int frame, const std::filesystem::path& pred,
              const std::filesystem::path& out);

}  // namespace radarnet::cli
