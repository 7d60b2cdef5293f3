// Copyright 2026 The kinekit Authors
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
#include <filesystem>
#include <optional>
#include <string>

#include "kinekit/bench.hpp"
#include "kinekit/pseudolabel.hpp"
#include "kinekit/qagen.hpp"

namespace kinekit {

/// Every tunable threshold, in the manifest text format. A config file may
/// set any subset of keys; the rest keep their defaults. Unknown keys are
/// rejected.
struct Config {
  PipelineConfig pipeline;  // gate, kinematics, smoothing, speed caps, stride
  GenConfig gen;            // its kinematics mirror pipeline.kinematics
  BinConfig bins;
  std::size_t quota = kDefaultQuota;
  /// Per-bin cap for every task; unset means the per-task default.
  std::optional<std::size_t> cap;
  std::uint64_t seed = 0;

  const KinematicsConfig& kinematics() const { return pipeline.kinematics; }
};

/// Throws ValidationError listing every non-positive or inconsistent value.
void validate(const Config& c);

std::string config_to_json(const Config& c);
Config config_from_json(const std::string& text, const std::string& origin = "<memory>");
Config read_config(const std::filesystem::path& path);

}  // namespace kinekit
