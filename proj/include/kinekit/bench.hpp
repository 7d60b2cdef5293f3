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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kinekit/interchange.hpp"

namespace kinekit {

inline constexpr std::size_t kDefaultQuota = 200;
inline constexpr std::size_t kMinDefaultCap = 10;

struct BinConfig {
  double distance_width = 5.0;  // meters
  double distance_max = 50.0;   // everything at or above lands in "50+"
  double speed_width = 5.0;     // km/h
  double interval_width = 1.0;  // seconds of interval length
};

struct LabelBin {
  Task task;
  std::string key;

  auto operator<=>(const LabelBin&) const = default;
};

/// Keys: "[10,15)" style buckets, "50+", "hour-3", the chosen color, "yes"/"no".
LabelBin bin_of(const QaItem& item, const BinConfig& cfg = {});

std::map<LabelBin, std::vector<const QaItem*>> group_by_bin(const std::vector<QaItem>& items,
                                                            const BinConfig& cfg = {});

/// Smallest bin count of the task's items, clamped to [10, quota].
std::size_t default_cap(const std::vector<QaItem>& items, Task task, std::size_t quota = kDefaultQuota,
                        const BinConfig& cfg = {});

struct BalanceResult {
  std::vector<QaItem> items;  // dataset order
  std::map<Task, std::size_t> caps;
};

/// Keeps min(count, cap) items per bin, chosen uniformly without
/// replacement by a per-bin seeded shuffle. Tasks without an entry in `caps`
/// get default_cap(quota).
BalanceResult balance(const std::vector<QaItem>& items, const std::map<Task, std::size_t>& caps,
                      std::uint64_t seed, std::size_t quota = kDefaultQuota, const BinConfig& cfg = {});
/// Same cap for every task.
BalanceResult balance(const std::vector<QaItem>& items, std::size_t cap, std::uint64_t seed,
                      const BinConfig& cfg = {});

std::string balance_header(std::uint64_t seed, const std::map<Task, std::size_t>& caps);

struct AssembleOptions {
  std::size_t quota = kDefaultQuota;
  std::uint64_t seed = 0;
  bool allow_short = false;
  /// Balance caps carried into the header.
  std::map<Task, std::size_t> caps;
  BinConfig bins;
};

struct Benchmark {
  std::vector<QaItem> items;  // dataset order
  std::string header;         // one JSON line
  std::vector<std::string> warnings;
};

/// Draws `quota` items per task by round-robin over the task's label bins
/// (each shuffled with a derived seed). Throws ValidationError listing every
/// short pool unless allow_short is set, in which case the pool is taken
/// whole and a warning is recorded in the header.
Benchmark assemble(const std::map<Task, std::vector<QaItem>>& pools, const AssembleOptions& opt);

std::map<Task, std::vector<QaItem>> pools_by_task(const std::vector<QaItem>& items);

}  // namespace kinekit
