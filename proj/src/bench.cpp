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

#include "kinekit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "kinekit/rng.hpp"

namespace kinekit {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string bucket(double value, double width) {
  const double k = std::floor(value / width);
  return "[" + num(k * width) + "," + num((k + 1) * width) + ")";
}

std::vector<QaItem> ordered(std::vector<QaItem> items) {
  std::sort(items.begin(), items.end(), dataset_order);
  return items;
}

bool by_qa_id(const QaItem* a, const QaItem* b) { return a->qa_id < b->qa_id; }

}  // namespace

LabelBin bin_of(const QaItem& item, const BinConfig& cfg) {
  const std::string key = std::visit(
      [&](const auto& a) -> std::string {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, Meters>) {
          return a.value >= cfg.distance_max ? num(cfg.distance_max) + "+" : bucket(a.value, cfg.distance_width);
        } else if constexpr (std::is_same_v<A, Kmh>) {
          return bucket(a.value, cfg.speed_width);
        } else if constexpr (std::is_same_v<A, ClockHour>) {
          return "hour-" + std::to_string(a.hour);
        } else if constexpr (std::is_same_v<A, TimeInterval>) {
          return bucket(a.length(), cfg.interval_width);
        } else if constexpr (std::is_same_v<A, ColorChoice>) {
          return a.color;
        } else {
          return a.value ? "yes" : "no";
        }
      },
      item.answer);
  return LabelBin{item.task, key};
}

std::map<LabelBin, std::vector<const QaItem*>> group_by_bin(const std::vector<QaItem>& items,
                                                            const BinConfig& cfg) {
  std::map<LabelBin, std::vector<const QaItem*>> bins;
  for (const auto& q : items) bins[bin_of(q, cfg)].push_back(&q);
  for (auto& [bin, v] : bins) std::sort(v.begin(), v.end(), by_qa_id);
  return bins;
}

std::size_t default_cap(const std::vector<QaItem>& items, Task task, std::size_t quota, const BinConfig& cfg) {
  std::size_t smallest = 0;
  bool any = false;
  for (const auto& [bin, v] : group_by_bin(items, cfg)) {
    if (bin.task != task) continue;
    smallest = any ? std::min(smallest, v.size()) : v.size();
    any = true;
  }
  const std::size_t hi = std::max(quota, kMinDefaultCap);
  return std::clamp(any ? smallest : kMinDefaultCap, kMinDefaultCap, hi);
}

BalanceResult balance(const std::vector<QaItem>& items, const std::map<Task, std::size_t>& caps,
                      std::uint64_t seed, std::size_t quota, const BinConfig& cfg) {
  BalanceResult out;
  for (const auto& q : items) {
    if (!out.caps.count(q.task)) {
      auto it = caps.find(q.task);
      out.caps[q.task] = it != caps.end() ? it->second : default_cap(items, q.task, quota, cfg);
    }
  }
  for (const auto& [task, cap] : out.caps) {
    if (cap < 1) throw ValidationError("cap(" + std::string(to_string(task)) + ")", "must be >= 1");
  }
  for (auto& [bin, v] : group_by_bin(items, cfg)) {
    const std::size_t cap = out.caps.at(bin.task);
    Rng rng(derive_seed(seed, "balance/" + std::string(to_string(bin.task)) + "/" + bin.key));
    rng.shuffle(v);
    for (std::size_t i = 0; i < v.size() && i < cap; ++i) out.items.push_back(*v[i]);
  }
  out.items = ordered(std::move(out.items));
  return out;
}

BalanceResult balance(const std::vector<QaItem>& items, std::size_t cap, std::uint64_t seed,
                      const BinConfig& cfg) {
  std::map<Task, std::size_t> caps;
  for (Task t : kAllTasks) caps[t] = cap;
  BalanceResult r = balance(items, caps, seed, kDefaultQuota, cfg);
  return r;
}

std::string balance_header(std::uint64_t seed, const std::map<Task, std::size_t>& caps) {
  nlohmann::ordered_json h;
  h["kind"] = "balance_header";
  h["seed"] = seed;
  h["caps"] = nlohmann::ordered_json::object();
  for (const auto& [task, cap] : caps) h["caps"][std::string(to_string(task))] = cap;
  return h.dump();
}

std::map<Task, std::vector<QaItem>> pools_by_task(const std::vector<QaItem>& items) {
  std::map<Task, std::vector<QaItem>> pools;
  for (const auto& q : items) pools[q.task].push_back(q);
  return pools;
}

Benchmark assemble(const std::map<Task, std::vector<QaItem>>& pools, const AssembleOptions& opt) {
  if (opt.quota < 1) throw ValidationError("quota", "must be >= 1");
  Benchmark out;
  IssueList shortfalls;
  for (const auto& [task, pool] : pools) {
    if (pool.size() < opt.quota) {
      const std::string msg = "pool has " + std::to_string(pool.size()) + " items, quota " +
                              std::to_string(opt.quota) + ", short by " + std::to_string(opt.quota - pool.size());
      if (opt.allow_short) {
        out.warnings.push_back(std::string(to_string(task)) + ": " + msg);
      } else {
        shortfalls.add(std::string(to_string(task)), msg);
      }
    }
  }
  shortfalls.throw_if_any();

  std::map<Task, std::size_t> counts;
  for (const auto& [task, pool] : pools) {
    std::vector<std::vector<const QaItem*>> bins;
    for (auto& [bin, v] : group_by_bin(pool, opt.bins)) {
      Rng rng(derive_seed(opt.seed, "assemble/" + std::string(to_string(task)) + "/" + bin.key));
      rng.shuffle(v);
      bins.push_back(std::move(v));
    }
    std::size_t taken = 0;
    for (std::size_t round = 0; taken < opt.quota; ++round) {
      bool any = false;
      for (const auto& v : bins) {
        if (round >= v.size() || taken >= opt.quota) continue;
        out.items.push_back(*v[round]);
        ++taken;
        any = true;
      }
      if (!any) break;
    }
    counts[task] = taken;
  }
  out.items = ordered(std::move(out.items));

  nlohmann::ordered_json h;
  h["kind"] = "benchmark_header";
  h["seed"] = opt.seed;
  h["quota"] = opt.quota;
  h["caps"] = nlohmann::ordered_json::object();
  for (const auto& [task, cap] : opt.caps) h["caps"][std::string(to_string(task))] = cap;
  h["counts"] = nlohmann::ordered_json::object();
  for (const auto& [task, n] : counts) h["counts"][std::string(to_string(task))] = n;
  h["warnings"] = out.warnings;
  h["tool_version"] = KINEKIT_VERSION;
  out.header = h.dump();
  return out;
}

}  // namespace kinekit
