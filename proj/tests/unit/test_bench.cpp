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

#include <doctest.h>

#include <cstdio>
#include <map>
#include <set>

#include <json.hpp>

#include "kinekit/bench.hpp"

using namespace kinekit;

namespace {

QaItem item(Task t, int n, TypedAnswer a, const std::string& scene = "s") {
  QaItem q;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", n);
  q.qa_id = scene + "/" + std::string(to_string(t)) + "/" + buf;
  q.scene_id = scene;
  q.task = t;
  q.question = "q";
  q.answer_text = "Answer: x";
  q.answer = std::move(a);
  q.objects = {"a"};
  q.object_colors = {{"a", "red"}};
  q.frame_timestamps = {0.0};
  q.duration = 10.0;
  return q;
}

std::vector<QaItem> distance_pool(const std::vector<std::pair<double, int>>& bins) {
  std::vector<QaItem> out;
  int n = 0;
  for (const auto& [value, count] : bins) {
    for (int i = 0; i < count; ++i) out.push_back(item(Task::traveled_distance, n++, Meters{value}));
  }
  return out;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("bin keys") {
    CHECK(bin_of(item(Task::traveled_distance, 0, Meters{12.0})).key == "[10,15)");
    CHECK(bin_of(item(Task::traveled_distance, 0, Meters{0.0})).key == "[0,5)");
    CHECK(bin_of(item(Task::traveled_distance, 0, Meters{50.0})).key == "50+");
    CHECK(bin_of(item(Task::traveled_distance, 0, Meters{49.99})).key == "[45,50)");
    CHECK(bin_of(item(Task::traveling_speed, 0, Kmh{73.0})).key == "[70,75)");
    CHECK(bin_of(item(Task::movement_direction, 0, ClockHour{3})).key == "hour-3");
    CHECK(bin_of(item(Task::direction_timestamp, 0, TimeInterval{1.0, 3.5})).key == "[2,3)");
    CHECK(bin_of(item(Task::speed_comparison, 0, ColorChoice{"blue"})).key == "blue");
    CHECK(bin_of(item(Task::direction_comparison, 0, YesNo{false})).key == "no");
  }

  TEST_CASE("default cap is the smallest bin, clamped") {
    const auto pool = distance_pool({{1.0, 40}, {7.0, 25}, {12.0, 60}});
    CHECK(default_cap(pool, Task::traveled_distance) == 25);
    CHECK(default_cap(pool, Task::traveled_distance, 20) == 20);
    CHECK(default_cap(distance_pool({{1.0, 3}, {7.0, 25}}), Task::traveled_distance) == 10);
  }

  TEST_CASE("balance keeps min(count, cap) per bin") {
    const auto pool = distance_pool({{1.0, 40}, {7.0, 5}, {12.0, 60}, {80.0, 13}});
    const BalanceResult r = balance(pool, 12, 4);
    std::map<std::string, int> per_bin;
    std::set<std::string> ids;
    for (const auto& q : r.items) {
      ++per_bin[bin_of(q).key];
      CHECK(ids.insert(q.qa_id).second);
    }
    CHECK(per_bin["[0,5)"] == 12);
    CHECK(per_bin["[5,10)"] == 5);
    CHECK(per_bin["[10,15)"] == 12);
    CHECK(per_bin["50+"] == 12);
    CHECK(r.caps.at(Task::traveled_distance) == 12);
    CHECK(std::is_sorted(r.items.begin(), r.items.end(), dataset_order));
  }

  TEST_CASE("balance is deterministic and seed-dependent") {
    const auto pool = distance_pool({{1.0, 40}, {12.0, 60}});
    auto ids = [](const BalanceResult& r) {
      std::vector<std::string> v;
      for (const auto& q : r.items) v.push_back(q.qa_id);
      return v;
    };
    CHECK(ids(balance(pool, 10, 1)) == ids(balance(pool, 10, 1)));
    CHECK(ids(balance(pool, 10, 1)) != ids(balance(pool, 10, 2)));
  }

  TEST_CASE("balance selects uniformly within a bin") {
    // 10 items, cap 3: each item should be kept with probability 0.3
    const auto pool = distance_pool({{1.0, 10}});
    std::map<std::string, int> hits;
    const int trials = 4000;
    for (int s = 0; s < trials; ++s) {
      for (const auto& q : balance(pool, 3, static_cast<std::uint64_t>(s)).items) ++hits[q.qa_id];
    }
    REQUIRE(hits.size() == 10);
    double chi2 = 0.0;
    const double expected = trials * 0.3;
    for (const auto& [id, n] : hits) chi2 += (n - expected) * (n - expected) / expected;
    // 9 degrees of freedom, 0.999 quantile is 27.88
    CHECK(chi2 < 27.88);
  }

  TEST_CASE("per-task caps and the header") {
    auto pool = distance_pool({{1.0, 30}});
    for (int i = 0; i < 30; ++i) pool.push_back(item(Task::direction_comparison, i, YesNo{i % 3 == 0}));
    const BalanceResult r = balance(pool, {{Task::direction_comparison, 4}}, 0, 200);
    CHECK(r.caps.at(Task::direction_comparison) == 4);
    CHECK(r.caps.at(Task::traveled_distance) == 30);
    CHECK(r.items.size() == 30 + 8);
    const auto h = nlohmann::json::parse(balance_header(0, r.caps));
    CHECK(h["kind"] == "balance_header");
    CHECK(h["caps"]["direction_comparison"] == 4);
    CHECK_THROWS_AS(balance(pool, {{Task::traveled_distance, 0}}, 0), ValidationError);
  }

  TEST_CASE("assembly draws the quota round-robin across bins") {
    const auto pool = distance_pool({{1.0, 50}, {7.0, 3}, {12.0, 50}});
    AssembleOptions opt;
    opt.quota = 21;
    const Benchmark b = assemble(pools_by_task(pool), opt);
    REQUIRE(b.items.size() == 21);
    std::map<std::string, int> per_bin;
    for (const auto& q : b.items) ++per_bin[bin_of(q).key];
    CHECK(per_bin["[5,10)"] == 3);
    CHECK(per_bin["[0,5)"] == 9);
    CHECK(per_bin["[10,15)"] == 9);
    const auto h = nlohmann::json::parse(b.header);
    CHECK(h["kind"] == "benchmark_header");
    CHECK(h["counts"]["traveled_distance"] == 21);
    CHECK(h["quota"] == 21);
    CHECK(h["warnings"].empty());
  }

  TEST_CASE("short pools are listed, or taken whole when allowed") {
    auto pools = pools_by_task(distance_pool({{1.0, 5}}));
    for (int i = 0; i < 7; ++i) pools[Task::speed_comparison].push_back(item(Task::speed_comparison, i, ColorChoice{"red"}));
    AssembleOptions opt;
    opt.quota = 10;
    try {
      assemble(pools, opt);
      FAIL("expected a shortfall error");
    } catch (const ValidationError& e) {
      REQUIRE(e.issues().size() == 2);
      CHECK(e.issues()[0].find("short by 5") != std::string::npos);
      CHECK(e.issues()[1].find("short by 3") != std::string::npos);
    }
    opt.allow_short = true;
    const Benchmark b = assemble(pools, opt);
    CHECK(b.items.size() == 12);
    CHECK(b.warnings.size() == 2);
    CHECK(nlohmann::json::parse(b.header)["warnings"].size() == 2);
  }

  TEST_CASE("assembly is byte-stable for a seed") {
    const auto pool = distance_pool({{1.0, 50}, {12.0, 50}, {33.0, 50}});
    AssembleOptions opt;
    opt.quota = 40;
    opt.seed = 17;
    const Benchmark a = assemble(pools_by_task(pool), opt);
    const Benchmark b = assemble(pools_by_task(pool), opt);
    REQUIRE(a.items.size() == b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) CHECK(qa_to_json_line(a.items[i]) == qa_to_json_line(b.items[i]));
    CHECK(a.header == b.header);
  }
}
