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

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kinekit/interchange.hpp"

using namespace kinekit;
using kinekit::test::TempDir;

namespace {

SceneManifest small_manifest() {
  SceneManifest m;
  m.scene_id = "scene_a";
  m.domain = Domain::driving;
  m.duration = 1.0;
  m.frame_timestamps = {0.0, 0.5, 1.0};
  ObjectRecord o;
  o.object_id = "car_1";
  o.cls = ObjectClass::car;
  o.confidence = 0.9;
  o.source = Source::lidar;
  o.samples = {{0.0, Vec3(1.0, 2.5, 0.0)}, {0.5, Vec3(2.0, 2.5, 0.0)}, {1.0, Vec3(3.0, 2.5, 0.0)}};
  m.objects.push_back(o);
  return m;
}

// Values on the 6-decimal lattice survive the fixed-point text format exactly.
double lattice(std::mt19937_64& g, double lo, double hi) {
  std::uniform_int_distribution<long long> d(std::llround(lo * 1e6), std::llround(hi * 1e6));
  return static_cast<double>(d(g)) / 1e6;
}

SceneManifest random_manifest(std::mt19937_64& g, int idx) {
  SceneManifest m;
  m.scene_id = "rand_" + std::to_string(idx);
  m.domain = static_cast<Domain>(g() % 3);
  const int frames = 2 + static_cast<int>(g() % 39);
  m.duration = 0.5 * (frames - 1);
  for (int k = 0; k < frames; ++k) m.frame_timestamps.push_back(0.5 * k);
  const int n_obj = static_cast<int>(g() % 4);
  for (int k = 0; k < n_obj; ++k) {
    ObjectRecord o;
    o.object_id = "o" + std::to_string(k);
    o.cls = static_cast<ObjectClass>(g() % 7);
    o.source = static_cast<Source>(g() % 3);
    o.confidence = lattice(g, 0.0, 1.0);
    const int n = 1 + static_cast<int>(g() % frames);
    for (int i = 0; i < n; ++i) {
      o.samples.push_back({0.5 * i, Vec3(lattice(g, -500, 500), lattice(g, -500, 500), lattice(g, -5, 5))});
    }
    if (g() % 2) {
      std::vector<TimedBox> boxes;
      for (int i = 0; i < n; ++i) {
        const double x1 = lattice(g, 0, 100), y1 = lattice(g, 0, 100);
        boxes.push_back({0.5 * i, Box2d{x1, y1, lattice(g, x1 + 1, x1 + 50), lattice(g, y1 + 1, y1 + 50)}});
      }
      o.boxes2d = boxes;
    }
    m.objects.push_back(std::move(o));
  }
  return m;
}

bool has_issue(const ValidationError& e, const std::string& needle) {
  for (const auto& s : e.issues()) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("interchange") {
  TEST_CASE("well-formed manifest reads back with one object") {
    TempDir dir;
    write_manifest(small_manifest(), dir / "m.json");
    const SceneManifest m = read_manifest(dir / "m.json");
    REQUIRE(m.objects.size() == 1);
    CHECK(m.objects[0].samples.size() == 3);
    CHECK(m == small_manifest());
  }

  TEST_CASE("out-of-order samples name the object and index") {
    SceneManifest m = small_manifest();
    std::swap(m.objects[0].samples[1], m.objects[0].samples[2]);
    TempDir dir;
    write_text_file(dir / "bad.json", manifest_to_json(m));
    try {
      read_manifest(dir / "bad.json");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_issue(e, "car_1"));
      CHECK(has_issue(e, "samples[2]"));
    }
  }

  TEST_CASE("writing is byte-deterministic with fixed 6-decimal floats") {
    TempDir dir;
    write_manifest(small_manifest(), dir / "a.json");
    write_manifest(small_manifest(), dir / "b.json");
    const std::string a = read_text_file(dir / "a.json");
    CHECK(a == read_text_file(dir / "b.json"));
    CHECK(a.find("1.000000, 2.500000, 0.000000") != std::string::npos);
  }

  TEST_CASE("randomized manifests round-trip") {
    std::mt19937_64 g(11);
    for (int i = 0; i < 200; ++i) {
      const SceneManifest m = random_manifest(g, i);
      const SceneManifest back = manifest_from_json(manifest_to_json(m));
      REQUIRE(back == m);
    }
  }

  TEST_CASE("every failing field is listed") {
    SceneManifest m = small_manifest();
    m.duration = 25.0;
    m.objects[0].confidence = 1.5;
    ObjectRecord o = m.objects[0];
    o.object_id = "bad_box";
    o.boxes2d = std::vector<TimedBox>{{0.0, Box2d{5, 5, 4, 6}}};
    m.objects.push_back(o);
    try {
      validate(m);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_issue(e, "duration"));
      CHECK(has_issue(e, "objects[0](car_1).confidence"));
      CHECK(has_issue(e, "x1 must be < x2"));
    }
  }

  TEST_CASE("frame budget and timestamp order") {
    SceneManifest m = small_manifest();
    m.duration = 20.0;
    m.frame_timestamps.clear();
    for (int k = 0; k < 41; ++k) m.frame_timestamps.push_back(0.5 * k);
    CHECK_THROWS_AS(validate(m), ValidationError);
    m.frame_timestamps = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(validate(m), ValidationError);
  }

  TEST_CASE("scene ids must be unique across a dataset") {
    CHECK_THROWS_AS(validate_unique_ids({small_manifest(), small_manifest()}), ValidationError);
  }

  TEST_CASE("malformed JSON is a validation error naming the origin") {
    try {
      manifest_from_json("{ nope", "x.json");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(has_issue(e, "x.json"));
    }
  }

  TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(read_manifest("/nonexistent/kinekit/m.json"), IoError);
  }
}

TEST_SUITE("interchange") {
  namespace {
  QaItem sample_item(TypedAnswer a, Task t) {
    QaItem q;
    q.qa_id = "s/" + std::string(to_string(t)) + "/0000";
    q.scene_id = "s";
    q.task = t;
    q.question = "Q?";
    q.answer_text = "Answer: x";
    q.answer = std::move(a);
    q.objects = {"a"};
    q.object_colors = {{"a", "red"}};
    q.frame_timestamps = {0.0, 0.5};
    q.duration = 10.0;
    return q;
  }
  }  // namespace

  TEST_CASE("QA items round-trip bit-exactly") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> d(0.001, 300.0);
    for (int i = 0; i < 300; ++i) {
      const double v = d(g);
      std::vector<QaItem> items = {
          sample_item(Meters{v}, Task::traveled_distance), sample_item(Kmh{v}, Task::traveling_speed),
          sample_item(ClockHour{1 + i % 12}, Task::movement_direction),
          sample_item(TimeInterval{v / 100.0, v / 100.0 + 5.0}, Task::direction_timestamp),
          sample_item(ColorChoice{"green"}, Task::speed_comparison),
          sample_item(YesNo{i % 2 == 0}, Task::direction_comparison)};
      items[3].window = TimeInterval{0.0, 10.0};
      items[3].query_hour = 3;
      for (const auto& q : items) REQUIRE(qa_from_json_line(qa_to_json_line(q)) == q);
    }
  }

  TEST_CASE("answer variant must match the task") {
    CHECK_THROWS_AS(validate(sample_item(Kmh{3.0}, Task::traveled_distance)), ValidationError);
    CHECK_THROWS_AS(validate(sample_item(ClockHour{13}, Task::movement_direction)), ValidationError);
    CHECK_THROWS_AS(validate(sample_item(TimeInterval{4.0, 4.0}, Task::direction_timestamp)), ValidationError);
    CHECK_THROWS_AS(validate(sample_item(TimeInterval{4.0, 11.0}, Task::direction_timestamp)), ValidationError);
    CHECK_NOTHROW(validate(sample_item(TimeInterval{0.0, 10.0}, Task::direction_timestamp)));
  }

  TEST_CASE("datasets are written in (scene, task, qa_id) order") {
    TempDir dir;
    QaItem a = sample_item(Meters{1.0}, Task::traveled_distance);
    QaItem b = sample_item(YesNo{true}, Task::direction_comparison);
    QaItem c = a;
    c.scene_id = "r";
    c.qa_id = "r/traveled_distance/0000";
    write_dataset({b, a, c}, dir / "d.jsonl", {R"({"kind":"test_header"})"});
    const Dataset d = read_dataset(dir / "d.jsonl");
    REQUIRE(d.headers.size() == 1);
    CHECK(d.headers[0].kind == "test_header");
    REQUIRE(d.items.size() == 3);
    CHECK(d.items[0] == c);
    CHECK(d.items[1] == a);
    CHECK(d.items[2] == b);
  }

  TEST_CASE("empty dataset gives an empty file") {
    TempDir dir;
    write_dataset({}, dir / "e.jsonl");
    CHECK(read_text_file(dir / "e.jsonl").empty());
    CHECK(read_dataset(dir / "e.jsonl").items.empty());
  }

  TEST_CASE("predictions round-trip, including awkward text") {
    TempDir dir;
    const std::vector<Prediction> p = {{"a", "It moves \"fast\"\nabout 3 o'clock"}, {"b", ""}};
    write_predictions(p, dir / "p.jsonl");
    const auto back = read_predictions(dir / "p.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].response == p[0].response);
    CHECK(back[1].qa_id == "b");
  }

  TEST_CASE("typed answers have a standalone JSON form") {
    const TypedAnswer a = TimeInterval{1.5, 4.0};
    CHECK(answer_from_json_text(answer_to_json_text(a)) == a);
    CHECK_THROWS_AS(answer_from_json_text(R"({"type":"furlongs","value":2})"), ValidationError);
  }
}
