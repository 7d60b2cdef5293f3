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

#include <json.hpp>

#include "helpers.hpp"
#include "kinekit/eval.hpp"

using namespace kinekit;

namespace {

QaItem item(const std::string& id, Task t, TypedAnswer a) {
  QaItem q;
  q.qa_id = id;
  q.scene_id = "s";
  q.task = t;
  q.question = "q";
  q.answer_text = "Answer: x";
  q.answer = std::move(a);
  q.objects = {"o1", "o2"};
  q.object_colors = {{"o1", "red"}, {"o2", "blue"}};
  q.frame_timestamps = {0.0};
  q.duration = 20.0;
  return q;
}

double meters(const std::optional<TypedAnswer>& a) { return std::get<Meters>(a.value()).value; }
double kmh(const std::optional<TypedAnswer>& a) { return std::get<Kmh>(a.value()).value; }

}  // namespace

TEST_SUITE("extract") {
  TEST_CASE("distance responses") {
    const Task t = Task::traveled_distance;
    CHECK(meters(extract_answer(t, "Answer: 12.5 meters")) == 12.5);
    CHECK(meters(extract_answer(t, "about 3 km")) == 3000.0);
    CHECK(meters(extract_answer(t, "It moved 2 miles")) == doctest::Approx(3218.688));
    CHECK(meters(extract_answer(t, "At 30 km/h for a while it went 40 m")) == 40.0);
    CHECK(meters(extract_answer(t, "Roughly 17")) == 17.0);
    CHECK_FALSE(extract_answer(t, "I cannot tell.").has_value());
  }

  TEST_CASE("speed responses") {
    const Task t = Task::traveling_speed;
    CHECK(kmh(extract_answer(t, "Answer: 36.0 km/h")) == 36.0);
    CHECK(kmh(extract_answer(t, "10 m/s")) == doctest::Approx(36.0));
    CHECK(kmh(extract_answer(t, "It goes 20 mph")) == doctest::Approx(32.18688));
    CHECK(kmh(extract_answer(t, "45 kph")) == 45.0);
    CHECK_FALSE(extract_answer(t, "fast").has_value());
  }

  TEST_CASE("clock responses") {
    const Task t = Task::movement_direction;
    CHECK(std::get<ClockHour>(extract_answer(t, "Answer: 3 o'clock").value()).hour == 3);
    CHECK(std::get<ClockHour>(extract_answer(t, "It heads to 11.").value()).hour == 11);
    CHECK_FALSE(extract_answer(t, "13 o'clock").has_value());
    CHECK_FALSE(extract_answer(t, "about 2.5").has_value());
    CHECK_FALSE(extract_answer(t, "no idea").has_value());
  }

  TEST_CASE("interval responses") {
    const Task t = Task::direction_timestamp;
    CHECK(std::get<TimeInterval>(extract_answer(t, "Answer: from 2.5 to 6.0 seconds").value()) ==
          TimeInterval{2.5, 6.0});
    CHECK(std::get<TimeInterval>(extract_answer(t, "from 1s until 4s").value()) == TimeInterval{1.0, 4.0});
    CHECK(std::get<TimeInterval>(extract_answer(t, "During 3-7 s").value()) == TimeInterval{3.0, 7.0});
    CHECK_FALSE(extract_answer(t, "from 5 to 5 seconds").has_value());
    CHECK_FALSE(extract_answer(t, "always").has_value());
  }

  TEST_CASE("choice and boolean responses") {
    const QaItem q = item("x", Task::distance_comparison, ColorChoice{"red"});
    CHECK(std::get<ColorChoice>(extract_answer(q.task, "The blue one, not red.").value()).color == "blue");
    CHECK(std::get<ColorChoice>(extract_answer(q.task, "Object B travels farther", &q).value()).color == "blue");
    CHECK_FALSE(extract_answer(q.task, "Object B travels farther").has_value());
    const Task b = Task::direction_comparison;
    CHECK(std::get<YesNo>(extract_answer(b, "Yes, they do.").value()).value);
    CHECK_FALSE(std::get<YesNo>(extract_answer(b, "No. Yes would be wrong.").value()).value);
    CHECK_FALSE(extract_answer(b, "maybe").has_value());
  }

  TEST_CASE("external extractor command") {
    const QaItem q = item("s/traveled_distance/0000", Task::traveled_distance, Meters{10.0});
    const CommandExtractor fixed(R"(sh -c 'cat > /dev/null; echo "{\"type\":\"meters\",\"value\":4.5}"')");
    CHECK(meters(fixed.extract(q, "whatever")) == 4.5);
    const CommandExtractor none("sh -c 'cat > /dev/null; echo null'");
    CHECK_FALSE(none.extract(q, "x").has_value());
    const CommandExtractor wrong(R"(sh -c 'cat > /dev/null; echo "{\"type\":\"kmh\",\"value\":4.5}"')");
    CHECK_FALSE(wrong.extract(q, "x").has_value());
    const CommandExtractor failing("sh -c 'cat > /dev/null; exit 3'");
    CHECK_THROWS_AS(failing.extract(q, "x"), IoError);
    // the request on stdin carries the response text
    const CommandExtractor echo(
        R"(sh -c 'grep -q "\"response\":\"seven\"" && echo "{\"type\":\"meters\",\"value\":7}" || echo null')");
    CHECK(meters(echo.extract(q, "seven")) == 7.0);
    CHECK_FALSE(echo.extract(q, "eight").has_value());
  }
}

TEST_SUITE("eval") {
  TEST_CASE("scalar band edges") {
    CHECK(score_scalar(10.0, 7.5).correct);
    CHECK(score_scalar(10.0, 12.5).correct);
    CHECK_FALSE(score_scalar(10.0, 7.49).correct);
    CHECK_FALSE(score_scalar(10.0, 12.51).correct);
    CHECK(score_scalar(10.0, 4.0).abs_err == 6.0);
    CHECK_THROWS_AS(score_scalar(0.0, 1.0), ValidationError);
  }

  TEST_CASE("clock error wraps around") {
    CHECK(score_clock(12, 1).err == 1);
    CHECK(score_clock(2, 11).err == 3);
    CHECK(score_clock(3, 9).err == 6);
    CHECK(score_clock(5, 5).correct);
    CHECK_FALSE(score_clock(5, 6).correct);
    CHECK_THROWS_AS(score_clock(0, 5), ValidationError);
  }

  TEST_CASE("interval IoU") {
    CHECK(interval_iou({0, 4}, {2, 6}) == doctest::Approx(2.0 / 6.0));
    CHECK(interval_iou({0, 4}, {0, 4}) == 1.0);
    CHECK(interval_iou({0, 1}, {2, 3}) == 0.0);
    CHECK(score_interval({0, 4}, {0, 2}).correct);
    CHECK_FALSE(score_interval({0, 4}, {0, 1.9}).correct);
    CHECK_THROWS_AS(score_interval({1, 1}, {0, 2}), ValidationError);
  }

  TEST_CASE("choice scoring") {
    CHECK(score_choice(ColorChoice{"red"}, ColorChoice{"red"}));
    CHECK_FALSE(score_choice(ColorChoice{"red"}, ColorChoice{"blue"}));
    CHECK(score_choice(YesNo{true}, YesNo{true}));
    CHECK_FALSE(score_choice(YesNo{true}, ColorChoice{"red"}));
  }

  TEST_CASE("aggregation over a small benchmark") {
    const std::vector<QaItem> bench = {
        item("a", Task::traveled_distance, Meters{10.0}), item("b", Task::traveled_distance, Meters{20.0}),
        item("c", Task::movement_direction, ClockHour{3}), item("d", Task::direction_timestamp, TimeInterval{0, 4}),
        item("e", Task::speed_comparison, ColorChoice{"red"})};
    const std::vector<Prediction> preds = {{"a", "11 meters"},   {"b", "no clue"},  {"c", "4 o'clock"},
                                           {"d", "from 1 to 4"}, {"e", "red"},      {"e", "blue"},
                                           {"zz", "stray"}};
    const EvalReport r = aggregate(bench, preds, GrammarExtractor{});
    REQUIRE(r.tasks.size() == 4);
    const TaskReport& dist = r.tasks[0];
    CHECK(dist.task == Task::traveled_distance);
    CHECK(dist.n == 2);
    CHECK(dist.n_correct == 1);
    CHECK(dist.n_unparsed == 1);
    CHECK(dist.accuracy == doctest::Approx(50.0));
    CHECK(dist.mae.value() == doctest::Approx(1.0));
    CHECK(r.tasks[1].accuracy == 0.0);
    CHECK(r.tasks[1].mae.value() == 1.0);
    CHECK(r.tasks[2].accuracy == 100.0);
    CHECK(r.tasks[2].mean_iou.value() == doctest::Approx(0.75));
    // duplicate keeps the last response
    CHECK(r.tasks[3].accuracy == 0.0);
    CHECK(r.average_accuracy == doctest::Approx(37.5));
    CHECK(r.warnings.size() == 2);
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["average_accuracy"].get<double>() == doctest::Approx(37.5));
    CHECK(report_table(r, "m").find("m") != std::string::npos);
  }

  TEST_CASE("aggregation is independent of prediction order and jobs") {
    std::vector<QaItem> bench;
    std::vector<Prediction> preds;
    for (int i = 0; i < 60; ++i) {
      const std::string id = "q" + std::to_string(100 + i);
      bench.push_back(item(id, Task::traveled_distance, Meters{10.0 + i}));
      preds.push_back({id, std::to_string(8 + i) + " m"});
    }
    const EvalReport a = aggregate(bench, preds, GrammarExtractor{}, 1);
    std::reverse(preds.begin(), preds.end());
    const EvalReport b = aggregate(bench, preds, GrammarExtractor{}, 4);
    CHECK(report_to_json(a) == report_to_json(b));
  }

  TEST_CASE("duplicate benchmark ids are rejected") {
    const std::vector<QaItem> bench = {item("a", Task::traveled_distance, Meters{1.0}),
                                       item("a", Task::traveled_distance, Meters{2.0})};
    CHECK_THROWS_AS(aggregate(bench, {}, GrammarExtractor{}), ValidationError);
  }
}
