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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinekit/interchange.hpp"

namespace kinekit {

inline constexpr double kKmPerMile = 1.609344;

/// Deterministic response grammar. `item` resolves "object A/B" for choice
/// tasks; without it those phrases are unparsed. nullopt means unparsed.
std::optional<TypedAnswer> extract_answer(Task task, std::string_view response, const QaItem* item = nullptr);

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::optional<TypedAnswer> extract(const QaItem& item, const std::string& response) const = 0;
};

class GrammarExtractor final : public Extractor {
 public:
  std::optional<TypedAnswer> extract(const QaItem& item, const std::string& response) const override;
};

/// Runs an external command once per response. The command reads
/// {"qa_id", "task", "response", "objects", "object_colors"} on stdin and
/// prints either a typed answer {"type", "value"} or null.
class CommandExtractor final : public Extractor {
 public:
  explicit CommandExtractor(std::string command) : command_(std::move(command)) {}
  std::optional<TypedAnswer> extract(const QaItem& item, const std::string& response) const override;

 private:
  std::string command_;
};

struct ScalarScore {
  bool correct;
  double abs_err;
};
/// Correct iff y * 0.75 <= yhat <= y * 1.25. Throws ValidationError for y <= 0.
ScalarScore score_scalar(double y, double yhat);

struct ClockScore {
  bool correct;
  int err;  // hours, 0..6
};
/// Throws ValidationError for hours outside 1..12.
ClockScore score_clock(int y, int yhat);

double interval_iou(const TimeInterval& a, const TimeInterval& b);
struct IntervalScore {
  bool correct;
  double iou;
};
/// Correct iff IoU >= 0.5. Throws ValidationError for a degenerate interval.
IntervalScore score_interval(const TimeInterval& y, const TimeInterval& yhat);

bool score_choice(const TypedAnswer& y, const TypedAnswer& yhat);

struct ItemScore {
  std::string qa_id;
  Task task;
  bool parsed = false;
  bool correct = false;
  std::optional<double> err;  // absolute error in the task unit
  std::optional<double> iou;
};

struct TaskReport {
  Task task;
  std::size_t n = 0;
  std::size_t n_correct = 0;
  std::size_t n_unparsed = 0;
  double accuracy = 0.0;  // percent
  std::optional<double> mae;
  std::optional<double> mean_iou;
};

struct EvalReport {
  std::vector<TaskReport> tasks;  // benchmark column order, present tasks only
  double average_accuracy = 0.0;  // unweighted mean over present tasks
  std::vector<std::string> warnings;
  std::vector<ItemScore> items;   // qa_id order
};

/// Scores one item. Unparsed or out-of-range predictions score incorrect.
ItemScore score_item(const QaItem& item, const std::optional<TypedAnswer>& prediction);

/// Missing predictions count as unparsed; a duplicate qa_id keeps the last
/// response and adds a warning. Results do not depend on prediction order
/// or on `jobs`.
EvalReport aggregate(const std::vector<QaItem>& benchmark, const std::vector<Prediction>& predictions,
                     const Extractor& extractor, unsigned jobs = 1);

std::string report_to_json(const EvalReport& r);
/// One row per model, one column group per task, average last.
std::string report_table(const EvalReport& r, std::string_view model = "model");

}  // namespace kinekit
