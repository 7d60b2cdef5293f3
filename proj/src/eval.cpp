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

#include "kinekit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kinekit/json_writer.hpp"
#include "kinekit/parallel.hpp"

namespace kinekit {

ScalarScore score_scalar(double y, double yhat) {
  if (!(y > 0.0) || !std::isfinite(y)) throw ValidationError("y", "ground truth must be positive");
  return {y * 0.75 <= yhat && yhat <= y * 1.25, std::abs(y - yhat)};
}

ClockScore score_clock(int y, int yhat) {
  if (y < 1 || y > 12 || yhat < 1 || yhat > 12) throw ValidationError("hour", "must lie in 1..12");
  const int d = std::abs(y - yhat);
  return {y == yhat, std::min(d, 12 - d)};
}

double interval_iou(const TimeInterval& a, const TimeInterval& b) {
  const double inter = std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = std::max(a.end, b.end) - std::min(a.start, b.start);
  return uni > 0.0 ? inter / uni : 0.0;
}

IntervalScore score_interval(const TimeInterval& y, const TimeInterval& yhat) {
  if (!(y.start < y.end) || !(yhat.start < yhat.end)) {
    throw ValidationError("interval", "start must be before end");
  }
  const double iou = interval_iou(y, yhat);
  return {iou >= 0.5, iou};
}

bool score_choice(const TypedAnswer& y, const TypedAnswer& yhat) { return y == yhat; }

ItemScore score_item(const QaItem& item, const std::optional<TypedAnswer>& prediction) {
  ItemScore s;
  s.qa_id = item.qa_id;
  s.task = item.task;
  if (!prediction) return s;
  const TypedAnswer& p = *prediction;
  if (const auto* y = std::get_if<Meters>(&item.answer)) {
    if (const auto* yh = std::get_if<Meters>(&p)) {
      const auto r = score_scalar(y->value, yh->value);
      s.parsed = true;
      s.correct = r.correct;
      s.err = r.abs_err;
    }
  } else if (const auto* y = std::get_if<Kmh>(&item.answer)) {
    if (const auto* yh = std::get_if<Kmh>(&p)) {
      const auto r = score_scalar(y->value, yh->value);
      s.parsed = true;
      s.correct = r.correct;
      s.err = r.abs_err;
    }
  } else if (const auto* y = std::get_if<ClockHour>(&item.answer)) {
    const auto* yh = std::get_if<ClockHour>(&p);
    if (yh && yh->hour >= 1 && yh->hour <= 12) {
      const auto r = score_clock(y->hour, yh->hour);
      s.parsed = true;
      s.correct = r.correct;
      s.err = r.err;
    }
  } else if (const auto* y = std::get_if<TimeInterval>(&item.answer)) {
    const auto* yh = std::get_if<TimeInterval>(&p);
    if (yh && yh->start < yh->end) {
      const auto r = score_interval(*y, *yh);
      s.parsed = true;
      s.correct = r.correct;
      s.iou = r.iou;
    }
  } else if (item.answer.index() == p.index()) {
    s.parsed = true;
    s.correct = score_choice(item.answer, p);
  }
  return s;
}

EvalReport aggregate(const std::vector<QaItem>& benchmark, const std::vector<Prediction>& predictions,
                     const Extractor& extractor, unsigned jobs) {
  EvalReport report;
  std::map<std::string, const QaItem*> by_id;
  for (const auto& q : benchmark) {
    if (!by_id.emplace(q.qa_id, &q).second) {
      throw ValidationError("benchmark", "duplicate qa_id '" + q.qa_id + "'");
    }
  }
  std::map<std::string, std::string> responses;
  std::map<std::string, std::size_t> seen;
  for (const auto& p : predictions) {
    responses[p.qa_id] = p.response;
    ++seen[p.qa_id];
  }
  for (const auto& [id, n] : seen) {
    if (n > 1) report.warnings.push_back("duplicate prediction for " + id + " (" + std::to_string(n) + "x, last kept)");
    if (!by_id.count(id)) report.warnings.push_back("prediction for unknown qa_id " + id + " ignored");
  }

  std::vector<const QaItem*> items;
  for (const auto& [id, q] : by_id) items.push_back(q);
  report.items = parallel_map(items.size(), jobs, [&](std::size_t i) {
    const QaItem& q = *items[i];
    auto it = responses.find(q.qa_id);
    std::optional<TypedAnswer> pred;
    if (it != responses.end()) pred = extractor.extract(q, it->second);
    return score_item(q, pred);
  });

  std::map<Task, TaskReport> per_task;
  std::map<Task, double> err_sum, iou_sum;
  std::map<Task, std::size_t> parsed;
  for (const auto& s : report.items) {
    TaskReport& t = per_task[s.task];
    t.task = s.task;
    ++t.n;
    if (s.correct) ++t.n_correct;
    if (!s.parsed) {
      ++t.n_unparsed;
      continue;
    }
    ++parsed[s.task];
    if (s.err) err_sum[s.task] += *s.err;
    if (s.iou) iou_sum[s.task] += *s.iou;
  }
  double acc_sum = 0.0;
  for (Task task : kAllTasks) {
    auto it = per_task.find(task);
    if (it == per_task.end()) continue;
    TaskReport t = it->second;
    t.accuracy = 100.0 * static_cast<double>(t.n_correct) / static_cast<double>(t.n);
    const std::size_t np = parsed[task];
    const bool has_err = task == Task::traveled_distance || task == Task::traveling_speed ||
                         task == Task::movement_direction;
    if (has_err && np > 0) t.mae = err_sum[task] / static_cast<double>(np);
    if (task == Task::direction_timestamp && np > 0) t.mean_iou = iou_sum[task] / static_cast<double>(np);
    acc_sum += t.accuracy;
    report.tasks.push_back(t);
  }
  if (!report.tasks.empty()) report.average_accuracy = acc_sum / static_cast<double>(report.tasks.size());
  return report;
}

std::string report_to_json(const EvalReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("tasks").begin_array();
  for (const auto& t : r.tasks) {
    w.begin_object();
    w.field("task", std::string(to_string(t.task)));
    w.field("n", static_cast<long long>(t.n));
    w.field("correct", static_cast<long long>(t.n_correct));
    w.field("unparsed", static_cast<long long>(t.n_unparsed));
    w.field("accuracy", t.accuracy);
    w.key("mae");
    t.mae ? w.value(*t.mae) : w.null();
    w.key("mean_iou");
    t.mean_iou ? w.value(*t.mean_iou) : w.null();
    w.end_object();
  }
  w.end_array();
  w.field("average_accuracy", r.average_accuracy);
  w.key("warnings").begin_array();
  for (const auto& s : r.warnings) w.value(s);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

namespace {

std::string cell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

std::string_view short_name(Task t) {
  switch (t) {
    case Task::traveled_distance: return "Distance";
    case Task::traveling_speed: return "Speed";
    case Task::movement_direction: return "Direction";
    case Task::direction_timestamp: return "Dir. time";
    case Task::distance_comparison: return "Dist. cmp";
    case Task::speed_comparison: return "Speed cmp";
    case Task::direction_comparison: return "Dir. cmp";
  }
  return "";
}

std::string_view mae_unit(Task t) {
  switch (t) {
    case Task::traveled_distance: return "MAE (m)";
    case Task::traveling_speed: return "MAE (km/h)";
    case Task::movement_direction: return "MAE (h)";
    case Task::direction_timestamp: return "mIoU";
    default: return "";
  }
}

std::string pad(std::string_view s, std::size_t w) {
  std::string out(s);
  if (out.size() < w) out.append(w - out.size(), ' ');
  return out;
}

}  // namespace

std::string report_table(const EvalReport& r, std::string_view model) {
  constexpr std::size_t kW = 11;
  std::string head1 = pad("", 12), head2 = pad("Model", 12), row = pad(model, 12);
  for (const auto& t : r.tasks) {
    const bool two = !mae_unit(t.task).empty();
    const std::size_t width = two ? 2 * kW : kW;
    head1 += "| " + pad(short_name(t.task), width);
    head2 += "| " + pad("Acc", kW) + (two ? pad(mae_unit(t.task), kW) : "");
    row += "| " + pad(cell(t.accuracy, "%.1f"), kW);
    if (two) row += pad(t.task == Task::direction_timestamp ? cell(t.mean_iou, "%.3f") : cell(t.mae, "%.2f"), kW);
  }
  head1 += "| Average";
  head2 += "| Acc";
  row += "| " + cell(r.average_accuracy, "%.1f");
  std::string out = head1 + "\n" + head2 + "\n" + std::string(head2.size(), '-') + "\n" + row + "\n";
  for (const auto& t : r.tasks) {
    if (t.n_unparsed) {
      out += std::string(to_string(t.task)) + ": " + std::to_string(t.n_unparsed) + " of " + std::to_string(t.n) +
             " responses unparsed\n";
    }
  }
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

}  // namespace kinekit
