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

#include "kinekit/qagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>

#include "kinekit/rng.hpp"

namespace kinekit {

namespace {

std::vector<QaTemplate> make_templates() {
  using T = Task;
  return {
      {T::traveled_distance, "How far did the [COLOR] object travel in the video?", "Answer: [VALUE] meters"},
      {T::traveled_distance, "What total distance did the [COLOR] object cover between [START] and [END] seconds?",
       "Answer: [VALUE] meters"},
      {T::traveled_distance, "Measure the path length of the [COLOR] object from [START] s to [END] s.",
       "Answer: [VALUE] meters"},
      {T::traveled_distance, "How many meters does the [COLOR] object move over the whole video?",
       "Answer: [VALUE] meters"},

      {T::traveling_speed, "What is the average speed of the [COLOR] object in the video?", "Answer: [VALUE] km/h"},
      {T::traveling_speed, "How fast does the [COLOR] object move on average between [START] and [END] seconds?",
       "Answer: [VALUE] km/h"},
      {T::traveling_speed, "Estimate the mean speed of the [COLOR] object from [START] s to [END] s.",
       "Answer: [VALUE] km/h"},

      {T::movement_direction,
       "Taking the initial heading of the [COLOR] object as 12 o'clock, which clock direction is it moving in at the "
       "end of the video?",
       "Answer: [VALUE] o'clock"},
      {T::movement_direction,
       "If the [COLOR] object starts out heading toward 12 o'clock, in which o'clock direction does it move at the end?",
       "Answer: [VALUE] o'clock"},
      {T::movement_direction,
       "Relative to its first heading (12 o'clock), what is the final movement direction of the [COLOR] object?",
       "Answer: [VALUE] o'clock"},

      {T::direction_timestamp,
       "Between which timestamps does the [COLOR] object move in the [DIRECTION] o'clock direction?",
       "Answer: [VALUE]"},
      {T::direction_timestamp,
       "Its initial heading being 12 o'clock, when is the [COLOR] object heading toward [DIRECTION] o'clock?",
       "Answer: [VALUE]"},
      {T::direction_timestamp, "During which period does the [COLOR] object travel toward [DIRECTION] o'clock?",
       "Answer: [VALUE]"},

      {T::distance_comparison,
       "Which object covers a longer distance in the video, the [COLOR_A] one or the [COLOR_B] one?",
       "Answer: [VALUE]"},
      {T::distance_comparison, "Does the [COLOR_A] object or the [COLOR_B] object travel farther?", "Answer: [VALUE]"},
      {T::distance_comparison, "Between the [COLOR_A] and the [COLOR_B] object, which one moves a greater distance?",
       "Answer: [VALUE]"},

      {T::speed_comparison, "Which object moves faster on average, the [COLOR_A] one or the [COLOR_B] one?",
       "Answer: [VALUE]"},
      {T::speed_comparison, "Is the [COLOR_A] object or the [COLOR_B] object quicker over the video?",
       "Answer: [VALUE]"},
      {T::speed_comparison, "Between the [COLOR_A] and the [COLOR_B] object, which has the higher average speed?",
       "Answer: [VALUE]"},

      {T::direction_comparison, "Are the [COLOR_A] object and the [COLOR_B] object heading the same way?",
       "Answer: [VALUE]"},
      {T::direction_comparison, "Does the [COLOR_A] object move in the same direction as the [COLOR_B] object?",
       "Answer: [VALUE]"},
      {T::direction_comparison, "Do the [COLOR_A] and [COLOR_B] objects travel in a common direction?",
       "Answer: [VALUE]"},
  };
}

bool has(std::string_view pattern, std::string_view ph) { return pattern.find(ph) != std::string_view::npos; }

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

struct Track {
  const ObjectRecord* record;
  std::string color;
  Trajectory traj;
};

/// Grid windows [s, e] inside span with e - s >= min_len, in lexicographic order.
std::vector<TimeInterval> grid_windows(const Trajectory& t, double min_len) {
  std::vector<TimeInterval> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      if (t.time(j) - t.time(i) >= min_len - 1e-9) out.push_back({t.time(i), t.time(j)});
    }
  }
  return out;
}

std::optional<TimeInterval> common_span(const Trajectory& a, const Trajectory& b) {
  const double s = std::max(a.start_time(), b.start_time());
  const double e = std::min(a.end_time(), b.end_time());
  if (!(s < e)) return std::nullopt;
  return TimeInterval{s, e};
}

class Builder {
 public:
  Builder(const SceneManifest& m, Task task, std::uint64_t seed)
      : m_(m), task_(task), rng_(derive_seed(seed, m.scene_id + "/" + std::string(to_string(task)))) {}

  Rng& rng() { return rng_; }

  const QaTemplate& pick(bool allow_window) {
    std::vector<const QaTemplate*> pool;
    for (const auto& t : templates(task_)) {
      if (allow_window || !has(t.question_pattern, "[START]")) pool.push_back(&t);
    }
    return *pool[rng_.index(pool.size())];
  }

  void emit(const QaTemplate& tpl, std::vector<const Track*> objs, TypedAnswer answer, std::string value_text,
            std::optional<TimeInterval> window, std::optional<int> hour) {
    QaItem q;
    char id[16];
    std::snprintf(id, sizeof(id), "%04d", counter_++);
    q.qa_id = m_.scene_id + "/" + std::string(to_string(task_)) + "/" + id;
    q.scene_id = m_.scene_id;
    q.task = task_;
    std::string question = tpl.question_pattern;
    std::vector<std::string> colors;
    for (const Track* o : objs) {
      q.objects.push_back(o->record->object_id);
      q.object_colors[o->record->object_id] = o->color;
      colors.push_back(o->color);
    }
    if (objs.size() == 1) {
      question = replace_all(question, "[COLOR]", objs[0]->color);
    } else {
      question = replace_all(question, "[COLOR_A]", objs[0]->color);
      question = replace_all(question, "[COLOR_B]", objs[1]->color);
    }
    if (window && has(tpl.question_pattern, "[START]")) {
      question = replace_all(question, "[START]", format_1dp(window->start));
      question = replace_all(question, "[END]", format_1dp(window->end));
    }
    if (hour) question = replace_all(question, "[DIRECTION]", std::to_string(*hour));
    q.question = common_prompt(m_.duration, m_.frame_timestamps, colors) + " " + question;
    q.answer_text = replace_all(tpl.answer_pattern, "[VALUE]", value_text);
    q.answer = std::move(answer);
    q.frame_timestamps = m_.frame_timestamps;
    q.duration = m_.duration;
    q.window = window;
    q.query_hour = hour;
    validate(q);
    items_.push_back(std::move(q));
  }

  std::vector<QaItem> take() { return std::move(items_); }

 private:
  const SceneManifest& m_;
  Task task_;
  Rng rng_;
  int counter_ = 0;
  std::vector<QaItem> items_;
};

void gen_scalar(Builder& b, const Track& o, const GenConfig& cfg, bool is_speed) {
  const std::vector<TimeInterval> windows = grid_windows(o.traj, cfg.min_window);
  const QaTemplate& tpl = b.pick(!windows.empty());
  TimeInterval w = o.traj.span();
  if (has(tpl.question_pattern, "[START]")) w = windows[b.rng().index(windows.size())];
  const double d = traveled_distance(o.traj, w.start, w.end);
  if (d < cfg.min_distance) return;
  if (is_speed) {
    const double v = speed(o.traj, w.start, w.end);
    b.emit(tpl, {&o}, Kmh{v}, format_1dp(v), w, std::nullopt);
  } else {
    b.emit(tpl, {&o}, Meters{d}, format_1dp(d), w, std::nullopt);
  }
}

void gen_direction(Builder& b, const Track& o, const KinematicsConfig& kc) {
  const QaTemplate& tpl = b.pick(false);
  try {
    reference_direction(o.traj, kc);
  } catch (const KinematicsError&) {
    return;
  }
  const std::vector<DirectionLabel> labels = step_labels(o.traj, kc);
  if (labels.empty() || labels.back().is_stationary()) return;
  const int hour = labels.back().hour;
  b.emit(tpl, {&o}, ClockHour{hour}, std::to_string(hour), o.traj.span(), std::nullopt);
}

void gen_timestamp(Builder& b, const Track& o, const KinematicsConfig& kc) {
  const QaTemplate& tpl = b.pick(false);
  try {
    reference_direction(o.traj, kc);
  } catch (const KinematicsError&) {
    return;
  }
  std::set<int> visited;
  for (const auto& l : step_labels(o.traj, kc)) {
    if (!l.is_stationary()) visited.insert(l.hour);
  }
  if (visited.empty()) return;
  const std::vector<int> hours(visited.begin(), visited.end());
  const int hour = hours[b.rng().index(hours.size())];
  const std::vector<TimeInterval> iv = direction_intervals(o.traj, hour, kc);
  const auto best = longest_interval(iv);
  if (!best) return;
  b.emit(tpl, {&o}, *best, "from " + format_1dp(best->start) + " to " + format_1dp(best->end) + " seconds",
         o.traj.span(), hour);
}

void gen_pair(Builder& b, Task task, const Track& x, const Track& y, const GenConfig& cfg) {
  const QaTemplate& tpl = b.pick(false);
  const bool swap = b.rng().index(2) == 1;
  const Track& a = swap ? y : x;
  const Track& c = swap ? x : y;
  const auto span = common_span(a.traj, c.traj);
  if (!span || span->length() < cfg.min_window - 1e-9) return;
  const KinematicsConfig& kc = cfg.kinematics;
  if (task == Task::direction_comparison) {
    DirectionVerdict v;
    try {
      v = same_direction(a.traj, c.traj, *span, kc);
    } catch (const KinematicsError&) {
      return;
    }
    if (v == DirectionVerdict::ambiguous) return;
    const bool same = v == DirectionVerdict::same;
    b.emit(tpl, {&a, &c}, YesNo{same}, same ? "yes" : "no", *span, std::nullopt);
    return;
  }
  const Verdict v = task == Task::distance_comparison ? compare_distance(a.traj, c.traj, *span, kc)
                                                       : compare_speed(a.traj, c.traj, *span, kc);
  if (v == Verdict::ambiguous) return;
  const std::string& color = v == Verdict::a ? a.color : c.color;
  b.emit(tpl, {&a, &c}, ColorChoice{color}, color, *span, std::nullopt);
}

}  // namespace

const std::vector<QaTemplate>& templates(Task task) {
  static const std::map<Task, std::vector<QaTemplate>> by_task = [] {
    std::map<Task, std::vector<QaTemplate>> m;
    for (auto& t : make_templates()) m[t.task].push_back(t);
    return m;
  }();
  return by_task.at(task);
}

std::vector<std::string> allowed_placeholders(Task task) {
  switch (task) {
    case Task::traveled_distance:
    case Task::traveling_speed:
      return {"[COLOR]", "[START]", "[END]"};
    case Task::movement_direction:
      return {"[COLOR]"};
    case Task::direction_timestamp:
      return {"[COLOR]", "[DIRECTION]"};
    case Task::distance_comparison:
    case Task::speed_comparison:
    case Task::direction_comparison:
      return {"[COLOR_A]", "[COLOR_B]"};
  }
  return {};
}

std::vector<std::string> required_placeholders(Task task) {
  switch (task) {
    case Task::traveled_distance:
    case Task::traveling_speed:
    case Task::movement_direction:
      return {"[COLOR]"};
    case Task::direction_timestamp:
      return {"[COLOR]", "[DIRECTION]"};
    default:
      return {"[COLOR_A]", "[COLOR_B]"};
  }
}

std::vector<std::string> placeholders_in(std::string_view pattern) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = pattern.find('[', pos)) != std::string_view::npos) {
    const std::size_t close = pattern.find(']', pos);
    if (close == std::string_view::npos) break;
    std::string ph(pattern.substr(pos, close - pos + 1));
    if (std::find(out.begin(), out.end(), ph) == out.end()) out.push_back(std::move(ph));
    pos = close + 1;
  }
  return out;
}

Rgb palette_rgb(std::string_view color) {
  static const std::map<std::string_view, Rgb> rgb = {
      {"red", {255, 0, 0}},      {"green", {0, 255, 0}},     {"blue", {0, 0, 255}},
      {"yellow", {255, 255, 0}}, {"magenta", {255, 0, 255}}, {"cyan", {0, 255, 255}}};
  auto it = rgb.find(color);
  if (it == rgb.end()) throw ValidationError("color", "'" + std::string(color) + "' is not a palette color");
  return it->second;
}

std::map<std::string, std::string> assign_colors(const SceneManifest& m) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < m.objects.size() && i < kPalette.size(); ++i) {
    out[m.objects[i].object_id] = std::string(kPalette[i]);
  }
  return out;
}

std::string format_1dp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  std::string s(buf);
  if (s == "-0.0") s = "0.0";
  return s;
}

std::string common_prompt(double duration, std::span<const double> timestamps,
                          std::span<const std::string> colors) {
  if (colors.empty()) throw ValidationError("common_prompt", "no annotated objects");
  std::string ts;
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    if (i) ts += ", ";
    ts += format_1dp(timestamps[i]);
  }
  std::string cs;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i) cs += " and ";
    cs += colors[i];
  }
  return "The video lasts for " + format_1dp(duration) + " seconds, and " + std::to_string(timestamps.size()) +
         " frames are uniformly sampled from it. These frames are located at " + ts + " seconds. There are " +
         std::to_string(colors.size()) + " objects annotated with " + cs + " bounding boxes in the video.";
}

std::vector<QaItem> generate(const SceneManifest& m, std::span<const Task> tasks, std::uint64_t seed,
                             const GenConfig& cfg) {
  validate(m);
  const auto colors = assign_colors(m);
  std::vector<Track> tracks;
  for (const auto& o : m.objects) {
    auto c = colors.find(o.object_id);
    if (c == colors.end()) continue;
    try {
      tracks.push_back(Track{&o, c->second, resample(o, cfg.kinematics)});
    } catch (const KinematicsError&) {
      // objects without a usable grid trajectory are not asked about
    }
  }

  std::set<Task> wanted(tasks.begin(), tasks.end());
  std::vector<QaItem> out;
  for (Task task : kAllTasks) {
    if (!wanted.count(task)) continue;
    if (is_direction_task(task) && m.domain == Domain::sports) continue;
    Builder b(m, task, seed);
    switch (task) {
      case Task::traveled_distance:
      case Task::traveling_speed:
        for (const auto& t : tracks) gen_scalar(b, t, cfg, task == Task::traveling_speed);
        break;
      case Task::movement_direction:
        for (const auto& t : tracks) gen_direction(b, t, cfg.kinematics);
        break;
      case Task::direction_timestamp:
        for (const auto& t : tracks) gen_timestamp(b, t, cfg.kinematics);
        break;
      default:
        for (std::size_t i = 0; i < tracks.size(); ++i) {
          for (std::size_t j = i + 1; j < tracks.size(); ++j) gen_pair(b, task, tracks[i], tracks[j], cfg);
        }
        break;
    }
    for (auto& q : b.take()) out.push_back(std::move(q));
  }
  std::sort(out.begin(), out.end(), dataset_order);
  return out;
}

}  // namespace kinekit
