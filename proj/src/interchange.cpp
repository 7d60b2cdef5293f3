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

#include "kinekit/interchange.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kinekit/json_writer.hpp"

namespace kinekit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
        std::string msg = "validation failed";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

ValidationError::ValidationError(const std::string& path, const std::string& what)
    : ValidationError(std::vector<std::string>{path + ": " + what}) {}

// ---------------------------------------------------------------------------
// enum names

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 3> kDomainNames = {"driving", "sports", "general"};
constexpr std::array<std::string_view, 7> kClassNames = {"car",     "bus",    "truck", "motorcycle",
                                                         "bicycle", "person", "other"};
constexpr std::array<std::string_view, 3> kSourceNames = {"lidar", "vio_slam", "pseudo"};
constexpr std::array<std::string_view, 7> kTaskNames = {
    "traveled_distance",   "traveling_speed",  "movement_direction",  "direction_timestamp",
    "distance_comparison", "speed_comparison", "direction_comparison"};

}  // namespace

std::string_view to_string(Domain d) { return kDomainNames[static_cast<std::size_t>(d)]; }
std::string_view to_string(ObjectClass c) { return kClassNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Source s) { return kSourceNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Task t) { return kTaskNames[static_cast<std::size_t>(t)]; }

std::optional<Domain> parse_domain(std::string_view s) { return lookup<Domain>(s, kDomainNames); }
std::optional<ObjectClass> parse_object_class(std::string_view s) {
  return lookup<ObjectClass>(s, kClassNames);
}
std::optional<Source> parse_source(std::string_view s) { return lookup<Source>(s, kSourceNames); }
std::optional<Task> parse_task(std::string_view s) { return lookup<Task>(s, kTaskNames); }

// ---------------------------------------------------------------------------
// file helpers

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// manifest validation

const ObjectRecord* SceneManifest::find(std::string_view object_id) const {
  for (const auto& o : objects) {
    if (o.object_id == object_id) return &o;
  }
  return nullptr;
}

std::vector<std::string> manifest_issues(const SceneManifest& m) {
  IssueList issues;
  if (m.scene_id.empty()) issues.add("scene_id", "must be non-empty");
  if (!std::isfinite(m.duration) || m.duration <= 0.0) {
    issues.add("duration", "must be > 0");
  } else if (m.duration > kMaxDuration) {
    issues.add("duration", "exceeds the 20 s clip budget");
  }
  if (m.frame_timestamps.size() > kMaxFrames) {
    issues.add("frame_timestamps", "more than 40 frames (" +
                                       std::to_string(m.frame_timestamps.size()) + ")");
  }
  for (std::size_t i = 0; i < m.frame_timestamps.size(); ++i) {
    const double t = m.frame_timestamps[i];
    const std::string path = "frame_timestamps[" + std::to_string(i) + "]";
    if (!std::isfinite(t) || t < 0.0 || t > m.duration) {
      issues.add(path, "outside [0, duration]");
    }
    if (i > 0 && !(t > m.frame_timestamps[i - 1])) issues.add(path, "not strictly increasing");
  }

  std::set<std::string> seen;
  for (std::size_t k = 0; k < m.objects.size(); ++k) {
    const ObjectRecord& o = m.objects[k];
    const std::string base = "objects[" + std::to_string(k) + "](" + o.object_id + ")";
    if (o.object_id.empty()) issues.add(base + ".object_id", "must be non-empty");
    if (!seen.insert(o.object_id).second) issues.add(base + ".object_id", "duplicate object_id");
    if (!(o.confidence >= 0.0 && o.confidence <= 1.0)) {
      issues.add(base + ".confidence", "must lie in [0, 1]");
    }
    if (o.samples.empty()) issues.add(base + ".samples", "must be non-empty");
    for (std::size_t i = 0; i < o.samples.size(); ++i) {
      const TimedPoint& s = o.samples[i];
      const std::string path = base + ".samples[" + std::to_string(i) + "]";
      if (!std::isfinite(s.t) || s.t < 0.0 || s.t > m.duration) {
        issues.add(path + ".t", "outside [0, duration]");
      }
      if (i > 0 && !(s.t > o.samples[i - 1].t)) {
        issues.add(path + ".t", "samples out of time order or duplicated");
      }
      if (!s.center.allFinite()) issues.add(path + ".center", "non-finite component");
    }
    if (o.boxes2d) {
      for (std::size_t i = 0; i < o.boxes2d->size(); ++i) {
        const TimedBox& b = (*o.boxes2d)[i];
        const std::string path = base + ".boxes2d[" + std::to_string(i) + "]";
        if (!std::isfinite(b.t) || b.t < 0.0 || b.t > m.duration) {
          issues.add(path + ".t", "outside [0, duration]");
        }
        if (!(b.box.x1 < b.box.x2)) issues.add(path + ".box", "x1 must be < x2");
        if (!(b.box.y1 < b.box.y2)) issues.add(path + ".box", "y1 must be < y2");
      }
    }
  }
  return issues.items();
}

void validate(const SceneManifest& m) {
  auto issues = manifest_issues(m);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

void validate_unique_ids(const std::vector<SceneManifest>& ms) {
  std::set<std::string> seen;
  IssueList issues;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!seen.insert(ms[i].scene_id).second) {
      issues.add("manifests[" + std::to_string(i) + "].scene_id",
                 "duplicate scene_id " + ms[i].scene_id);
    }
  }
  issues.throw_if_any();
}

// ---------------------------------------------------------------------------
// manifest text format

std::string manifest_to_json(const SceneManifest& m) {
  JsonWriter w;
  w.begin_object();
  w.field("scene_id", m.scene_id);
  w.field("domain", to_string(m.domain));
  w.field("duration", m.duration);
  w.key("frame_timestamps").begin_array(true);
  for (double t : m.frame_timestamps) w.value(t);
  w.end_array();
  w.key("objects").begin_array();
  for (const auto& o : m.objects) {
    w.begin_object();
    w.field("object_id", o.object_id);
    w.field("class", to_string(o.cls));
    w.field("confidence", o.confidence);
    w.field("source", to_string(o.source));
    w.key("samples").begin_array();
    for (const auto& s : o.samples) {
      w.begin_object();
      w.field("t", s.t);
      w.key("center").begin_array(true);
      w.value(s.center.x()).value(s.center.y()).value(s.center.z());
      w.end_array();
      w.end_object();
    }
    w.end_array();
    if (o.boxes2d) {
      w.key("boxes2d").begin_array();
      for (const auto& b : *o.boxes2d) {
        w.begin_object();
        w.field("t", b.t);
        w.key("box").begin_array(true);
        w.value(b.box.x1).value(b.box.y1).value(b.box.x2).value(b.box.y2);
        w.end_array();
        w.end_object();
      }
      w.end_array();
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

namespace {

/// Path-tracking accessors over a parsed document. Collects every problem
/// instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(IssueList& issues) : issues_(issues) {}

  const json* member(const json& obj, const std::string& path, const char* key,
                     bool required = true) {
    if (!obj.is_object()) {
      issues_.add(path, "expected object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issues_.add(join(path, key), "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::string string(const json& obj, const std::string& path, const char* key) {
    const json* v = member(obj, path, key);
    if (!v) return {};
    if (!v->is_string()) {
      issues_.add(join(path, key), "expected string");
      return {};
    }
    return v->get<std::string>();
  }

  double number(const json* v, const std::string& path) {
    if (!v) return 0.0;
    if (!v->is_number()) {
      issues_.add(path, "expected number");
      return 0.0;
    }
    return v->get<double>();
  }

  double number(const json& obj, const std::string& path, const char* key) {
    return number(member(obj, path, key), join(path, key));
  }

  const json* array(const json& obj, const std::string& path, const char* key,
                    bool required = true) {
    const json* v = member(obj, path, key, required);
    if (v && !v->is_array()) {
      issues_.add(join(path, key), "expected array");
      return nullptr;
    }
    return v;
  }

  template <std::size_t N>
  std::array<double, N> fixed_array(const json& obj, const std::string& path, const char* key) {
    std::array<double, N> out{};
    const json* v = array(obj, path, key);
    if (!v) return out;
    if (v->size() != N) {
      issues_.add(join(path, key), "expected " + std::to_string(N) + " numbers");
      return out;
    }
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = number(&(*v)[i], join(path, key) + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  static std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
  }

 private:
  IssueList& issues_;
};

json parse_or_throw(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

SceneManifest manifest_from_json(const std::string& text, const std::string& origin) {
  const json doc = parse_or_throw(text, origin);
  IssueList issues;
  Reader r(issues);
  SceneManifest m;

  m.scene_id = r.string(doc, "", "scene_id");
  const std::string domain = r.string(doc, "", "domain");
  if (auto d = parse_domain(domain)) {
    m.domain = *d;
  } else if (!domain.empty()) {
    issues.add("domain", "unknown domain '" + domain + "'");
  }
  m.duration = r.number(doc, "", "duration");
  if (const json* ts = r.array(doc, "", "frame_timestamps")) {
    for (std::size_t i = 0; i < ts->size(); ++i) {
      m.frame_timestamps.push_back(
          r.number(&(*ts)[i], "frame_timestamps[" + std::to_string(i) + "]"));
    }
  }
  if (const json* objs = r.array(doc, "", "objects")) {
    for (std::size_t k = 0; k < objs->size(); ++k) {
      const json& jo = (*objs)[k];
      const std::string base = "objects[" + std::to_string(k) + "]";
      ObjectRecord o;
      o.object_id = r.string(jo, base, "object_id");
      const std::string cls = r.string(jo, base, "class");
      if (auto c = parse_object_class(cls)) {
        o.cls = *c;
      } else if (!cls.empty()) {
        issues.add(base + ".class", "unknown class '" + cls + "'");
      }
      o.confidence = r.number(jo, base, "confidence");
      const std::string src = r.string(jo, base, "source");
      if (auto s = parse_source(src)) {
        o.source = *s;
      } else if (!src.empty()) {
        issues.add(base + ".source", "unknown source '" + src + "'");
      }
      if (const json* samples = r.array(jo, base, "samples")) {
        for (std::size_t i = 0; i < samples->size(); ++i) {
          const std::string sp = base + ".samples[" + std::to_string(i) + "]";
          const json& js = (*samples)[i];
          TimedPoint p;
          p.t = r.number(js, sp, "t");
          const auto c = r.fixed_array<3>(js, sp, "center");
          p.center = Vec3(c[0], c[1], c[2]);
          o.samples.push_back(p);
        }
      }
      if (const json* boxes = r.array(jo, base, "boxes2d", /*required=*/false)) {
        o.boxes2d.emplace();
        for (std::size_t i = 0; i < boxes->size(); ++i) {
          const std::string bp = base + ".boxes2d[" + std::to_string(i) + "]";
          const json& jb = (*boxes)[i];
          TimedBox b;
          b.t = r.number(jb, bp, "t");
          const auto c = r.fixed_array<4>(jb, bp, "box");
          b.box = Box2d{c[0], c[1], c[2], c[3]};
          o.boxes2d->push_back(b);
        }
      }
      m.objects.push_back(std::move(o));
    }
  }
  issues.throw_if_any();
  validate(m);
  return m;
}

SceneManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_text_file(path), path.string());
}

void write_manifest(const SceneManifest& m, const std::filesystem::path& path) {
  validate(m);
  write_text_file(path, manifest_to_json(m));
}

// ---------------------------------------------------------------------------
// QA items

std::string_view answer_type_name(const TypedAnswer& a) {
  static constexpr std::array<std::string_view, 6> names = {"meters", "kmh",    "clock",
                                                            "interval", "choice", "boolean"};
  return names[a.index()];
}

std::vector<std::string> qa_issues(const QaItem& q) {
  IssueList issues;
  if (q.qa_id.empty()) issues.add("qa_id", "must be non-empty");
  if (q.scene_id.empty()) issues.add("scene_id", "must be non-empty");
  bool variant_ok = false;
  switch (q.task) {
    case Task::traveled_distance: variant_ok = std::holds_alternative<Meters>(q.answer); break;
    case Task::traveling_speed: variant_ok = std::holds_alternative<Kmh>(q.answer); break;
    case Task::movement_direction: variant_ok = std::holds_alternative<ClockHour>(q.answer); break;
    case Task::direction_timestamp:
      variant_ok = std::holds_alternative<TimeInterval>(q.answer);
      break;
    case Task::distance_comparison:
    case Task::speed_comparison: variant_ok = std::holds_alternative<ColorChoice>(q.answer); break;
    case Task::direction_comparison: variant_ok = std::holds_alternative<YesNo>(q.answer); break;
  }
  if (!variant_ok) {
    issues.add("answer", std::string("answer type ") + std::string(answer_type_name(q.answer)) +
                             " does not match task " + std::string(to_string(q.task)));
  }
  if (const auto* iv = std::get_if<TimeInterval>(&q.answer)) {
    if (!(iv->start >= 0.0 && iv->start < iv->end && iv->end <= q.duration)) {
      issues.add("answer", "interval must satisfy 0 <= start < end <= duration");
    }
  }
  if (const auto* c = std::get_if<ClockHour>(&q.answer)) {
    if (c->hour < 1 || c->hour > 12) issues.add("answer", "clock hour outside 1..12");
  }
  for (const auto& id : q.objects) {
    if (!q.object_colors.count(id)) issues.add("object_colors", "no color for object " + id);
  }
  return issues.items();
}

void validate(const QaItem& q) {
  auto issues = qa_issues(q);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

bool dataset_order(const QaItem& a, const QaItem& b) {
  return std::tie(a.scene_id, a.task, a.qa_id) < std::tie(b.scene_id, b.task, b.qa_id);
}

namespace {

ordered_json answer_to_json(const TypedAnswer& a) {
  ordered_json j;
  j["type"] = answer_type_name(a);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Meters> || std::is_same_v<T, Kmh>) {
          j["value"] = v.value;
        } else if constexpr (std::is_same_v<T, ClockHour>) {
          j["value"] = v.hour;
        } else if constexpr (std::is_same_v<T, TimeInterval>) {
          j["value"] = ordered_json::array({v.start, v.end});
        } else if constexpr (std::is_same_v<T, ColorChoice>) {
          j["value"] = v.color;
        } else {
          j["value"] = v.value;
        }
      },
      a);
  return j;
}

TypedAnswer answer_from_json(const json& j, IssueList& issues) {
  if (!j.is_object() || !j.contains("type") || !j.contains("value") || !j["type"].is_string()) {
    issues.add("answer", "expected {type, value}");
    return Meters{0.0};
  }
  const std::string type = j["type"].get<std::string>();
  const json& v = j["value"];
  try {
    if (type == "meters") return Meters{v.get<double>()};
    if (type == "kmh") return Kmh{v.get<double>()};
    if (type == "clock") return ClockHour{v.get<int>()};
    if (type == "interval") return TimeInterval{v.at(0).get<double>(), v.at(1).get<double>()};
    if (type == "choice") return ColorChoice{v.get<std::string>()};
    if (type == "boolean") return YesNo{v.get<bool>()};
  } catch (const json::exception& e) {
    issues.add("answer.value", std::string("bad value: ") + e.what());
    return Meters{0.0};
  }
  issues.add("answer.type", "unknown answer type '" + type + "'");
  return Meters{0.0};
}

}  // namespace

std::string answer_to_json_text(const TypedAnswer& a) { return answer_to_json(a).dump(); }

TypedAnswer answer_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin, std::string("malformed JSON: ") + e.what());
  }
  IssueList issues;
  TypedAnswer a = answer_from_json(j, issues);
  if (!issues.empty()) {
    std::vector<std::string> prefixed;
    for (const auto& s : issues.items()) prefixed.push_back(origin + " " + s);
    throw ValidationError(std::move(prefixed));
  }
  return a;
}

std::string qa_to_json_line(const QaItem& q) {
  ordered_json j;
  j["qa_id"] = q.qa_id;
  j["scene_id"] = q.scene_id;
  j["task"] = to_string(q.task);
  j["question"] = q.question;
  j["answer_text"] = q.answer_text;
  j["answer"] = answer_to_json(q.answer);
  j["objects"] = q.objects;
  ordered_json colors = ordered_json::object();
  for (const auto& [id, color] : q.object_colors) colors[id] = color;
  j["object_colors"] = colors;
  j["frame_timestamps"] = q.frame_timestamps;
  j["duration"] = q.duration;
  j["window"] = q.window ? ordered_json::array({q.window->start, q.window->end}) : ordered_json();
  j["query_hour"] = q.query_hour ? ordered_json(*q.query_hour) : ordered_json();
  return j.dump();
}

QaItem qa_from_json_line(const std::string& line, const std::string& origin) {
  const json j = parse_or_throw(line, origin);
  IssueList issues;
  Reader r(issues);
  QaItem q;
  q.qa_id = r.string(j, "", "qa_id");
  q.scene_id = r.string(j, "", "scene_id");
  const std::string task = r.string(j, "", "task");
  if (auto t = parse_task(task)) {
    q.task = *t;
  } else {
    issues.add("task", "unknown task '" + task + "'");
  }
  q.question = r.string(j, "", "question");
  q.answer_text = r.string(j, "", "answer_text");
  if (const json* a = r.member(j, "", "answer")) q.answer = answer_from_json(*a, issues);
  try {
    if (const json* o = r.array(j, "", "objects")) q.objects = o->get<std::vector<std::string>>();
    if (const json* c = r.member(j, "", "object_colors")) {
      q.object_colors = c->get<std::map<std::string, std::string>>();
    }
    if (const json* ts = r.array(j, "", "frame_timestamps")) {
      q.frame_timestamps = ts->get<std::vector<double>>();
    }
    q.duration = r.number(j, "", "duration");
    if (const json* w = r.member(j, "", "window", false); w && !w->is_null()) {
      q.window = TimeInterval{w->at(0).get<double>(), w->at(1).get<double>()};
    }
    if (const json* h = r.member(j, "", "query_hour", false); h && !h->is_null()) {
      q.query_hour = h->get<int>();
    }
  } catch (const json::exception& e) {
    issues.add(origin, std::string("bad field: ") + e.what());
  }
  issues.throw_if_any();
  try {
    validate(q);
  } catch (const ValidationError& e) {
    std::vector<std::string> prefixed;
    for (const auto& i : e.issues()) prefixed.push_back(origin + " " + q.qa_id + " " + i);
    throw ValidationError(std::move(prefixed));
  }
  return q;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

Dataset read_dataset(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text_file(path));
  Dataset ds;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    const std::string origin = path.string() + ":" + std::to_string(i + 1);
    const json j = parse_or_throw(lines[i], origin);
    if (j.is_object() && j.contains("kind")) {
      ds.headers.push_back({j["kind"].is_string() ? j["kind"].get<std::string>() : "", lines[i]});
      continue;
    }
    ds.items.push_back(qa_from_json_line(lines[i], origin));
  }
  return ds;
}

void write_dataset(std::vector<QaItem> items, const std::filesystem::path& path,
                   const std::vector<std::string>& header_lines) {
  std::sort(items.begin(), items.end(), dataset_order);
  std::string text;
  for (const auto& h : header_lines) text += h + "\n";
  for (const auto& q : items) {
    validate(q);
    text += qa_to_json_line(q) + "\n";
  }
  write_text_file(path, text);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  const auto lines = split_lines(read_text_file(path));
  std::vector<Prediction> preds;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    const std::string origin = path.string() + ":" + std::to_string(i + 1);
    const json j = parse_or_throw(lines[i], origin);
    IssueList issues;
    Reader r(issues);
    Prediction p;
    p.qa_id = r.string(j, "", "qa_id");
    p.response = r.string(j, "", "response");
    if (!issues.empty()) {
      std::vector<std::string> prefixed;
      for (const auto& s : issues.items()) prefixed.push_back(origin + " " + s);
      throw ValidationError(std::move(prefixed));
    }
    preds.push_back(std::move(p));
  }
  return preds;
}

void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& path) {
  std::string text;
  for (const auto& p : preds) {
    ordered_json j;
    j["qa_id"] = p.qa_id;
    j["response"] = p.response;
    text += j.dump() + "\n";
  }
  write_text_file(path, text);
}

}  // namespace kinekit
