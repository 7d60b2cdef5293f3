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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kinekit/error.hpp"
#include "kinekit/types.hpp"

namespace kinekit {

/// Clip budget: at most 40 frames covering at most 20 seconds.
inline constexpr double kMaxDuration = 20.0;
inline constexpr std::size_t kMaxFrames = 40;

struct Box2d {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double area() const noexcept { return (x2 - x1) * (y2 - y1); }
  bool operator==(const Box2d&) const = default;
};

struct TimedPoint {
  double t = 0.0;
  Vec3 center = Vec3::Zero();

  bool operator==(const TimedPoint& o) const { return t == o.t && center == o.center; }
};

struct TimedBox {
  double t = 0.0;
  Box2d box;

  bool operator==(const TimedBox&) const = default;
};

struct ObjectRecord {
  std::string object_id;
  ObjectClass cls = ObjectClass::other;
  std::vector<TimedPoint> samples;
  std::optional<std::vector<TimedBox>> boxes2d;
  double confidence = 1.0;
  Source source = Source::lidar;

  bool operator==(const ObjectRecord&) const = default;
};

/// Per-video record of annotated objects. Both the labeled path and the
/// pseudo-label path produce one of these.
struct SceneManifest {
  std::string scene_id;
  Domain domain = Domain::general;
  double duration = 0.0;
  std::vector<double> frame_timestamps;
  std::vector<ObjectRecord> objects;

  const ObjectRecord* find(std::string_view object_id) const;
  bool operator==(const SceneManifest&) const = default;
};

/// Returns every invariant violation, each prefixed with its field path.
std::vector<std::string> manifest_issues(const SceneManifest& m);
/// Throws ValidationError listing all violations.
void validate(const SceneManifest& m);
/// Throws ValidationError if two manifests share a scene_id.
void validate_unique_ids(const std::vector<SceneManifest>& ms);

/// Canonical text form: stable key order, floats as fixed 6 decimals.
std::string manifest_to_json(const SceneManifest& m);
SceneManifest manifest_from_json(const std::string& text, const std::string& origin = "<memory>");

SceneManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const SceneManifest& m, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// QA items

struct Meters {
  double value;
  bool operator==(const Meters&) const = default;
};
struct Kmh {
  double value;
  bool operator==(const Kmh&) const = default;
};
struct ClockHour {
  int hour;
  bool operator==(const ClockHour&) const = default;
};
struct ColorChoice {
  std::string color;
  bool operator==(const ColorChoice&) const = default;
};
struct YesNo {
  bool value;
  bool operator==(const YesNo&) const = default;
};

using TypedAnswer = std::variant<Meters, Kmh, ClockHour, TimeInterval, ColorChoice, YesNo>;

std::string_view answer_type_name(const TypedAnswer& a);

struct QaItem {
  std::string qa_id;
  std::string scene_id;
  Task task = Task::traveled_distance;
  std::string question;
  std::string answer_text;
  TypedAnswer answer = Meters{0.0};
  /// Objects the question is about, in question order (object A, object B).
  std::vector<std::string> objects;
  std::map<std::string, std::string> object_colors;
  std::vector<double> frame_timestamps;
  double duration = 0.0;
  /// [START]/[END] window the answer was computed over.
  std::optional<TimeInterval> window;
  /// [DIRECTION] placeholder value for direction-timestamp items.
  std::optional<int> query_hour;

  bool operator==(const QaItem&) const = default;
};

std::vector<std::string> qa_issues(const QaItem& q);
void validate(const QaItem& q);

/// Ordering used for every dataset file: (scene_id, task, qa_id).
bool dataset_order(const QaItem& a, const QaItem& b);

/// One compact JSON object, no trailing newline. Doubles use shortest
/// round-trip formatting so typed answers survive bit-exactly.
std::string qa_to_json_line(const QaItem& q);
QaItem qa_from_json_line(const std::string& line, const std::string& origin = "<memory>");

/// Typed answer as a compact {"type", "value"} object.
std::string answer_to_json_text(const TypedAnswer& a);
TypedAnswer answer_from_json_text(const std::string& text, const std::string& origin = "<memory>");

/// Header line carried by balanced pools and benchmark files.
struct DatasetHeader {
  std::string kind;
  std::string json;  // the raw header object
};

struct Dataset {
  std::vector<DatasetHeader> headers;
  std::vector<QaItem> items;
};

/// Reads JSON Lines; lines whose object has a "kind" key are headers.
Dataset read_dataset(const std::filesystem::path& path);
/// Writes items sorted by dataset_order, after the given header lines.
void write_dataset(std::vector<QaItem> items, const std::filesystem::path& path,
                   const std::vector<std::string>& header_lines = {});

// ---------------------------------------------------------------------------
// Predictions

struct Prediction {
  std::string qa_id;
  std::string response;
};

std::vector<Prediction> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::vector<Prediction>& preds, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// File helpers shared by the readers

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace kinekit
