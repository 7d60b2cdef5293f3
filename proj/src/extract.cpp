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

#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <regex>

#include <json.hpp>

#include "kinekit/eval.hpp"
#include "kinekit/qagen.hpp"

namespace kinekit {

namespace {

const std::string kNum = R"((\d+(?:\.\d+)?))";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Match {
  double value;
  std::string unit;
};

std::vector<Match> all_matches(const std::string& text, const std::regex& re) {
  std::vector<Match> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stod((*it)[1].str()), it->size() > 2 ? (*it)[2].str() : std::string()});
  }
  return out;
}

std::optional<double> last_bare_number(const std::string& text) {
  static const std::regex re(kNum);
  const auto m = all_matches(text, re);
  if (m.empty()) return std::nullopt;
  return m.back().value;
}

std::optional<TypedAnswer> extract_distance(const std::string& text) {
  static const std::regex re(kNum + R"(\s*(kilometers|kilometer|kilometres|kilometre|km|meters|meter|metres|metre|miles|mile|m)\b(?!\s*/|\s*per\b))");
  const auto m = all_matches(text, re);
  if (!m.empty()) {
    const Match& last = m.back();
    double f = 1.0;
    if (last.unit.rfind("kilo", 0) == 0 || last.unit == "km") f = 1000.0;
    if (last.unit.rfind("mile", 0) == 0) f = kKmPerMile * 1000.0;
    return Meters{last.value * f};
  }
  if (auto v = last_bare_number(text)) return Meters{*v};
  return std::nullopt;
}

std::optional<TypedAnswer> extract_speed(const std::string& text) {
  static const std::regex re(
      kNum + R"(\s*(km/h|km/hr|kmh|kph|kilometers per hour|kilometres per hour|mph|miles per hour|m/s|meters per second|metres per second))");
  const auto m = all_matches(text, re);
  if (!m.empty()) {
    const Match& last = m.back();
    double f = 1.0;
    if (last.unit == "mph" || last.unit == "miles per hour") f = kKmPerMile;
    if (last.unit == "m/s" || last.unit.rfind("met", 0) == 0) f = 3.6;
    return Kmh{last.value * f};
  }
  if (auto v = last_bare_number(text)) return Kmh{*v};
  return std::nullopt;
}

std::optional<TypedAnswer> extract_clock(const std::string& text) {
  static const std::regex oclock(R"((\d{1,2})\s*o(?:'|\xE2\x80\x99|\s)?\s*clock)");
  auto m = all_matches(text, oclock);
  if (m.empty()) {
    static const std::regex bare(R"((?:^|[^\d.])(\d{1,2})(?!\d|\.\d))");
    m = all_matches(text, bare);
  }
  if (m.empty()) return std::nullopt;
  const double h = m.back().value;
  if (h < 1 || h > 12) return std::nullopt;
  return ClockHour{static_cast<int>(h)};
}

std::optional<TypedAnswer> extract_interval(const std::string& text) {
  static const std::regex from(R"(from\s+)" + kNum + R"(\s*(?:seconds|second|secs|sec|s)?\s*(?:to|until|-|\xE2\x80\x93)\s*)" +
                               kNum);
  static const std::regex range(kNum + R"(\s*(?:-|\xE2\x80\x93|to)\s*)" + kNum +
                                R"(\s*(?:seconds|second|secs|sec|s)\b)");
  std::smatch sm;
  std::optional<TimeInterval> iv;
  if (std::regex_search(text, sm, from)) {
    iv = TimeInterval{std::stod(sm[1].str()), std::stod(sm[2].str())};
  } else {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), range); it != std::sregex_iterator(); ++it) {
      iv = TimeInterval{std::stod((*it)[1].str()), std::stod((*it)[2].str())};
    }
  }
  if (!iv || !(iv->start < iv->end)) return std::nullopt;
  return *iv;
}

std::optional<std::size_t> first_word(const std::string& text, const std::string& word) {
  const std::regex re("\\b" + word + "\\b");
  std::smatch sm;
  if (!std::regex_search(text, sm, re)) return std::nullopt;
  return static_cast<std::size_t>(sm.position(0));
}

std::optional<TypedAnswer> extract_choice(const std::string& lowered, std::string_view original, const QaItem* item) {
  std::optional<std::size_t> best_pos;
  std::string best;
  for (auto color : kPalette) {
    if (auto p = first_word(lowered, std::string(color)); p && (!best_pos || *p < *best_pos)) {
      best_pos = p;
      best = std::string(color);
    }
  }
  if (best_pos) return ColorChoice{best};
  if (!item) return std::nullopt;
  static const std::regex ab(R"([Oo]bject\s+(A|B)\b)");
  std::smatch sm;
  const std::string orig(original);
  if (!std::regex_search(orig, sm, ab)) return std::nullopt;
  const std::size_t idx = sm[1].str() == "A" ? 0 : 1;
  if (idx >= item->objects.size()) return std::nullopt;
  auto it = item->object_colors.find(item->objects[idx]);
  if (it == item->object_colors.end()) return std::nullopt;
  return ColorChoice{it->second};
}

std::optional<TypedAnswer> extract_boolean(const std::string& lowered) {
  const auto yes = first_word(lowered, "yes");
  const auto no = first_word(lowered, "no");
  if (yes && (!no || *yes < *no)) return YesNo{true};
  if (no) return YesNo{false};
  return std::nullopt;
}

bool type_matches(Task task, const TypedAnswer& a) {
  switch (task) {
    case Task::traveled_distance: return std::holds_alternative<Meters>(a);
    case Task::traveling_speed: return std::holds_alternative<Kmh>(a);
    case Task::movement_direction: return std::holds_alternative<ClockHour>(a);
    case Task::direction_timestamp: return std::holds_alternative<TimeInterval>(a);
    case Task::distance_comparison:
    case Task::speed_comparison: return std::holds_alternative<ColorChoice>(a);
    case Task::direction_comparison: return std::holds_alternative<YesNo>(a);
  }
  return false;
}

}  // namespace

std::optional<TypedAnswer> extract_answer(Task task, std::string_view response, const QaItem* item) {
  const std::string text = lower(response);
  switch (task) {
    case Task::traveled_distance: return extract_distance(text);
    case Task::traveling_speed: return extract_speed(text);
    case Task::movement_direction: return extract_clock(text);
    case Task::direction_timestamp: return extract_interval(text);
    case Task::distance_comparison:
    case Task::speed_comparison: return extract_choice(text, response, item);
    case Task::direction_comparison: return extract_boolean(text);
  }
  return std::nullopt;
}

std::optional<TypedAnswer> GrammarExtractor::extract(const QaItem& item, const std::string& response) const {
  return extract_answer(item.task, response, &item);
}

std::optional<TypedAnswer> CommandExtractor::extract(const QaItem& item, const std::string& response) const {
  static std::atomic<unsigned long> counter{0};
  nlohmann::ordered_json req;
  req["qa_id"] = item.qa_id;
  req["task"] = to_string(item.task);
  req["response"] = response;
  req["objects"] = item.objects;
  req["object_colors"] = item.object_colors;
  const auto path = std::filesystem::temp_directory_path() /
                    ("kinekit_extract_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
  write_text_file(path, req.dump());
  const std::string cmd = command_ + " < '" + path.string() + "'";
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(path);
    throw IoError("extractor: cannot run '" + command_ + "'");
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  std::filesystem::remove(path);
  if (status != 0) throw IoError("extractor: '" + command_ + "' exited with status " + std::to_string(status));
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  if (out.empty() || out == "null") return std::nullopt;
  TypedAnswer a = answer_from_json_text(out, "extractor output for " + item.qa_id);
  if (!type_matches(item.task, a)) return std::nullopt;
  return a;
}

}  // namespace kinekit
