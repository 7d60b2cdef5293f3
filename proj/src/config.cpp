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

#include "kinekit/config.hpp"

#include <cmath>
#include <functional>
#include <set>

#include <json.hpp>

#include "kinekit/json_writer.hpp"

namespace kinekit {

using nlohmann::json;

void validate(const Config& c) {
  IssueList issues;
  auto positive = [&](const std::string& path, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) issues.add(path, "must be positive");
  };
  const KinematicsConfig& k = c.pipeline.kinematics;
  positive("kinematics.grid_step", k.grid_step);
  positive("kinematics.max_gap", k.max_gap);
  positive("kinematics.epsilon_move", k.epsilon_move);
  positive("kinematics.ratio_margin", k.ratio_margin);
  if (k.ratio_margin < 1.0) issues.add("kinematics.ratio_margin", "must be >= 1");
  positive("kinematics.same_direction_max_deg", k.same_direction_max_deg);
  positive("kinematics.different_direction_min_deg", k.different_direction_min_deg);
  if (!(k.same_direction_max_deg <= k.different_direction_min_deg)) {
    issues.add("kinematics", "same_direction_max_deg exceeds different_direction_min_deg");
  }
  if (!(k.up.norm() > 0.0) || !k.up.allFinite()) issues.add("kinematics.up", "must be a non-zero vector");
  for (const char* name : {"median_window", "mean_window"}) {
    const int w = std::string(name) == "median_window" ? c.pipeline.smoothing.median_window
                                                       : c.pipeline.smoothing.mean_window;
    if (w < 1 || w % 2 == 0) issues.add(std::string("smoothing.") + name, "must be odd and positive");
  }
  positive("gate.min_confidence", c.pipeline.gate.min_confidence);
  positive("gate.min_box_area_fraction", c.pipeline.gate.min_box_area_fraction);
  for (const auto& [cls, cap] : c.pipeline.caps.mps) positive("speed_caps." + std::string(to_string(cls)), cap);
  if (c.pipeline.caps.min_samples < 2) issues.add("min_samples", "must be >= 2");
  if (c.pipeline.scale_stride < 1) issues.add("scale_stride", "must be >= 1");
  positive("qagen.min_distance", c.gen.min_distance);
  positive("qagen.min_window", c.gen.min_window);
  positive("bins.distance_width", c.bins.distance_width);
  positive("bins.distance_max", c.bins.distance_max);
  positive("bins.speed_width", c.bins.speed_width);
  positive("bins.interval_width", c.bins.interval_width);
  if (c.quota < 1) issues.add("bench.quota", "must be >= 1");
  if (c.cap && *c.cap < 1) issues.add("bench.cap", "must be >= 1");
  issues.throw_if_any();
}

std::string config_to_json(const Config& c) {
  const KinematicsConfig& k = c.pipeline.kinematics;
  JsonWriter w;
  w.begin_object();
  w.key("kinematics").begin_object();
  w.field("grid_step", k.grid_step);
  w.field("max_gap", k.max_gap);
  w.key("up").begin_array(true).value(k.up.x()).value(k.up.y()).value(k.up.z()).end_array();
  w.field("epsilon_move", k.epsilon_move);
  w.field("ratio_margin", k.ratio_margin);
  w.field("same_direction_max_deg", k.same_direction_max_deg);
  w.field("different_direction_min_deg", k.different_direction_min_deg);
  w.end_object();
  w.key("smoothing").begin_object();
  w.field("median_window", c.pipeline.smoothing.median_window);
  w.field("mean_window", c.pipeline.smoothing.mean_window);
  w.end_object();
  w.key("gate").begin_object();
  w.field("min_confidence", c.pipeline.gate.min_confidence);
  w.field("min_box_area_fraction", c.pipeline.gate.min_box_area_fraction);
  w.end_object();
  w.key("speed_caps").begin_object();
  for (const auto& [cls, cap] : c.pipeline.caps.mps) w.field(to_string(cls), cap);
  w.end_object();
  w.field("min_samples", static_cast<long long>(c.pipeline.caps.min_samples));
  w.field("scale_stride", static_cast<long long>(c.pipeline.scale_stride));
  w.key("qagen").begin_object();
  w.field("min_distance", c.gen.min_distance);
  w.field("min_window", c.gen.min_window);
  w.end_object();
  w.key("bins").begin_object();
  w.field("distance_width", c.bins.distance_width);
  w.field("distance_max", c.bins.distance_max);
  w.field("speed_width", c.bins.speed_width);
  w.field("interval_width", c.bins.interval_width);
  w.end_object();
  w.key("bench").begin_object();
  w.field("quota", static_cast<long long>(c.quota));
  w.key("cap");
  c.cap ? w.value(static_cast<long long>(*c.cap)) : w.null();
  w.end_object();
  w.field("seed", static_cast<long long>(c.seed));
  w.end_object();
  return w.str() + "\n";
}

namespace {

/// Reads known keys of one JSON object, reporting unknown ones and type errors.
class Section {
 public:
  Section(const json& j, std::string path, IssueList& issues) : j_(j), path_(std::move(path)), issues_(issues) {
    if (!j_.is_object()) issues_.add(path_.empty() ? "config" : path_, "expected an object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    known_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (!j_[key].is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T>) {
        if (!j_[key].is_number_integer()) throw std::invalid_argument("expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!j_[key].is_number()) throw std::invalid_argument("expected a number");
      }
      out = j_[key].template get<T>();
    } catch (const std::exception& e) {
      issues_.add(child(key), e.what());
    }
  }

  void section(const std::string& key, const std::function<void(Section&)>& fn) {
    known_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    Section s(j_[key], child(key), issues_);
    fn(s);
    s.finish();
  }

  const json* raw(const std::string& key) {
    known_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_[key];
  }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items()) {
      if (!known_.count(k)) issues_.add(child(k), "unknown key");
    }
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  IssueList& issues() { return issues_; }

 private:
  const json& j_;
  std::string path_;
  IssueList& issues_;
  std::set<std::string> known_;
};

}  // namespace

Config config_from_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin, std::string("malformed JSON: ") + e.what());
  }
  Config c;
  IssueList issues;
  Section root(j, "", issues);
  KinematicsConfig& k = c.pipeline.kinematics;
  root.section("kinematics", [&](Section& s) {
    s.read("grid_step", k.grid_step);
    s.read("max_gap", k.max_gap);
    if (const json* up = s.raw("up")) {
      if (!up->is_array() || up->size() != 3 || !(*up)[0].is_number() || !(*up)[1].is_number() ||
          !(*up)[2].is_number()) {
        s.issues().add(s.child("up"), "expected [x, y, z]");
      } else {
        k.up = Vec3((*up)[0].get<double>(), (*up)[1].get<double>(), (*up)[2].get<double>());
      }
    }
    s.read("epsilon_move", k.epsilon_move);
    s.read("ratio_margin", k.ratio_margin);
    s.read("same_direction_max_deg", k.same_direction_max_deg);
    s.read("different_direction_min_deg", k.different_direction_min_deg);
  });
  root.section("smoothing", [&](Section& s) {
    s.read("median_window", c.pipeline.smoothing.median_window);
    s.read("mean_window", c.pipeline.smoothing.mean_window);
  });
  root.section("gate", [&](Section& s) {
    s.read("min_confidence", c.pipeline.gate.min_confidence);
    s.read("min_box_area_fraction", c.pipeline.gate.min_box_area_fraction);
  });
  if (const json* caps = root.raw("speed_caps")) {
    if (!caps->is_object()) {
      issues.add("speed_caps", "expected an object");
    } else {
      for (const auto& [name, v] : caps->items()) {
        auto cls = parse_object_class(name);
        if (!cls) {
          issues.add("speed_caps." + name, "unknown class");
        } else if (!v.is_number()) {
          issues.add("speed_caps." + name, "expected a number");
        } else {
          c.pipeline.caps.mps[*cls] = v.get<double>();
        }
      }
    }
  }
  root.read("min_samples", c.pipeline.caps.min_samples);
  root.read("scale_stride", c.pipeline.scale_stride);
  root.section("qagen", [&](Section& s) {
    s.read("min_distance", c.gen.min_distance);
    s.read("min_window", c.gen.min_window);
  });
  root.section("bins", [&](Section& s) {
    s.read("distance_width", c.bins.distance_width);
    s.read("distance_max", c.bins.distance_max);
    s.read("speed_width", c.bins.speed_width);
    s.read("interval_width", c.bins.interval_width);
  });
  root.section("bench", [&](Section& s) {
    s.read("quota", c.quota);
    if (const json* cap = s.raw("cap"); cap && !cap->is_null()) {
      if (!cap->is_number_unsigned()) {
        s.issues().add(s.child("cap"), "expected a non-negative integer or null");
      } else {
        c.cap = cap->get<std::size_t>();
      }
    }
  });
  root.read("seed", c.seed);
  root.finish();
  if (!issues.empty()) {
    std::vector<std::string> prefixed;
    for (const auto& s : issues.items()) prefixed.push_back(origin + " " + s);
    throw ValidationError(std::move(prefixed));
  }
  c.gen.kinematics = c.pipeline.kinematics;
  validate(c);
  return c;
}

Config read_config(const std::filesystem::path& path) {
  return config_from_json(read_text_file(path), path.string());
}

}  // namespace kinekit
