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

#include "kinekit/scene_dir.hpp"

#include <json.hpp>

namespace kinekit {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin, std::string("malformed JSON: ") + e.what());
  }
}

/// Wraps nlohmann type errors into ValidationError with the file origin.
template <typename Fn>
auto guarded(const std::string& origin, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(origin, e.what());
  }
}

bool safe_file_name(const std::string& s) {
  if (s.empty() || s == "." || s == "..") return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

SceneFrameEntry default_frame_entry(int k, double t, bool with_rgb) {
  const std::string base = "frame_" + std::to_string(k);
  SceneFrameEntry e;
  e.index = k;
  e.t = t;
  e.relative_depth = base + ".rel.d32";
  e.metric_depth = base + ".met.d32";
  e.pose = base + ".pose.json";
  e.detections = base + ".det.json";
  if (with_rgb) e.rgb = base + ".ppm";
  return e;
}

std::string mask_file_name(int k, const std::string& track_id) {
  return "frame_" + std::to_string(k) + "." + track_id + ".msk";
}

SceneIndex read_scene_index(const fs::path& scene_dir) {
  const fs::path path = scene_dir / "scene.json";
  const std::string origin = path.string();
  const json j = parse(read_text_file(path), origin);
  return guarded(origin, [&] {
    SceneIndex idx;
    idx.scene_id = j.at("scene_id").get<std::string>();
    const std::string domain = j.at("domain").get<std::string>();
    auto d = parse_domain(domain);
    if (!d) throw ValidationError(origin + " domain", "unknown domain '" + domain + "'");
    idx.domain = *d;
    idx.duration = j.at("duration").get<double>();
    idx.width = j.at("width").get<std::uint32_t>();
    idx.height = j.at("height").get<std::uint32_t>();
    IssueList issues;
    const json& frames = j.at("frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const json& f = frames[i];
      SceneFrameEntry e;
      e.index = f.at("index").get<int>();
      e.t = f.at("t").get<double>();
      e.relative_depth = f.at("relative_depth").get<std::string>();
      e.metric_depth = f.at("metric_depth").get<std::string>();
      e.pose = f.at("pose").get<std::string>();
      e.detections = f.at("detections").get<std::string>();
      if (f.contains("rgb") && !f["rgb"].is_null()) e.rgb = f["rgb"].get<std::string>();
      const std::string p = "frames[" + std::to_string(i) + "]";
      for (const auto* name : {&e.relative_depth, &e.metric_depth, &e.pose, &e.detections}) {
        if (!safe_file_name(*name)) issues.add(p, "unsafe file name '" + *name + "'");
      }
      if (!(e.t >= 0.0 && e.t <= idx.duration)) issues.add(p + ".t", "outside [0, duration]");
      if (i > 0 && !(e.t > idx.frames.back().t)) issues.add(p + ".t", "not strictly increasing");
      idx.frames.push_back(std::move(e));
    }
    if (!(idx.duration > 0.0 && idx.duration <= kMaxDuration)) {
      issues.add("duration", "must lie in (0, 20]");
    }
    if (idx.frames.size() > kMaxFrames) issues.add("frames", "more than 40 frames");
    if (!issues.empty()) {
      std::vector<std::string> prefixed;
      for (const auto& s : issues.items()) prefixed.push_back(origin + " " + s);
      throw ValidationError(std::move(prefixed));
    }
    return idx;
  });
}

void write_scene_index(const SceneIndex& idx, const fs::path& scene_dir) {
  ordered_json j;
  j["scene_id"] = idx.scene_id;
  j["domain"] = to_string(idx.domain);
  j["duration"] = idx.duration;
  j["width"] = idx.width;
  j["height"] = idx.height;
  j["frames"] = ordered_json::array();
  for (const auto& e : idx.frames) {
    ordered_json f;
    f["index"] = e.index;
    f["t"] = e.t;
    f["relative_depth"] = e.relative_depth;
    f["metric_depth"] = e.metric_depth;
    f["pose"] = e.pose;
    f["detections"] = e.detections;
    if (e.rgb) f["rgb"] = *e.rgb;
    j["frames"].push_back(std::move(f));
  }
  write_text_file(scene_dir / "scene.json", j.dump(2) + "\n");
}

std::string pose_to_json(const CameraIntrinsics& k, const CameraPose& pose) {
  ordered_json j;
  j["intrinsics"] = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
  ordered_json rot = ordered_json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back({pose.rotation()(r, 0), pose.rotation()(r, 1), pose.rotation()(r, 2)});
  }
  j["rotation"] = rot;
  j["translation"] = {pose.translation().x(), pose.translation().y(), pose.translation().z()};
  return j.dump(2) + "\n";
}

void pose_from_json(const std::string& text, const std::string& origin, CameraIntrinsics& k,
                    CameraPose& pose) {
  const json j = parse(text, origin);
  guarded(origin, [&] {
    const json& in = j.at("intrinsics");
    k = CameraIntrinsics{in.at("fx").get<double>(), in.at("fy").get<double>(),
                         in.at("cx").get<double>(), in.at("cy").get<double>()};
    Mat3 r;
    const json& rot = j.at("rotation");
    if (rot.size() != 3) throw ValidationError(origin + " rotation", "expected 3 rows");
    for (int row = 0; row < 3; ++row) {
      if (rot[row].size() != 3) throw ValidationError(origin + " rotation", "expected 3 columns");
      for (int c = 0; c < 3; ++c) r(row, c) = rot[row][c].get<double>();
    }
    const json& t = j.at("translation");
    if (t.size() != 3) throw ValidationError(origin + " translation", "expected 3 numbers");
    try {
      k.validate();
      pose = CameraPose::make(r, Vec3(t[0].get<double>(), t[1].get<double>(), t[2].get<double>()));
    } catch (const ValidationError& e) {
      std::vector<std::string> prefixed;
      for (const auto& s : e.issues()) prefixed.push_back(origin + " " + s);
      throw ValidationError(std::move(prefixed));
    }
    return 0;
  });
}

FramePackage read_frame(const fs::path& scene_dir, const SceneFrameEntry& entry) {
  FramePackage f;
  f.t = entry.t;
  f.relative_depth = read_depth(scene_dir / entry.relative_depth, DepthKind::relative);
  f.metric_depth = read_depth(scene_dir / entry.metric_depth, DepthKind::metric);
  const fs::path pose_path = scene_dir / entry.pose;
  pose_from_json(read_text_file(pose_path), pose_path.string(), f.intrinsics, f.pose);

  const fs::path det_path = scene_dir / entry.detections;
  const std::string origin = det_path.string();
  const json j = parse(read_text_file(det_path), origin);
  guarded(origin, [&] {
    for (const json& d : j.at("detections")) {
      Detection det;
      det.track_id = d.at("track_id").get<std::string>();
      const std::string cls = d.at("class").get<std::string>();
      auto c = parse_object_class(cls);
      if (!c) throw ValidationError(origin + " class", "unknown class '" + cls + "'");
      det.cls = *c;
      det.confidence = d.at("confidence").get<double>();
      const json& b = d.at("box");
      det.box = Box2d{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                      b.at(3).get<double>()};
      const std::string mask = d.at("mask").get<std::string>();
      if (!safe_file_name(mask)) throw ValidationError(origin + " mask", "unsafe file name '" + mask + "'");
      det.mask = read_mask(scene_dir / mask);
      f.detections.push_back(std::move(det));
    }
    return 0;
  });
  try {
    f.validate();
  } catch (const ValidationError& e) {
    std::vector<std::string> prefixed;
    for (const auto& s : e.issues()) prefixed.push_back(origin + " " + s);
    throw ValidationError(std::move(prefixed));
  }
  return f;
}

void write_frame(const FramePackage& frame, const fs::path& scene_dir, const SceneFrameEntry& entry) {
  frame.validate();
  write_depth(frame.relative_depth, scene_dir / entry.relative_depth);
  write_depth(frame.metric_depth, scene_dir / entry.metric_depth);
  write_text_file(scene_dir / entry.pose, pose_to_json(frame.intrinsics, frame.pose));
  ordered_json j;
  j["detections"] = ordered_json::array();
  for (const auto& d : frame.detections) {
    if (!safe_file_name(d.track_id)) {
      throw ValidationError("track_id", "'" + d.track_id + "' is not usable in a file name");
    }
    const std::string mask = mask_file_name(entry.index, d.track_id);
    write_mask(d.mask, scene_dir / mask);
    ordered_json jd;
    jd["track_id"] = d.track_id;
    jd["class"] = to_string(d.cls);
    jd["confidence"] = d.confidence;
    jd["box"] = {d.box.x1, d.box.y1, d.box.x2, d.box.y2};
    jd["mask"] = mask;
    j["detections"].push_back(std::move(jd));
  }
  write_text_file(scene_dir / entry.detections, j.dump(2) + "\n");
}

}  // namespace kinekit
