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

#include "kinekit/pseudolabel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "kinekit/parallel.hpp"
#include "kinekit/scene_dir.hpp"

namespace kinekit {

void FramePackage::validate() const {
  IssueList issues;
  const auto w = relative_depth.width;
  const auto h = relative_depth.height;
  if (metric_depth.width != w || metric_depth.height != h) {
    issues.add("metric_depth", "dimensions differ from relative_depth");
  }
  if (relative_depth.values.size() != static_cast<std::size_t>(w) * h) {
    issues.add("relative_depth", "value count does not match dimensions");
  }
  if (metric_depth.values.size() != static_cast<std::size_t>(metric_depth.width) * metric_depth.height) {
    issues.add("metric_depth", "value count does not match dimensions");
  }
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& d = detections[i];
    const std::string p = "detections[" + std::to_string(i) + "](" + d.track_id + ")";
    if (d.track_id.empty()) issues.add(p + ".track_id", "must be non-empty");
    if (d.mask.width != w || d.mask.height != h) issues.add(p + ".mask", "dimensions differ from rasters");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) issues.add(p + ".confidence", "must lie in [0, 1]");
    if (!(d.box.x1 >= 0.0 && d.box.x1 < d.box.x2 && d.box.x2 <= w && d.box.y1 >= 0.0 &&
          d.box.y1 < d.box.y2 && d.box.y2 <= h)) {
      issues.add(p + ".box", "must satisfy 0 <= x1 < x2 <= width and 0 <= y1 < y2 <= height");
    }
  }
  issues.throw_if_any();
}

Decision quality_gate(const Detection& d, double frame_area, const GateConfig& cfg) {
  if (d.confidence < cfg.min_confidence) return Decision::reject("confidence");
  if (d.box.area() < cfg.min_box_area_fraction * frame_area) return Decision::reject("box area");
  return Decision::accept();
}

ScaleFactor canonicalize(const std::vector<FramePackage>& frames, std::size_t stride) {
  if (frames.empty()) throw Error("canonicalize: no frames");
  std::vector<ScaleFactor> alphas;
  for (const auto& f : frames) {
    const BitMask all(f.relative_depth.width, f.relative_depth.height, true);
    try {
      alphas.push_back(estimate_scale(f.relative_depth, f.metric_depth, all, stride));
    } catch (const InsufficientPixels&) {
      // frame skipped
    }
  }
  if (alphas.empty()) throw Error("canonicalize: no frame yields a valid scale estimate");
  return canonical_scene_scale(alphas);
}

TrackResult track_to_trajectory(const std::string& track_id, const std::vector<FramePackage>& frames,
                                ScaleFactor alpha, const PipelineConfig& cfg) {
  TrackResult out;
  out.track_id = track_id;
  std::vector<TimedPoint> raw;
  double confidence_sum = 0.0;
  bool have_class = false;

  for (const auto& f : frames) {
    auto it = std::find_if(f.detections.begin(), f.detections.end(),
                           [&](const Detection& d) { return d.track_id == track_id; });
    if (it == f.detections.end()) continue;
    if (!quality_gate(*it, f.frame_area(), cfg.gate).accepted) continue;
    ++out.gated_frames;
    if (!have_class) {
      out.cls = it->cls;
      have_class = true;
    }
    const LiftedPoints lifted = lift_mask(it->mask, f.relative_depth, alpha, f.intrinsics, f.pose);
    if (lifted.points.empty()) continue;
    raw.push_back({f.t, barycenter(lifted.points)});
    out.boxes.push_back({f.t, it->box});
    confidence_sum += it->confidence;
  }
  if (!raw.empty()) out.mean_confidence = confidence_sum / static_cast<double>(raw.size());

  if (out.gated_frames < cfg.caps.min_samples || raw.size() < 2) {
    out.decision = Decision::reject("too short");
    return out;
  }
  try {
    Trajectory traj = resample(raw, cfg.kinematics, track_id, out.cls);
    traj = smooth(traj, cfg.smoothing);
    out.decision = plausibility_filter(traj, cfg.caps);
    if (out.decision.accepted) out.trajectory = std::move(traj);
  } catch (const KinematicsError& e) {
    out.decision = Decision::reject(std::string("coverage: ") + e.what());
  }
  return out;
}

PipelineResult run_pipeline(const std::string& scene_id, Domain domain, double duration,
                            std::vector<FramePackage> frames, const PipelineConfig& cfg,
                            unsigned jobs) {
  std::stable_sort(frames.begin(), frames.end(),
                   [](const FramePackage& a, const FramePackage& b) { return a.t < b.t; });
  PipelineResult result;
  result.alpha = canonicalize(frames, cfg.scale_stride);

  std::set<std::string> ids;
  for (const auto& f : frames) {
    for (const auto& d : f.detections) ids.insert(d.track_id);
  }
  const std::vector<std::string> track_ids(ids.begin(), ids.end());
  result.tracks = parallel_map(track_ids.size(), jobs, [&](std::size_t i) {
    return track_to_trajectory(track_ids[i], frames, result.alpha, cfg);
  });

  SceneManifest& m = result.manifest;
  m.scene_id = scene_id;
  m.domain = domain;
  m.duration = duration;
  for (const auto& f : frames) m.frame_timestamps.push_back(f.t);
  for (const auto& tr : result.tracks) {
    if (!tr.trajectory) {
      result.warnings.push_back("track " + tr.track_id + " rejected: " + tr.decision.reason);
      continue;
    }
    ObjectRecord o;
    o.object_id = tr.track_id;
    o.cls = tr.cls;
    o.source = Source::pseudo;
    o.confidence = tr.mean_confidence;
    for (const auto& s : tr.trajectory->samples()) o.samples.push_back({s.t, s.position});
    o.boxes2d = tr.boxes;
    m.objects.push_back(std::move(o));
  }
  if (m.objects.empty()) {
    result.warnings.push_back("scene " + scene_id + ": no track survived gating and filtering");
  }
  validate(m);
  return result;
}

PipelineResult run_pipeline(const std::filesystem::path& scene_dir, const PipelineConfig& cfg,
                            unsigned jobs) {
  const SceneIndex idx = read_scene_index(scene_dir);
  std::vector<FramePackage> frames = parallel_map(
      idx.frames.size(), jobs, [&](std::size_t i) { return read_frame(scene_dir, idx.frames[i]); });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].relative_depth.width != idx.width || frames[i].relative_depth.height != idx.height) {
      throw ValidationError("frames[" + std::to_string(i) + "]",
                            "raster size differs from scene.json width/height");
    }
  }
  return run_pipeline(idx.scene_id, idx.domain, idx.duration, std::move(frames), cfg, jobs);
}

}  // namespace kinekit
