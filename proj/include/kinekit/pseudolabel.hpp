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
#include <optional>
#include <string>
#include <vector>

#include "kinekit/geometry.hpp"
#include "kinekit/interchange.hpp"
#include "kinekit/raster.hpp"
#include "kinekit/trajectory.hpp"

namespace kinekit {

struct Detection {
  std::string track_id;
  ObjectClass cls = ObjectClass::other;
  BitMask mask;
  Box2d box;
  double confidence = 0.0;
};

/// Everything the reconstruction, metric-depth and segmentation models
/// produced for one frame.
struct FramePackage {
  double t = 0.0;
  DepthRaster relative_depth;
  DepthRaster metric_depth;
  CameraIntrinsics intrinsics;
  CameraPose pose;
  std::vector<Detection> detections;

  /// Rasters share dimensions; masks match them; boxes lie inside the frame.
  void validate() const;
  double frame_area() const noexcept {
    return static_cast<double>(relative_depth.width) * relative_depth.height;
  }
};

struct GateConfig {
  double min_confidence = 0.5;
  /// Minimum box area as a fraction of the frame area.
  double min_box_area_fraction = 0.005;
};

Decision quality_gate(const Detection& d, double frame_area, const GateConfig& cfg = {});

struct PipelineConfig {
  GateConfig gate;
  KinematicsConfig kinematics;
  SmoothingConfig smoothing;
  SpeedCaps caps;
  std::size_t scale_stride = kDefaultScaleStride;
};

/// Scene-wide scale: median over the per-frame estimates of frames that
/// have enough valid pixels. Throws if no frame qualifies.
ScaleFactor canonicalize(const std::vector<FramePackage>& frames,
                         std::size_t stride = kDefaultScaleStride);

struct TrackResult {
  std::string track_id;
  ObjectClass cls = ObjectClass::other;
  std::optional<Trajectory> trajectory;
  Decision decision;
  std::vector<TimedBox> boxes;
  double mean_confidence = 0.0;
  /// Frames where the detection passed the gate.
  std::size_t gated_frames = 0;
};

/// Gates, lifts and tracks one track id across the frames (sorted by t),
/// then resamples, smooths and filters the barycenter trajectory.
TrackResult track_to_trajectory(const std::string& track_id,
                                const std::vector<FramePackage>& frames, ScaleFactor alpha,
                                const PipelineConfig& cfg = {});

struct PipelineResult {
  SceneManifest manifest;
  ScaleFactor alpha;
  std::vector<TrackResult> tracks;
  std::vector<std::string> warnings;
};

/// Runs the whole pseudo-label chain over already-loaded frames.
PipelineResult run_pipeline(const std::string& scene_id, Domain domain, double duration,
                            std::vector<FramePackage> frames, const PipelineConfig& cfg = {},
                            unsigned jobs = 1);

/// Loads a scene directory and runs the chain. Output is identical for any
/// number of jobs.
PipelineResult run_pipeline(const std::filesystem::path& scene_dir, const PipelineConfig& cfg = {},
                            unsigned jobs = 1);

}  // namespace kinekit
