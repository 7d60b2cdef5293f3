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

#include "kinekit/pseudolabel.hpp"

namespace kinekit {

/// Directory layout consumed by the pseudo-label pipeline:
///
///   scene.json               index: scene metadata plus one entry per frame
///   frame_<k>.rel.d32        relative depth (KDEPTH01)
///   frame_<k>.met.d32        metric depth (KDEPTH01)
///   frame_<k>.pose.json      intrinsics, camera-to-world rotation/translation
///   frame_<k>.det.json       detections, each naming its KMASK001 mask file
///   frame_<k>.ppm            optional RGB frame (P6)
struct SceneFrameEntry {
  int index = 0;
  double t = 0.0;
  std::string relative_depth;
  std::string metric_depth;
  std::string pose;
  std::string detections;
  std::optional<std::string> rgb;
};

struct SceneIndex {
  std::string scene_id;
  Domain domain = Domain::general;
  double duration = 0.0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<SceneFrameEntry> frames;
};

SceneIndex read_scene_index(const std::filesystem::path& scene_dir);
void write_scene_index(const SceneIndex& index, const std::filesystem::path& scene_dir);

/// Default file names for frame k.
SceneFrameEntry default_frame_entry(int k, double t, bool with_rgb);
std::string mask_file_name(int k, const std::string& track_id);

FramePackage read_frame(const std::filesystem::path& scene_dir, const SceneFrameEntry& entry);
/// Writes rasters, pose, detections and masks for one frame.
void write_frame(const FramePackage& frame, const std::filesystem::path& scene_dir,
                 const SceneFrameEntry& entry);

std::string pose_to_json(const CameraIntrinsics& k, const CameraPose& pose);
void pose_from_json(const std::string& text, const std::string& origin, CameraIntrinsics& k,
                    CameraPose& pose);

}  // namespace kinekit
