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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinekit/interchange.hpp"
#include "kinekit/raster.hpp"
#include "kinekit/trajectory.hpp"

namespace kinekit {

/// Question/answer pattern pair. Question placeholders: [COLOR], [COLOR_A],
/// [COLOR_B], [START], [END], [DIRECTION]. Answer placeholder: [VALUE].
struct QaTemplate {
  Task task;
  std::string question_pattern;
  std::string answer_pattern;
};

/// Template family of a task (at least three per task).
const std::vector<QaTemplate>& templates(Task task);

/// Placeholders a task's question may use, and those it must use.
std::vector<std::string> allowed_placeholders(Task task);
std::vector<std::string> required_placeholders(Task task);
/// Placeholders appearing in a pattern, in order of first appearance.
std::vector<std::string> placeholders_in(std::string_view pattern);

/// Visual-prompt palette in assignment order.
inline constexpr std::array<std::string_view, 6> kPalette = {"red",     "green", "blue",
                                                             "yellow",  "magenta", "cyan"};
/// Throws ValidationError for names outside the palette.
Rgb palette_rgb(std::string_view color);

/// Colors by manifest object order; objects past the palette get none.
std::map<std::string, std::string> assign_colors(const SceneManifest& m);

/// "The video lasts for ... bounding boxes in the video." Seconds use one
/// decimal. Throws ValidationError when colors is empty.
std::string common_prompt(double duration, std::span<const double> timestamps,
                          std::span<const std::string> colors);

std::string format_1dp(double v);

struct GenConfig {
  KinematicsConfig kinematics;
  /// Distance and speed items need at least this many meters in the window.
  double min_distance = 2.0;
  /// Shortest [START, END] window and shortest comparison span, in seconds.
  double min_window = 2.0;
};

/// All eligible items for one manifest. Randomness (templates, windows,
/// object order, query hours) is derived from (seed, scene_id, task).
std::vector<QaItem> generate(const SceneManifest& m, std::span<const Task> tasks,
                             std::uint64_t seed, const GenConfig& cfg = {});

// ---------------------------------------------------------------------------
// Visual prompts

inline constexpr int kOverlayThickness = 3;

struct ColoredBox {
  Box2d box;
  Rgb color;
};

/// Draws rectangle outlines `thickness` pixels wide, inward from the box
/// edges. Box corners are pixel edges rounded to the nearest integer, so the
/// outline covers columns [x1, x2) and rows [y1, y2). Throws ValidationError
/// for boxes outside the raster.
RgbImage render_overlay(const RgbImage& frame, std::span<const ColoredBox> boxes,
                        int thickness = kOverlayThickness);

/// Boxes of every colored object whose boxes2d has an entry at time t.
std::vector<ColoredBox> boxes_at(const SceneManifest& m, double t,
                                 const std::map<std::string, std::string>& colors);

}  // namespace kinekit
