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
#include <string>
#include <vector>

#include "kinekit/geometry.hpp"
#include "kinekit/interchange.hpp"
#include "kinekit/pseudolabel.hpp"
#include "kinekit/rng.hpp"

namespace kinekit::synth {

enum class Primitive { constant_velocity, circle, piecewise };

/// Heading change at time `at`, clockwise positive (viewed from above, up = +z).
struct Turn {
  double at = 0.0;
  double clockwise_deg = 0.0;
  /// New speed from `at` on; negative keeps the current speed.
  double speed = -1.0;
};

/// Closed-form ground-plane motion. Headings are measured counter-clockwise
/// from world +x; the ground plane is z = const.
struct MotionScript {
  Primitive primitive = Primitive::constant_velocity;
  std::string object_id = "obj";
  ObjectClass cls = ObjectClass::car;
  Vec3 start = Vec3::Zero();
  double heading_deg = 0.0;
  double speed = 0.0;       // m/s
  double radius = 10.0;     // circle only
  bool clockwise = true;    // circle only
  std::vector<Turn> turns;  // piecewise only
  double t_begin = 0.0;
  double t_end = 10.0;

  /// Throws ValidationError on physically invalid parameters.
  void validate() const;

  Vec3 position(double t) const;
  /// Arc length traveled over [s, e] (clamped to the script's span).
  double path_length(double s, double e) const;
  /// Unit velocity direction at t (undefined for zero speed).
  Vec3 heading(double t) const;
};

/// Analytic side channel of a synthesized manifest.
struct AnalyticTruth {
  MotionScript script;

  Vec3 position(double t) const { return script.position(t); }
  double path_length(double s, double e) const { return script.path_length(s, e); }
  double mean_speed_kmh(double s, double e) const { return path_length(s, e) / (e - s) * 3.6; }
};

struct SyntheticScene {
  SceneManifest manifest;
  std::vector<AnalyticTruth> truth;
};

struct ManifestOptions {
  std::string scene_id = "synth_0000";
  Domain domain = Domain::driving;
  double duration = 10.0;
  /// Spacing of the raw samples written into the manifest.
  double dt = 0.5;
};

/// Samples every script at t_begin + k * dt; positions are exactly the
/// closed-form values.
SyntheticScene synth_manifest(const std::vector<MotionScript>& scripts, const ManifestOptions& opt);

/// A random but valid scene (1-4 objects, mixed primitives and domains).
SyntheticScene random_scene(std::uint64_t seed, int index);

// ---------------------------------------------------------------------------
// Rendered frame packages

enum class Shape { sphere, box };

struct SceneObject {
  MotionScript motion;  // trajectory of the shape's center
  Shape shape = Shape::sphere;
  /// Sphere radius in x(); box half extents otherwise.
  Vec3 size = Vec3(1.5, 1.5, 1.5);
  double confidence = 0.9;
  Rgb color{200, 200, 200};
};

/// Camera moving at constant velocity with a fixed orientation.
struct CameraPath {
  Vec3 start = Vec3(0.0, 0.0, 1.5);
  Vec3 velocity = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  CameraPose pose_at(double t) const;
};

/// Camera-to-world rotation of a level camera looking along world +x
/// (image right = world −y, image down = world −z).
Mat3 forward_looking_rotation();

struct FrameSceneSpec {
  std::string scene_id = "synth_frames";
  Domain domain = Domain::driving;
  std::uint32_t width = 160;
  std::uint32_t height = 120;
  CameraIntrinsics intrinsics{100.0, 100.0, 79.5, 59.5};
  CameraPath camera;
  std::vector<double> frame_times;
  double duration = 0.0;
  /// relative depth = metric depth / planted_alpha
  double planted_alpha = 2.5;
  std::vector<SceneObject> objects;
  /// Static backdrop plane x = backdrop_x (world); the ground is z = 0.
  double backdrop_x = 80.0;
  /// Multiplicative depth noise amplitude (uniform in ±jitter); 0 disables.
  double depth_jitter = 0.0;
  /// Pixels of mask erosion; 0 disables.
  int mask_erosion = 0;
  std::uint64_t noise_seed = 0;
  bool write_rgb = true;
};

/// Renders every frame, throwing ValidationError naming the first frame in
/// which an object leaves the frustum.
std::vector<FramePackage> render_frames(const FrameSceneSpec& spec);
std::vector<RgbImage> render_rgb(const FrameSceneSpec& spec);

/// Renders and writes a complete scene directory.
void synth_frames(const FrameSceneSpec& spec, const std::filesystem::path& out_dir);

/// Canned scenarios used by the acceptance suite and the CLI:
///   "moving"     10 m/s object, camera tracking at 8 m/s
///   "static"     static object, camera translating at 2 m/s
///   "two_object" car and pedestrian, static camera
///   "low_conf"   every detection below the confidence gate
FrameSceneSpec scenario(const std::string& name, int frames = 20, double planted_alpha = 2.5);
std::vector<std::string> scenario_names();

}  // namespace kinekit::synth
