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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "kinekit/scene_dir.hpp"
#include "kinekit/synthbench.hpp"

using namespace kinekit;
using namespace kinekit::synth;
using kinekit::test::TempDir;

namespace {

MotionScript script(Primitive p, double speed) {
  MotionScript s;
  s.primitive = p;
  s.speed = speed;
  s.start = Vec3(1, 2, 0);
  s.heading_deg = 90.0;
  s.t_begin = 0.0;
  s.t_end = 10.0;
  return s;
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("constant velocity closed form") {
    const MotionScript s = script(Primitive::constant_velocity, 3.0);
    CHECK((s.position(2.0) - Vec3(1, 8, 0)).norm() < 1e-12);
    CHECK(s.path_length(1.0, 4.0) == doctest::Approx(9.0));
    CHECK((s.heading(5.0) - Vec3(0, 1, 0)).norm() < 1e-12);
    // positions clamp to the span
    CHECK((s.position(12.0) - s.position(10.0)).norm() < 1e-12);
  }

  TEST_CASE("circle keeps its radius and turns the requested way") {
    MotionScript s = script(Primitive::circle, 2.0);
    s.radius = 8.0;
    s.clockwise = true;
    const double quarter = std::numbers::pi * 8.0 / 2.0 / 2.0;
    // heading north and turning clockwise, the center is due east
    const Vec3 center = s.start + Vec3(8.0, 0, 0);
    for (double t = 0; t <= 10.0; t += 0.37) CHECK((s.position(t) - center).norm() == doctest::Approx(8.0));
    CHECK((s.heading(quarter) - Vec3(1, 0, 0)).norm() < 1e-9);
    CHECK(s.path_length(0.0, 10.0) == doctest::Approx(20.0));
    s.clockwise = false;
    CHECK((s.heading(quarter) - Vec3(-1, 0, 0)).norm() < 1e-9);
  }

  TEST_CASE("piecewise turns are clockwise positive") {
    MotionScript s = script(Primitive::piecewise, 2.0);
    s.turns = {{4.0, 90.0, -1.0}, {6.0, 180.0, 4.0}};
    CHECK((s.heading(3.0) - Vec3(0, 1, 0)).norm() < 1e-12);
    CHECK((s.heading(5.0) - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK((s.heading(7.0) - Vec3(-1, 0, 0)).norm() < 1e-12);
    CHECK((s.position(6.0) - Vec3(5, 10, 0)).norm() < 1e-12);
    CHECK(s.path_length(0.0, 10.0) == doctest::Approx(8 + 4 + 16));
  }

  TEST_CASE("script validation") {
    MotionScript s = script(Primitive::circle, -1.0);
    s.radius = 0.0;
    s.t_end = 30.0;
    try {
      s.validate();
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.issues().size() == 3);
    }
  }

  TEST_CASE("manifests carry the closed-form samples") {
    MotionScript a = script(Primitive::constant_velocity, 4.0);
    MotionScript b = script(Primitive::piecewise, 1.5);
    b.object_id = "b";
    b.turns = {{5.0, 90.0, -1.0}};
    ManifestOptions opt;
    const SyntheticScene sc = synth_manifest({a, b}, opt);
    REQUIRE(sc.manifest.objects.size() == 2);
    CHECK(sc.manifest.objects[0].source == Source::lidar);
    for (const auto& s : sc.manifest.objects[1].samples) CHECK(s.center == b.position(s.t));
    const Trajectory t = resample(sc.manifest.objects[1]);
    CHECK(traveled_distance(t, 0.0, 10.0) == doctest::Approx(sc.truth[1].path_length(0.0, 10.0)));
    const auto labels = step_labels(t);
    CHECK(labels.front().hour == 12);
    CHECK(labels.back().hour == 3);
  }

  TEST_CASE("random scenes are valid and reproducible") {
    for (int i = 0; i < 50; ++i) {
      const SyntheticScene a = random_scene(12, i);
      CHECK_NOTHROW(validate(a.manifest));
      CHECK(a.manifest.objects.size() >= 1);
      CHECK(a.manifest.objects.size() <= 4);
      CHECK(a.truth.size() == a.manifest.objects.size());
      CHECK(manifest_to_json(a.manifest) == manifest_to_json(random_scene(12, i).manifest));
    }
    CHECK(manifest_to_json(random_scene(12, 0).manifest) != manifest_to_json(random_scene(13, 0).manifest));
  }

  TEST_CASE("rendered depth obeys the planted scale") {
    const FrameSceneSpec spec = scenario("moving", 6);
    const auto frames = render_frames(spec);
    REQUIRE(frames.size() == 6);
    CHECK(canonicalize(frames).alpha == doctest::Approx(2.5).epsilon(1e-6));
    for (const auto& f : frames) {
      REQUIRE(f.detections.size() == 1);
      CHECK(f.detections[0].mask.count() > 0);
    }
    CHECK(forward_looking_rotation().determinant() == doctest::Approx(1.0));
  }

  TEST_CASE("an object leaving the frustum names the frame") {
    FrameSceneSpec spec = scenario("moving", 6);
    spec.camera.velocity = Vec3(0.0, -8.0, 0.0);
    try {
      render_frames(spec);
      FAIL("expected a frustum error");
    } catch (const ValidationError& e) {
      CHECK(e.issues()[0].find("frame") != std::string::npos);
    }
  }

  TEST_CASE("jitter and erosion") {
    FrameSceneSpec spec = scenario("static", 4);
    const auto clean = render_frames(spec);
    spec.depth_jitter = 0.05;
    spec.mask_erosion = 1;
    spec.noise_seed = 3;
    const auto noisy = render_frames(spec);
    CHECK(noisy[0].relative_depth != clean[0].relative_depth);
    CHECK(noisy[0].detections[0].mask.count() < clean[0].detections[0].mask.count());
    CHECK(render_frames(spec)[0].relative_depth == noisy[0].relative_depth);
  }

  TEST_CASE("scenario catalogue") {
    for (const auto& name : scenario_names()) CHECK_NOTHROW(scenario(name));
    CHECK_THROWS_AS(scenario("nope"), ValidationError);
    CHECK_THROWS_AS(scenario("moving", 41), ValidationError);
  }

  TEST_CASE("a written scene directory runs through the pipeline") {
    TempDir dir;
    FrameSceneSpec spec = scenario("moving", 10);
    spec.write_rgb = true;
    synth_frames(spec, dir.path());
    const SceneIndex idx = read_scene_index(dir.path());
    CHECK(idx.frames.size() == 10);
    REQUIRE(idx.frames[0].rgb.has_value());
    CHECK(read_ppm(dir / *idx.frames[0].rgb).width == spec.width);
    const PipelineResult r = run_pipeline(dir.path());
    CHECK(r.alpha.alpha == doctest::Approx(2.5).epsilon(1e-6));
    REQUIRE(r.manifest.objects.size() == 1);
    const Trajectory t = resample(r.manifest.objects[0]);
    CHECK(speed_mps(t, t.start_time(), t.end_time()) == doctest::Approx(10.0).epsilon(0.1));
  }
}
