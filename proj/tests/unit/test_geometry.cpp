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
#include <random>

#include "kinekit/geometry.hpp"

using namespace kinekit;

namespace {

Mat3 rotation_z(double rad) {
  Mat3 r;
  r << std::cos(rad), -std::sin(rad), 0, std::sin(rad), std::cos(rad), 0, 0, 0, 1;
  return r;
}

Mat3 rotation_x(double rad) {
  Mat3 r;
  r << 1, 0, 0, 0, std::cos(rad), -std::sin(rad), 0, std::sin(rad), std::cos(rad);
  return r;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("backproject and project are inverses") {
    const CameraIntrinsics k{500.0, 480.0, 320.0, 240.0};
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> px(0.0, 640.0), depth(0.1, 80.0);
    for (int i = 0; i < 500; ++i) {
      const double u = px(g), v = px(g) * 0.75, z = depth(g);
      const Vec3 p = backproject(u, v, z, k);
      CHECK(p.z() == doctest::Approx(z));
      const auto uv = project(p, k);
      CHECK(uv.x() == doctest::Approx(u).epsilon(1e-12));
      CHECK(uv.y() == doctest::Approx(v).epsilon(1e-12));
    }
  }

  TEST_CASE("principal point lies on the optical axis") {
    const CameraIntrinsics k{100.0, 100.0, 50.0, 40.0};
    const Vec3 p = backproject(50.0, 40.0, 7.0, k);
    CHECK(p.x() == 0.0);
    CHECK(p.y() == 0.0);
    CHECK(p.z() == 7.0);
  }

  TEST_CASE("non-positive depth is rejected") {
    const CameraIntrinsics k{100.0, 100.0, 50.0, 40.0};
    CHECK_THROWS_AS(backproject(1, 1, 0.0, k), KinematicsError);
    CHECK_THROWS_AS(backproject(1, 1, std::nan(""), k), KinematicsError);
  }

  TEST_CASE("intrinsics validation") {
    CHECK_THROWS_AS((CameraIntrinsics{0.0, 1.0, 0.0, 0.0}.validate()), ValidationError);
    CHECK_NOTHROW((CameraIntrinsics{1.0, 1.0, 0.0, 0.0}.validate()));
  }

  TEST_CASE("pose checks orthonormality and handedness") {
    CHECK_NOTHROW(CameraPose::make(rotation_z(0.3) * rotation_x(1.1), Vec3(1, 2, 3)));
    Mat3 scaled = 1.01 * Mat3::Identity();
    CHECK_THROWS_AS(CameraPose::make(scaled, Vec3::Zero()), ValidationError);
    Mat3 mirror = Mat3::Identity();
    mirror(2, 2) = -1.0;
    CHECK_THROWS_AS(CameraPose::make(mirror, Vec3::Zero()), ValidationError);
  }

  TEST_CASE("pose inverse and composition") {
    const CameraPose p = CameraPose::make(rotation_z(0.7) * rotation_x(-0.4), Vec3(3, -1, 2));
    const CameraPose id = p.compose(p.inverse());
    CHECK((id.rotation() - Mat3::Identity()).norm() < 1e-12);
    CHECK(id.translation().norm() < 1e-12);
    const Vec3 x(0.5, 1.5, -2.0);
    const Vec3 w = camera_to_world(x, p);
    CHECK((camera_to_world(w, p.inverse()) - x).norm() < 1e-12);
  }

  TEST_CASE("median handles odd and even counts") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({5.0}) == 5.0);
    CHECK_THROWS(median({}));
  }

  TEST_CASE("scale recovers a planted factor") {
    DepthRaster rel(40, 40, DepthKind::relative), met(40, 40, DepthKind::metric);
    std::mt19937_64 g(4);
    std::uniform_real_distribution<float> d(0.5f, 30.0f);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      rel.values[i] = d(g);
      met.values[i] = 2.5f * rel.values[i];
    }
    const BitMask all(40, 40, true);
    CHECK(estimate_scale(rel, met, all).alpha == doctest::Approx(2.5).epsilon(1e-6));
  }

  TEST_CASE("scale is robust to a minority of outliers") {
    DepthRaster rel(40, 40, DepthKind::relative, 2.0f), met(40, 40, DepthKind::metric, 6.0f);
    for (std::size_t i = 0; i < met.size(); i += 5) met.values[i] = 1000.0f;
    CHECK(estimate_scale(rel, met, BitMask(40, 40, true), 1).alpha == doctest::Approx(3.0));
  }

  TEST_CASE("invalid pixels and the mask are skipped") {
    DepthRaster rel(40, 40, DepthKind::relative, 1.0f), met(40, 40, DepthKind::metric, 4.0f);
    BitMask valid(40, 40, true);
    for (std::size_t i = 0; i < met.size(); i += 2) met.values[i] = std::nanf("");
    for (std::size_t i = 1; i < met.size(); i += 6) met.values[i] = 0.0f;
    CHECK(estimate_scale(rel, met, valid, 1).alpha == doctest::Approx(4.0));
    valid.bits.assign(valid.bits.size(), 0);
    for (std::size_t i = 0; i < 299; ++i) valid.bits[i] = 1;
    try {
      estimate_scale(rel, met, valid, 1);
      FAIL("expected InsufficientPixels");
    } catch (const InsufficientPixels& e) {
      // 149 odd indices below 299, 50 of them with zero metric depth
      CHECK(e.count() == 99);
    } catch (...) {
      FAIL("wrong exception type");
    }
  }

  TEST_CASE("too few pixels is reported with the count") {
    DepthRaster rel(10, 5, DepthKind::relative, 1.0f), met(10, 5, DepthKind::metric, 2.0f);
    try {
      estimate_scale(rel, met, BitMask(10, 5, true), 1);
      FAIL("expected InsufficientPixels");
    } catch (const InsufficientPixels& e) {
      CHECK(e.count() == 50);
    }
  }

  TEST_CASE("dimension mismatch is a validation error") {
    CHECK_THROWS_AS(estimate_scale(DepthRaster(2, 2), DepthRaster(3, 2), BitMask(2, 2)), ValidationError);
    CHECK_THROWS_AS(lift_mask(BitMask(2, 2), DepthRaster(3, 2), {1.0}, {}, {}), ValidationError);
  }

  TEST_CASE("canonical scale is the median of per-frame scales") {
    const std::vector<ScaleFactor> s = {{2.0}, {9.0}, {2.2}, {2.1}};
    CHECK(canonical_scene_scale(s).alpha == doctest::Approx(2.15));
    CHECK_THROWS(canonical_scene_scale({}));
  }

  TEST_CASE("lifting a mask on a fronto-parallel plane") {
    const CameraIntrinsics k{10.0, 10.0, 2.0, 2.0};
    DepthRaster rel(4, 4, DepthKind::relative, 2.0f);
    rel.at(3, 3) = std::nanf("");
    BitMask m(4, 4);
    m.set(1, 1);
    m.set(3, 1);
    m.set(1, 3);
    m.set(3, 3);
    const CameraPose pose = CameraPose::make(Mat3::Identity(), Vec3(0, 0, 1));
    const LiftedPoints lp = lift_mask(m, rel, {1.5}, k, pose);
    CHECK(lp.masked_pixels == 4);
    REQUIRE(lp.points.size() == 3);
    for (const auto& p : lp.points) CHECK(p.z() == doctest::Approx(4.0));
    // independent check of the pinhole model: x = (u - cx) z / fx
    CHECK(lp.points[0].x() == doctest::Approx(-0.3));
    CHECK(lp.points[1].x() == doctest::Approx(0.3));
    const Vec3 c = barycenter(lp.points);
    CHECK(c.x() == doctest::Approx(-0.1));
    CHECK(c.y() == doctest::Approx(-0.1));
  }

  TEST_CASE("a mask with only invalid depth is flagged") {
    DepthRaster rel(2, 2, DepthKind::relative, std::nanf(""));
    const LiftedPoints lp = lift_mask(BitMask(2, 2, true), rel, {1.0}, {1, 1, 0, 0}, {});
    CHECK(lp.all_invalid());
    CHECK_THROWS_AS(barycenter(lp.points), KinematicsError);
  }
}
