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

#include "kinekit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kinekit {

void CameraIntrinsics::validate() const {
  IssueList issues;
  if (!(std::isfinite(fx) && fx > 0.0)) issues.add("intrinsics.fx", "must be > 0");
  if (!(std::isfinite(fy) && fy > 0.0)) issues.add("intrinsics.fy", "must be > 0");
  if (!std::isfinite(cx)) issues.add("intrinsics.cx", "must be finite");
  if (!std::isfinite(cy)) issues.add("intrinsics.cy", "must be finite");
  issues.throw_if_any();
}

CameraPose CameraPose::make(const Mat3& rotation, const Vec3& translation) {
  IssueList issues;
  if (!rotation.allFinite()) issues.add("pose.rotation", "non-finite entry");
  if (!translation.allFinite()) issues.add("pose.translation", "non-finite entry");
  if (issues.empty()) {
    const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kPoseTolerance) {
      issues.add("pose.rotation", "not orthonormal (max |R^T R - I| = " + std::to_string(ortho) + ")");
    }
    const double det = rotation.determinant();
    if (std::abs(det - 1.0) > kPoseTolerance) {
      issues.add("pose.rotation", "determinant " + std::to_string(det) + " is not +1");
    }
  }
  issues.throw_if_any();
  return CameraPose(rotation, translation);
}

CameraPose CameraPose::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return CameraPose(rt, -(rt * translation_));
}

CameraPose CameraPose::compose(const CameraPose& inner) const {
  return CameraPose(rotation_ * inner.rotation_, rotation_ * inner.translation_ + translation_);
}

Vec3 backproject(double u, double v, double depth, const CameraIntrinsics& k) {
  if (!(std::isfinite(depth) && depth > 0.0)) {
    throw KinematicsError("backproject: depth must be positive and finite, got " +
                          std::to_string(depth));
  }
  return Vec3((u - k.cx) * depth / k.fx, (v - k.cy) * depth / k.fy, depth);
}

Eigen::Vector2d project(const Vec3& p, const CameraIntrinsics& k) {
  return Eigen::Vector2d(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
}

Vec3 camera_to_world(const Vec3& p_cam, const CameraPose& pose) {
  return pose.rotation() * p_cam + pose.translation();
}

InsufficientPixels::InsufficientPixels(std::size_t count)
    : Error("insufficient valid pixels for scale estimation: " + std::to_string(count) +
            " (need " + std::to_string(kMinScalePixels) + ")"),
      count_(count) {}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

ScaleFactor estimate_scale(const DepthRaster& relative, const DepthRaster& metric,
                           const BitMask& valid, std::size_t stride) {
  if (relative.width != metric.width || relative.height != metric.height ||
      valid.width != relative.width || valid.height != relative.height) {
    throw ValidationError("estimate_scale", "raster and mask dimensions differ");
  }
  if (stride == 0) stride = 1;
  std::vector<double> ratios;
  ratios.reserve(relative.size() / stride + 1);
  for (std::size_t i = 0; i < relative.size(); i += stride) {
    const float r = relative.values[i];
    const float m = metric.values[i];
    if (valid.bits[i] && is_valid_depth(r) && is_valid_depth(m)) {
      ratios.push_back(static_cast<double>(m) / static_cast<double>(r));
    }
  }
  if (ratios.size() < kMinScalePixels) throw InsufficientPixels(ratios.size());
  return ScaleFactor{median(std::move(ratios))};
}

ScaleFactor canonical_scene_scale(std::span<const ScaleFactor> per_frame) {
  if (per_frame.empty()) throw Error("canonical_scene_scale: no per-frame scale estimates");
  std::vector<double> alphas;
  alphas.reserve(per_frame.size());
  for (const auto& s : per_frame) alphas.push_back(s.alpha);
  return ScaleFactor{median(std::move(alphas))};
}

LiftedPoints lift_mask(const BitMask& mask, const DepthRaster& relative, ScaleFactor alpha,
                       const CameraIntrinsics& k, const CameraPose& pose) {
  if (mask.width != relative.width || mask.height != relative.height) {
    throw ValidationError("lift_mask", "mask " + std::to_string(mask.width) + "x" +
                                           std::to_string(mask.height) + " vs raster " +
                                           std::to_string(relative.width) + "x" +
                                           std::to_string(relative.height));
  }
  if (!(std::isfinite(alpha.alpha) && alpha.alpha > 0.0)) {
    throw ValidationError("lift_mask.alpha", "must be positive and finite");
  }
  LiftedPoints out;
  for (std::uint32_t v = 0; v < mask.height; ++v) {
    for (std::uint32_t u = 0; u < mask.width; ++u) {
      if (!mask.at(u, v)) continue;
      ++out.masked_pixels;
      const float d = relative.at(u, v);
      if (!is_valid_depth(d)) continue;
      const double depth = alpha.alpha * static_cast<double>(d);
      out.points.push_back(camera_to_world(backproject(u, v, depth, k), pose));
    }
  }
  return out;
}

Vec3 barycenter(std::span<const Vec3> points) {
  if (points.empty()) throw KinematicsError("barycenter of an empty point set");
  Vec3 sum = Vec3::Zero();
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

}  // namespace kinekit
