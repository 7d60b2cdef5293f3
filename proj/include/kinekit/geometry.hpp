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

#include <span>
#include <vector>

#include "kinekit/raster.hpp"
#include "kinekit/types.hpp"

namespace kinekit {

struct CameraIntrinsics {
  double fx = 1.0, fy = 1.0;
  double cx = 0.0, cy = 0.0;

  /// Throws ValidationError unless fx > 0 and fy > 0.
  void validate() const;
};

/// Camera-to-world rigid transform. Construct through `make` to get the
/// orthonormality check.
class CameraPose {
 public:
  CameraPose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  static CameraPose make(const Mat3& rotation, const Vec3& translation);
  static CameraPose identity() { return {}; }

  const Mat3& rotation() const noexcept { return rotation_; }
  const Vec3& translation() const noexcept { return translation_; }

  CameraPose inverse() const;
  CameraPose compose(const CameraPose& inner) const;

 private:
  CameraPose(const Mat3& r, const Vec3& t) : rotation_(r), translation_(t) {}
  Mat3 rotation_;
  Vec3 translation_;
};

inline constexpr double kPoseTolerance = 1e-9;

/// Global depth multiplier mapping reconstruction depth to meters.
struct ScaleFactor {
  double alpha = 1.0;
};

/// Pixel (u, v) with depth along the optical axis → camera-frame point.
Vec3 backproject(double u, double v, double depth, const CameraIntrinsics& k);

/// Forward pinhole model; inverse of backproject for points with z > 0.
Eigen::Vector2d project(const Vec3& p_cam, const CameraIntrinsics& k);

Vec3 camera_to_world(const Vec3& p_cam, const CameraPose& pose);

/// Pixel stride used when sampling ratios for scale estimation.
inline constexpr std::size_t kDefaultScaleStride = 4;
inline constexpr std::size_t kMinScalePixels = 100;

/// Thrown when fewer than kMinScalePixels usable ratios exist.
class InsufficientPixels : public Error {
 public:
  explicit InsufficientPixels(std::size_t count);
  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

/// Median of metric/relative over pixels where both depths are valid and
/// the mask is set, visiting every `stride`-th pixel in row-major order.
ScaleFactor estimate_scale(const DepthRaster& relative, const DepthRaster& metric,
                           const BitMask& valid, std::size_t stride = kDefaultScaleStride);

/// One scale for the whole scene: the median of the per-frame estimates.
ScaleFactor canonical_scene_scale(std::span<const ScaleFactor> per_frame);

/// Median with the even-count case averaging the two central values.
double median(std::vector<double> values);

struct LiftedPoints {
  std::vector<Vec3> points;
  std::size_t masked_pixels = 0;

  /// The mask selected pixels, but none of them had a usable depth.
  bool all_invalid() const noexcept { return masked_pixels > 0 && points.empty(); }
};

/// Lifts every set mask pixel with valid depth into the world frame, using
/// alpha * relative depth.
LiftedPoints lift_mask(const BitMask& mask, const DepthRaster& relative, ScaleFactor alpha,
                       const CameraIntrinsics& k, const CameraPose& pose);

/// Unweighted component-wise mean. Throws on an empty set.
Vec3 barycenter(std::span<const Vec3> points);

}  // namespace kinekit
