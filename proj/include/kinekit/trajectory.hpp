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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinekit/error.hpp"
#include "kinekit/interchange.hpp"
#include "kinekit/types.hpp"

namespace kinekit {

inline constexpr double kGridStep = 0.5;
/// 40 frames at 0.5 s cover [0, 20] inclusive, i.e. 41 grid points.
inline constexpr std::size_t kMaxTrajectorySamples = 41;
inline constexpr double kKmhPerMps = 3.6;

/// Thresholds shared by every kinematic operation.
struct KinematicsConfig {
  double grid_step = kGridStep;
  /// A grid point needs a raw sample within this many seconds.
  double max_gap = 0.25;
  /// World up axis; the ground plane is its orthogonal complement and
  /// "clockwise" is as seen looking down along -up.
  Vec3 up = Vec3::UnitZ();
  /// Ground-plane displacements shorter than this are stationary.
  double epsilon_move = 0.05;
  /// Comparisons need the larger quantity to be at least this multiple of
  /// the smaller one.
  double ratio_margin = 1.2;
  double same_direction_max_deg = 30.0;
  double different_direction_min_deg = 90.0;
};

struct TrajectorySample {
  double t;
  Vec3 position;
};

/// One object's positions on a fixed time grid t_k = k * grid_step.
class Trajectory {
 public:
  /// Validates the invariants: 2..41 samples, finite positions, grid_step > 0,
  /// first_index >= 0.
  static Trajectory make(std::string object_id, ObjectClass cls, double grid_step,
                         long first_index, std::vector<Vec3> positions);

  const std::string& object_id() const noexcept { return object_id_; }
  ObjectClass cls() const noexcept { return cls_; }
  double grid_step() const noexcept { return grid_step_; }
  long first_index() const noexcept { return first_index_; }
  std::size_t size() const noexcept { return positions_.size(); }
  std::size_t step_count() const noexcept { return positions_.size() - 1; }

  double time(std::size_t i) const noexcept {
    return static_cast<double>(first_index_ + static_cast<long>(i)) * grid_step_;
  }
  const Vec3& position(std::size_t i) const { return positions_.at(i); }
  const std::vector<Vec3>& positions() const noexcept { return positions_; }
  double start_time() const noexcept { return time(0); }
  double end_time() const noexcept { return time(size() - 1); }
  TimeInterval span() const noexcept { return {start_time(), end_time()}; }

  /// Sample index for grid time t; throws KinematicsError if t is off-grid
  /// or outside the span.
  std::size_t index_of(double t) const;
  bool on_grid(double t) const noexcept;

  std::vector<TrajectorySample> samples() const;
  Trajectory with_positions(std::vector<Vec3> positions) const;

 private:
  Trajectory() = default;
  std::string object_id_;
  ObjectClass cls_ = ObjectClass::other;
  double grid_step_ = kGridStep;
  long first_index_ = 0;
  std::vector<Vec3> positions_;
};

/// Linear interpolation of raw samples onto the grid points inside the raw
/// time span. Throws KinematicsError on a coverage gap or fewer than two
/// resulting grid points.
Trajectory resample(std::span<const TimedPoint> raw, const KinematicsConfig& cfg = {},
                    std::string object_id = {}, ObjectClass cls = ObjectClass::other);
Trajectory resample(const ObjectRecord& obj, const KinematicsConfig& cfg = {});

/// Sum of consecutive step lengths between grid times s < e, in meters.
double traveled_distance(const Trajectory& traj, double s, double e);
double speed_mps(const Trajectory& traj, double s, double e);
/// Average speed over [s, e] in km/h.
double speed(const Trajectory& traj, double s, double e);

Vec3 ground_projection(const Vec3& v, const Vec3& up);

/// Unit ground-plane direction of the first displacement: the 12 o'clock axis.
/// Throws KinematicsError("stationary start") when it is shorter than epsilon_move.
Vec3 reference_direction(const Trajectory& traj, const KinematicsConfig& cfg = {});

/// Clockwise angle in [0, 360) from `reference` to `v` in the ground plane.
double clockwise_angle_deg(const Vec3& reference, const Vec3& v, const Vec3& up);

/// Clockwise angle of the step starting at grid time t relative to the
/// reference direction; nullopt when that step is stationary.
std::optional<double> direction_angle(const Trajectory& traj, double t,
                                      const KinematicsConfig& cfg = {});

/// A clock hour in 1..12, or the stationary label.
struct DirectionLabel {
  int hour = 0;  // 0 means stationary

  static DirectionLabel stationary() { return {}; }
  bool is_stationary() const noexcept { return hour == 0; }
  bool operator==(const DirectionLabel&) const = default;
};

/// Bin k (k = 1..12, 12 ≡ 0°) spans [30k − 15°, 30k + 15°).
DirectionLabel clock_direction(double angle_deg);

/// Clock label of every step (size() - 1 entries).
std::vector<DirectionLabel> step_labels(const Trajectory& traj, const KinematicsConfig& cfg = {});

/// Maximal runs of consecutive steps labeled `hour`, each from its first
/// step's start time to its last step's end time.
std::vector<TimeInterval> direction_intervals(const Trajectory& traj, int hour,
                                              const KinematicsConfig& cfg = {});

/// Longest interval; ties go to the earliest.
std::optional<TimeInterval> longest_interval(std::span<const TimeInterval> intervals);

struct SmoothingConfig {
  int median_window = 3;
  int mean_window = 3;
};

/// Component-wise sliding median then centered moving average. Windows are
/// symmetric and shrink near the ends, so the endpoints are kept as is.
Trajectory smooth(const Trajectory& traj, const SmoothingConfig& cfg = {});

struct SpeedCaps {
  std::map<ObjectClass, double> mps = {
      {ObjectClass::car, 60.0},     {ObjectClass::bus, 60.0},     {ObjectClass::truck, 60.0},
      {ObjectClass::motorcycle, 60.0}, {ObjectClass::bicycle, 60.0}, {ObjectClass::person, 12.0},
      {ObjectClass::other, 60.0}};
  std::size_t min_samples = 4;

  double cap_for(ObjectClass c) const;
};

struct Decision {
  bool accepted = true;
  std::string reason;

  static Decision accept() { return {}; }
  static Decision reject(std::string why) { return {false, std::move(why)}; }
};

Decision plausibility_filter(const Trajectory& traj, const SpeedCaps& caps = {});

enum class Verdict { a, b, ambiguous };

Verdict compare_distance(const Trajectory& a, const Trajectory& b, TimeInterval window,
                         const KinematicsConfig& cfg = {});
Verdict compare_speed(const Trajectory& a, const Trajectory& b, TimeInterval window,
                      const KinematicsConfig& cfg = {});

enum class DirectionVerdict { same, different, ambiguous };

/// Angle in degrees between the net ground-plane displacements over window.
/// Throws KinematicsError if either object is stationary over the window.
double net_direction_angle_deg(const Trajectory& a, const Trajectory& b, TimeInterval window,
                               const KinematicsConfig& cfg = {});
DirectionVerdict same_direction(const Trajectory& a, const Trajectory& b, TimeInterval window,
                                const KinematicsConfig& cfg = {});

}  // namespace kinekit
