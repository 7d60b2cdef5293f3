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

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace kinekit {

/// Meters; world or camera frame depending on context.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Half-open time span in seconds, 0 <= start < end.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  double length() const noexcept { return end - start; }
  bool operator==(const TimeInterval&) const = default;
};

enum class Domain { driving, sports, general };
enum class ObjectClass { car, bus, truck, motorcycle, bicycle, person, other };
enum class Source { lidar, vio_slam, pseudo };

/// The seven kinematic instruction tasks, in benchmark column order.
enum class Task {
  traveled_distance,
  traveling_speed,
  movement_direction,
  direction_timestamp,
  distance_comparison,
  speed_comparison,
  direction_comparison,
};

inline constexpr std::array<Task, 7> kAllTasks = {
    Task::traveled_distance,   Task::traveling_speed,     Task::movement_direction,
    Task::direction_timestamp, Task::distance_comparison, Task::speed_comparison,
    Task::direction_comparison,
};

std::string_view to_string(Domain d);
std::string_view to_string(ObjectClass c);
std::string_view to_string(Source s);
std::string_view to_string(Task t);

std::optional<Domain> parse_domain(std::string_view s);
std::optional<ObjectClass> parse_object_class(std::string_view s);
std::optional<Source> parse_source(std::string_view s);
std::optional<Task> parse_task(std::string_view s);

inline bool is_direction_task(Task t) {
  return t == Task::movement_direction || t == Task::direction_timestamp ||
         t == Task::direction_comparison;
}

inline bool is_vehicle(ObjectClass c) {
  return c == ObjectClass::car || c == ObjectClass::bus || c == ObjectClass::truck ||
         c == ObjectClass::motorcycle || c == ObjectClass::bicycle;
}

}  // namespace kinekit
