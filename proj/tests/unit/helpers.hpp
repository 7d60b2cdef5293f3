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

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "kinekit/interchange.hpp"
#include "kinekit/trajectory.hpp"

namespace kinekit::test {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("kinekit_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Trajectory line_trajectory(const std::vector<Vec3>& pts, long first_index = 0,
                                  ObjectClass cls = ObjectClass::car, std::string id = "obj") {
  return Trajectory::make(std::move(id), cls, kGridStep, first_index, pts);
}

/// Random polyline with steps of up to `max_step` meters per axis.
inline std::vector<Vec3> random_polyline(std::mt19937_64& gen, std::size_t n, double max_step = 5.0) {
  std::uniform_real_distribution<double> d(-max_step, max_step);
  std::vector<Vec3> pts{Vec3(d(gen) * 10, d(gen) * 10, d(gen))};
  for (std::size_t i = 1; i < n; ++i) pts.push_back(pts.back() + Vec3(d(gen), d(gen), 0.1 * d(gen)));
  return pts;
}

}  // namespace kinekit::test
