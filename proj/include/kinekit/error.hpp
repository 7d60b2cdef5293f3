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

#include <stdexcept>
#include <string>
#include <vector>

namespace kinekit {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or file violates a declared invariant. `issues` holds one entry
/// per failing field, each prefixed with its field path.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  ValidationError(const std::string& path, const std::string& what);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Kinematic quantity is undefined for the given input (stationary start,
/// off-grid window, coverage gap, ...).
class KinematicsError : public Error {
 public:
  using Error::Error;
};

/// Collects issues and throws a single ValidationError when non-empty.
class IssueList {
 public:
  void add(std::string path, const std::string& what) {
    issues_.push_back(std::move(path) + ": " + what);
  }
  bool empty() const noexcept { return issues_.empty(); }
  const std::vector<std::string>& items() const noexcept { return issues_; }
  void throw_if_any() const {
    if (!issues_.empty()) throw ValidationError(issues_);
  }

 private:
  std::vector<std::string> issues_;
};

}  // namespace kinekit
