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

#include <string>
#include <string_view>
#include <vector>

namespace kinekit {

/// Streaming JSON emitter with caller-controlled key order and fixed
/// 6-decimal float formatting, so equal values always give equal bytes.
/// nlohmann::json is used for parsing; its float output is shortest
/// round-trip, which is not what the manifest format wants.
class JsonWriter {
 public:
  explicit JsonWriter(int indent = 2) : indent_(indent) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(bool inline_items = false);
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(double d);
  JsonWriter& value(long long i);
  JsonWriter& value(int i) { return value(static_cast<long long>(i)); }
  JsonWriter& value(bool b);
  JsonWriter& null();

  template <typename T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  const std::string& str() const noexcept { return out_; }

  static std::string format_fixed(double d);
  static std::string escape(std::string_view s);

 private:
  struct Frame {
    bool is_array;
    bool inline_items;
    bool empty;
  };
  void before_value();
  void newline();

  std::string out_;
  std::vector<Frame> stack_;
  int indent_;
  bool after_key_ = false;
};

}  // namespace kinekit
