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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "kinekit/error.hpp"

namespace kinekit {

enum class DepthKind { relative, metric };

/// Row-major per-pixel depth. Values <= 0 or non-finite mark invalid pixels.
struct DepthRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<float> values;
  DepthKind kind = DepthKind::metric;

  DepthRaster() = default;
  DepthRaster(std::uint32_t w, std::uint32_t h, DepthKind k = DepthKind::metric, float fill = 0.0f)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill), kind(k) {}

  std::size_t size() const noexcept { return values.size(); }
  float at(std::uint32_t u, std::uint32_t v) const { return values[index(u, v)]; }
  float& at(std::uint32_t u, std::uint32_t v) { return values[index(u, v)]; }
  std::size_t index(std::uint32_t u, std::uint32_t v) const noexcept {
    return static_cast<std::size_t>(v) * width + u;
  }

  /// Values compare bitwise so NaN sentinels round-trip as equal.
  bool operator==(const DepthRaster& o) const;
};

inline bool is_valid_depth(float d) noexcept { return std::isfinite(d) && d > 0.0f; }

struct BitMask {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1, row-major

  BitMask() = default;
  BitMask(std::uint32_t w, std::uint32_t h, bool fill = false)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  std::size_t size() const noexcept { return bits.size(); }
  bool at(std::uint32_t u, std::uint32_t v) const { return bits[static_cast<std::size_t>(v) * width + u] != 0; }
  void set(std::uint32_t u, std::uint32_t v, bool on = true) {
    bits[static_cast<std::size_t>(v) * width + u] = on ? 1 : 0;
  }
  std::size_t count() const noexcept;

  bool operator==(const BitMask&) const = default;
};

/// Run lengths over the row-major pixel sequence, alternating values and
/// starting with a (possibly empty) run of zeros.
std::vector<std::uint32_t> encode_runs(const BitMask& m);
BitMask decode_runs(std::uint32_t width, std::uint32_t height, std::span<const std::uint32_t> runs);

/// "KDEPTH01", width u32 LE, height u32 LE, then width*height float32 LE.
std::vector<std::uint8_t> encode_depth(const DepthRaster& d);
DepthRaster decode_depth(std::span<const std::uint8_t> bytes, DepthKind kind = DepthKind::metric);
DepthRaster read_depth(const std::filesystem::path& path, DepthKind kind = DepthKind::metric);
void write_depth(const DepthRaster& d, const std::filesystem::path& path);

/// "KMASK001", width u32 LE, height u32 LE, then run lengths as u32 LE.
std::vector<std::uint8_t> encode_mask(const BitMask& m);
BitMask decode_mask(std::span<const std::uint8_t> bytes);
BitMask read_mask(const std::filesystem::path& path);
void write_mask(const BitMask& m, const std::filesystem::path& path);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB frame, row-major. Stored on disk as binary PPM (P6).
struct RgbImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<Rgb> pixels;

  RgbImage() = default;
  RgbImage(std::uint32_t w, std::uint32_t h, Rgb fill = {})
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  const Rgb& at(std::uint32_t u, std::uint32_t v) const { return pixels[static_cast<std::size_t>(v) * width + u]; }
  Rgb& at(std::uint32_t u, std::uint32_t v) { return pixels[static_cast<std::size_t>(v) * width + u]; }

  bool operator==(const RgbImage&) const = default;
};

std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace kinekit
