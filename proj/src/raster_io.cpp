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

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "kinekit/raster.hpp"

namespace kinekit {

namespace {

constexpr std::string_view kDepthMagic = "KDEPTH01";
constexpr std::string_view kMaskMagic = "KMASK001";
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

void put_header(std::vector<std::uint8_t>& out, std::string_view magic, std::uint32_t w,
                std::uint32_t h) {
  out.insert(out.end(), magic.begin(), magic.end());
  put_u32(out, w);
  put_u32(out, h);
}

void check_header(std::span<const std::uint8_t> b, std::string_view magic) {
  if (b.size() < magic.size() ||
      !std::equal(magic.begin(), magic.end(), b.begin(),
                  [](char c, std::uint8_t x) { return static_cast<std::uint8_t>(c) == x; })) {
    throw ValidationError("header", "bad magic (expected " + std::string(magic) + ")");
  }
  if (b.size() < kHeaderSize) {
    throw ValidationError("header", "truncated header: expected " + std::to_string(kHeaderSize) +
                                        " bytes, got " + std::to_string(b.size()));
  }
}

}  // namespace

bool DepthRaster::operator==(const DepthRaster& o) const {
  return width == o.width && height == o.height && kind == o.kind &&
         values.size() == o.values.size() &&
         std::memcmp(values.data(), o.values.data(), values.size() * sizeof(float)) == 0;
}

std::size_t BitMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<std::uint32_t> encode_runs(const BitMask& m) {
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  for (std::uint8_t b : m.bits) {
    const std::uint8_t bit = b ? 1 : 0;
    if (bit != current) {
      runs.push_back(length);
      current = bit;
      length = 0;
    }
    ++length;
  }
  if (!m.bits.empty()) runs.push_back(length);
  return runs;
}

BitMask decode_runs(std::uint32_t width, std::uint32_t height, std::span<const std::uint32_t> runs) {
  const std::uint64_t expected = static_cast<std::uint64_t>(width) * height;
  std::uint64_t total = 0;
  for (std::uint32_t r : runs) total += r;
  if (total != expected) {
    throw ValidationError("runs", "run-length sum mismatch: runs cover " + std::to_string(total) +
                                      " pixels, width*height = " + std::to_string(expected));
  }
  BitMask m(width, height);
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t r : runs) {
    std::fill_n(m.bits.begin() + static_cast<std::ptrdiff_t>(pos), r, value);
    pos += r;
    value ^= 1;
  }
  return m;
}

std::vector<std::uint8_t> encode_depth(const DepthRaster& d) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + d.values.size() * 4);
  put_header(out, kDepthMagic, d.width, d.height);
  for (float v : d.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

DepthRaster decode_depth(std::span<const std::uint8_t> bytes, DepthKind kind) {
  check_header(bytes, kDepthMagic);
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t h = get_u32(bytes, 12);
  const std::uint64_t expected = static_cast<std::uint64_t>(w) * h * 4;
  const std::uint64_t actual = bytes.size() - kHeaderSize;
  if (actual != expected) {
    throw ValidationError("payload", "truncated payload: expected " + std::to_string(expected) +
                                         " bytes, got " + std::to_string(actual));
  }
  DepthRaster d(w, h, kind);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    d.values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * i));
  }
  return d;
}

std::vector<std::uint8_t> encode_mask(const BitMask& m) {
  std::vector<std::uint8_t> out;
  put_header(out, kMaskMagic, m.width, m.height);
  for (std::uint32_t r : encode_runs(m)) put_u32(out, r);
  return out;
}

BitMask decode_mask(std::span<const std::uint8_t> bytes) {
  check_header(bytes, kMaskMagic);
  const std::uint32_t w = get_u32(bytes, 8);
  const std::uint32_t h = get_u32(bytes, 12);
  const std::size_t payload = bytes.size() - kHeaderSize;
  if (payload % 4 != 0) {
    throw ValidationError("payload", "run payload of " + std::to_string(payload) +
                                         " bytes is not a multiple of 4");
  }
  std::vector<std::uint32_t> runs(payload / 4);
  for (std::size_t i = 0; i < runs.size(); ++i) runs[i] = get_u32(bytes, kHeaderSize + 4 * i);
  return decode_runs(w, h, runs);
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.pixels.size() * 3);
  for (const Rgb& p : img.pixels) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space();
    std::uint64_t v = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 0xffffffffULL) throw ValidationError("ppm", std::string(what) + " too large");
      ++pos;
    }
    if (pos == start) throw ValidationError("ppm", std::string("missing ") + what);
    return static_cast<std::uint32_t>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ValidationError("ppm", "bad magic (expected P6)");
  }
  pos = 2;
  const std::uint32_t w = read_int("width");
  const std::uint32_t h = read_int("height");
  const std::uint32_t maxval = read_int("maxval");
  if (maxval != 255) throw ValidationError("ppm", "only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw ValidationError("ppm", "missing separator before pixel data");
  }
  ++pos;
  const std::uint64_t expected = static_cast<std::uint64_t>(w) * h * 3;
  if (bytes.size() - pos != expected) {
    throw ValidationError("ppm", "pixel payload: expected " + std::to_string(expected) +
                                     " bytes, got " + std::to_string(bytes.size() - pos));
  }
  RgbImage img(w, h);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = Rgb{bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
  }
  return img;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

template <typename T, typename Decode>
T read_with_origin(const std::filesystem::path& path, Decode&& decode) {
  const auto bytes = read_binary_file(path);
  try {
    return decode(std::span<const std::uint8_t>(bytes));
  } catch (const ValidationError& e) {
    std::vector<std::string> issues;
    for (const auto& i : e.issues()) issues.push_back(path.string() + " " + i);
    throw ValidationError(std::move(issues));
  }
}

}  // namespace

DepthRaster read_depth(const std::filesystem::path& path, DepthKind kind) {
  return read_with_origin<DepthRaster>(path, [kind](auto b) { return decode_depth(b, kind); });
}

void write_depth(const DepthRaster& d, const std::filesystem::path& path) {
  write_binary_file(path, encode_depth(d));
}

BitMask read_mask(const std::filesystem::path& path) {
  return read_with_origin<BitMask>(path, [](auto b) { return decode_mask(b); });
}

void write_mask(const BitMask& m, const std::filesystem::path& path) {
  write_binary_file(path, encode_mask(m));
}

RgbImage read_ppm(const std::filesystem::path& path) {
  return read_with_origin<RgbImage>(path, [](auto b) { return decode_ppm(b); });
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  write_binary_file(path, encode_ppm(img));
}

}  // namespace kinekit
