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

#include <cstring>
#include <functional>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "kinekit/raster.hpp"

using namespace kinekit;
using kinekit::test::TempDir;

namespace {

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) | (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::string error_text(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("raster") {
  TEST_CASE("2x2 depth raster layout and round-trip") {
    DepthRaster d(2, 2);
    d.values = {1.0f, 2.0f, 3.0f, 4.0f};
    const auto bytes = encode_depth(d);
    REQUIRE(bytes.size() == 8 + 8 + 16);
    CHECK(std::memcmp(bytes.data(), "KDEPTH01", 8) == 0);
    CHECK(le32(bytes, 8) == 2);
    CHECK(le32(bytes, 12) == 2);
    float third;
    const std::uint32_t raw = le32(bytes, 16 + 8);
    std::memcpy(&third, &raw, 4);
    CHECK(third == 3.0f);
    TempDir dir;
    write_depth(d, dir / "d.d32");
    CHECK(read_depth(dir / "d.d32") == d);
  }

  TEST_CASE("wrong magic is reported") {
    DepthRaster d(2, 2, DepthKind::metric, 1.0f);
    auto bytes = encode_depth(d);
    bytes[0] = 'X';
    CHECK(error_text([&] { decode_depth(bytes); }).find("bad magic") != std::string::npos);
    auto mbytes = encode_mask(BitMask(2, 2));
    mbytes[3] = 'Z';
    CHECK(error_text([&] { decode_mask(mbytes); }).find("bad magic") != std::string::npos);
  }

  TEST_CASE("truncated payload reports expected and actual byte counts") {
    DepthRaster d(3, 2, DepthKind::metric, 1.0f);
    auto bytes = encode_depth(d);
    bytes.resize(bytes.size() - 5);
    const std::string msg = error_text([&] { decode_depth(bytes); });
    CHECK(msg.find("24") != std::string::npos);
    CHECK(msg.find("19") != std::string::npos);
  }

  TEST_CASE("random rasters round-trip bit-exactly, sentinels included") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<float> val(-10.0f, 100.0f);
    for (int i = 0; i < 100; ++i) {
      DepthRaster d(1 + g() % 40, 1 + g() % 30, DepthKind::relative);
      for (auto& v : d.values) {
        const auto r = g() % 20;
        v = r == 0 ? std::numeric_limits<float>::quiet_NaN() : r == 1 ? std::numeric_limits<float>::infinity() : val(g);
      }
      const DepthRaster back = decode_depth(encode_depth(d), DepthKind::relative);
      REQUIRE(back == d);
      REQUIRE(std::memcmp(back.values.data(), d.values.data(), d.values.size() * 4) == 0);
    }
  }

  TEST_CASE("run-length convention") {
    CHECK(encode_runs(BitMask(4, 4)) == std::vector<std::uint32_t>{16});
    BitMask checker(2, 2);
    checker.set(1, 0);
    checker.set(0, 1);
    // row-major 0 1 / 1 0: the two middle ones are adjacent in scan order
    CHECK(encode_runs(checker) == std::vector<std::uint32_t>{1, 2, 1});
    BitMask row(4, 1);
    row.set(1, 0);
    row.set(3, 0);
    CHECK(encode_runs(row) == std::vector<std::uint32_t>{1, 1, 1, 1});
    BitMask full(3, 1, true);
    CHECK(encode_runs(full) == std::vector<std::uint32_t>{0, 3});
  }

  TEST_CASE("run-length sum mismatch is rejected") {
    const std::vector<std::uint32_t> runs = {3, 2};
    CHECK(error_text([&] { decode_runs(2, 2, runs); }).find("run-length sum mismatch") != std::string::npos);
  }

  TEST_CASE("random masks round-trip through files") {
    std::mt19937_64 g(9);
    TempDir dir;
    for (int i = 0; i < 100; ++i) {
      BitMask m(1 + g() % 50, 1 + g() % 50);
      const auto density = g() % 4;
      for (auto& b : m.bits) b = (g() % 4) < density ? 1 : 0;
      write_mask(m, dir / "m.msk");
      REQUIRE(read_mask(dir / "m.msk") == m);
    }
  }

  TEST_CASE("PPM round-trip") {
    RgbImage img(5, 3, Rgb{1, 2, 3});
    img.at(4, 2) = Rgb{255, 0, 128};
    TempDir dir;
    write_ppm(img, dir / "f.ppm");
    CHECK(read_ppm(dir / "f.ppm") == img);
    const auto bytes = encode_ppm(img);
    CHECK(std::string(bytes.begin(), bytes.begin() + 2) == "P6");
  }
}
