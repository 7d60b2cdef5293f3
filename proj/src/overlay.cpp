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

#include <cmath>

#include "kinekit/qagen.hpp"

namespace kinekit {

RgbImage render_overlay(const RgbImage& frame, std::span<const ColoredBox> boxes, int thickness) {
  if (thickness < 1) throw ValidationError("thickness", "must be >= 1");
  RgbImage out = frame;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box2d& b = boxes[i].box;
    const long x1 = std::lround(b.x1), y1 = std::lround(b.y1);
    const long x2 = std::lround(b.x2), y2 = std::lround(b.y2);
    if (!(std::isfinite(b.x1) && std::isfinite(b.y1) && std::isfinite(b.x2) && std::isfinite(b.y2)) || x1 < 0 ||
        y1 < 0 || x2 > static_cast<long>(frame.width) || y2 > static_cast<long>(frame.height) || x1 > x2 ||
        y1 > y2) {
      throw ValidationError("boxes[" + std::to_string(i) + "]", "outside the " + std::to_string(frame.width) + "x" +
                                                                   std::to_string(frame.height) + " raster");
    }
    for (long v = y1; v < y2; ++v) {
      for (long u = x1; u < x2; ++u) {
        const bool edge = u < x1 + thickness || u >= x2 - thickness || v < y1 + thickness || v >= y2 - thickness;
        if (edge) out.at(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)) = boxes[i].color;
      }
    }
  }
  return out;
}

std::vector<ColoredBox> boxes_at(const SceneManifest& m, double t,
                                 const std::map<std::string, std::string>& colors) {
  std::vector<ColoredBox> out;
  for (const auto& o : m.objects) {
    auto c = colors.find(o.object_id);
    if (c == colors.end() || !o.boxes2d) continue;
    for (const auto& tb : *o.boxes2d) {
      if (std::abs(tb.t - t) < 1e-9) out.push_back({tb.box, palette_rgb(c->second)});
    }
  }
  return out;
}

}  // namespace kinekit
