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

#include "kinekit/synthbench.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>

#include "kinekit/pseudolabel.hpp"
#include "kinekit/scene_dir.hpp"

namespace kinekit::synth {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double d) { return d * kPi / 180.0; }

Vec3 planar(double heading_deg) {
  const double h = deg2rad(heading_deg);
  return Vec3(std::cos(h), std::sin(h), 0.0);
}

struct Segment {
  double begin;
  double end;
  double heading_deg;
  double speed;
  Vec3 origin;
};

/// Piecewise scripts as explicit segments, each starting where the previous ended.
std::vector<Segment> segments(const MotionScript& s) {
  std::vector<Turn> turns = s.turns;
  std::sort(turns.begin(), turns.end(), [](const Turn& a, const Turn& b) { return a.at < b.at; });
  std::vector<Segment> out;
  Segment cur{s.t_begin, s.t_end, s.heading_deg, s.speed, s.start};
  for (const Turn& turn : turns) {
    if (turn.at <= cur.begin || turn.at >= s.t_end) continue;
    cur.end = turn.at;
    out.push_back(cur);
    const Vec3 next_origin = cur.origin + cur.speed * (turn.at - cur.begin) * planar(cur.heading_deg);
    cur = Segment{turn.at, s.t_end, cur.heading_deg - turn.clockwise_deg,
                  turn.speed >= 0.0 ? turn.speed : cur.speed, next_origin};
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void MotionScript::validate() const {
  IssueList issues;
  const std::string p = "script(" + object_id + ")";
  if (object_id.empty()) issues.add(p + ".object_id", "must be non-empty");
  if (!(speed >= 0.0 && std::isfinite(speed))) issues.add(p + ".speed", "must be >= 0");
  if (primitive == Primitive::circle && !(radius > 0.0)) issues.add(p + ".radius", "must be > 0");
  if (!(t_begin >= 0.0 && t_end > t_begin)) issues.add(p + ".span", "need 0 <= t_begin < t_end");
  if (t_end - t_begin > kMaxDuration) issues.add(p + ".span", "longer than 20 s");
  if (!start.allFinite()) issues.add(p + ".start", "non-finite");
  for (const auto& t : turns) {
    if (t.speed >= 0.0 && !std::isfinite(t.speed)) issues.add(p + ".turns", "non-finite speed");
  }
  issues.throw_if_any();
}

Vec3 MotionScript::position(double t) const {
  const double tau = std::clamp(t, t_begin, t_end) - t_begin;
  switch (primitive) {
    case Primitive::constant_velocity:
      return start + speed * tau * planar(heading_deg);
    case Primitive::circle: {
      const double omega = speed / radius;
      const double side = clockwise ? -1.0 : 1.0;
      const double phi0 = deg2rad(heading_deg) - side * kPi / 2.0;
      const Vec3 center = start - radius * Vec3(std::cos(phi0), std::sin(phi0), 0.0);
      const double phi = phi0 + side * omega * tau;
      return center + radius * Vec3(std::cos(phi), std::sin(phi), 0.0);
    }
    case Primitive::piecewise: {
      const double tc = tau + t_begin;
      for (const Segment& seg : segments(*this)) {
        if (tc <= seg.end) return seg.origin + seg.speed * (tc - seg.begin) * planar(seg.heading_deg);
      }
      return start;
    }
  }
  return start;
}

double MotionScript::path_length(double s, double e) const {
  const double a = std::clamp(s, t_begin, t_end);
  const double b = std::clamp(e, t_begin, t_end);
  if (b <= a) return 0.0;
  if (primitive != Primitive::piecewise) return speed * (b - a);
  double total = 0.0;
  for (const Segment& seg : segments(*this)) {
    const double lo = std::max(a, seg.begin);
    const double hi = std::min(b, seg.end);
    if (hi > lo) total += seg.speed * (hi - lo);
  }
  return total;
}

Vec3 MotionScript::heading(double t) const {
  const double tc = std::clamp(t, t_begin, t_end);
  switch (primitive) {
    case Primitive::constant_velocity:
      return planar(heading_deg);
    case Primitive::circle: {
      const double side = clockwise ? -1.0 : 1.0;
      const double turned = side * (speed / radius) * (tc - t_begin);
      return planar(heading_deg + turned * 180.0 / kPi);
    }
    case Primitive::piecewise:
      for (const Segment& seg : segments(*this)) {
        if (tc < seg.end || seg.end >= t_end) return planar(seg.heading_deg);
      }
      return planar(heading_deg);
  }
  return planar(heading_deg);
}

SyntheticScene synth_manifest(const std::vector<MotionScript>& scripts, const ManifestOptions& opt) {
  if (!(opt.dt > 0.0)) throw ValidationError("dt", "must be > 0");
  SyntheticScene scene;
  SceneManifest& m = scene.manifest;
  m.scene_id = opt.scene_id;
  m.domain = opt.domain;
  m.duration = opt.duration;
  for (std::size_t k = 0; k < kMaxFrames; ++k) {
    const double t = 0.5 * static_cast<double>(k);
    if (t > opt.duration + 1e-9) break;
    m.frame_timestamps.push_back(t);
  }
  for (const auto& s : scripts) {
    s.validate();
    if (s.t_end > opt.duration + 1e-9) {
      throw ValidationError("script(" + s.object_id + ").t_end", "beyond the scene duration");
    }
    ObjectRecord o;
    o.object_id = s.object_id;
    o.cls = s.cls;
    o.source = Source::lidar;
    o.confidence = 1.0;
    for (long k = 0;; ++k) {
      const double t = s.t_begin + static_cast<double>(k) * opt.dt;
      if (t > s.t_end + 1e-9) break;
      o.samples.push_back({t, s.position(t)});
    }
    m.objects.push_back(std::move(o));
    scene.truth.push_back(AnalyticTruth{s});
  }
  validate(m);
  return scene;
}

SyntheticScene random_scene(std::uint64_t seed, int index) {
  Rng rng(derive_seed(seed, "scene/" + std::to_string(index)));
  static constexpr std::array<Domain, 3> domains = {Domain::driving, Domain::sports, Domain::general};
  ManifestOptions opt;
  char id[32];
  std::snprintf(id, sizeof(id), "synth_%04d", index);
  opt.scene_id = id;
  opt.domain = domains[rng.index(domains.size())];
  const int frames = 10 + static_cast<int>(rng.index(31));  // 10..40
  opt.duration = 0.5 * (frames - 1);
  opt.dt = rng.index(4) == 0 ? 0.25 : 0.5;

  const int n_objects = 1 + static_cast<int>(rng.index(4));
  std::vector<MotionScript> scripts;
  for (int i = 0; i < n_objects; ++i) {
    MotionScript s;
    s.object_id = "obj_" + std::to_string(i);
    if (opt.domain == Domain::sports) {
      s.cls = rng.index(5) == 0 ? ObjectClass::other : ObjectClass::person;
    } else {
      static constexpr std::array<ObjectClass, 7> classes = {
          ObjectClass::car,     ObjectClass::car,    ObjectClass::bus,  ObjectClass::truck,
          ObjectClass::bicycle, ObjectClass::person, ObjectClass::motorcycle};
      s.cls = classes[rng.index(classes.size())];
    }
    const double vmax = s.cls == ObjectClass::person ? 6.0 : 15.0;
    s.speed = rng.index(7) == 0 ? 0.0 : rng.uniform(0.5, vmax);
    s.heading_deg = rng.uniform(-180.0, 180.0);
    s.start = Vec3(rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0), 0.0);
    // Most objects span the clip; some enter late or leave early.
    const double span_steps = opt.duration / 0.5;
    long first = 0;
    long last = static_cast<long>(span_steps);
    if (span_steps >= 12 && rng.index(4) == 0) {
      first = static_cast<long>(rng.index(static_cast<std::size_t>(span_steps / 3)));
      last = static_cast<long>(span_steps) - static_cast<long>(rng.index(static_cast<std::size_t>(span_steps / 3)));
    }
    s.t_begin = 0.5 * static_cast<double>(first);
    s.t_end = 0.5 * static_cast<double>(last);
    switch (rng.index(3)) {
      case 0:
        s.primitive = Primitive::constant_velocity;
        break;
      case 1:
        s.primitive = Primitive::circle;
        s.radius = rng.uniform(5.0, 30.0);
        s.clockwise = rng.index(2) == 0;
        break;
      default: {
        s.primitive = Primitive::piecewise;
        // Turns land on clock-bin centers; a 45 degree turn would sit on a bin edge.
        static constexpr std::array<double, 6> angles = {90.0, -90.0, 60.0, -60.0, 180.0, 120.0};
        const int n_turns = 1 + static_cast<int>(rng.index(2));
        for (int k = 0; k < n_turns; ++k) {
          Turn t;
          t.at = s.t_begin + 0.5 * static_cast<double>(1 + rng.index(static_cast<std::size_t>(std::max(1L, last - first - 1))));
          t.clockwise_deg = angles[rng.index(angles.size())];
          if (rng.index(3) == 0) t.speed = rng.uniform(0.5, vmax);
          s.turns.push_back(t);
        }
        break;
      }
    }
    scripts.push_back(std::move(s));
  }
  return synth_manifest(scripts, opt);
}

// ---------------------------------------------------------------------------
// rendering

Mat3 forward_looking_rotation() {
  Mat3 r;
  // columns: images of camera x (right), y (down), z (forward) in world
  r.col(0) = Vec3(0.0, -1.0, 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(1.0, 0.0, 0.0);
  return r;
}

CameraPose CameraPath::pose_at(double t) const {
  return CameraPose::make(rotation, start + velocity * t);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hit_sphere(const Vec3& o, const Vec3& d, const Vec3& c, double r) {
  const Vec3 oc = o - c;
  const double a = d.dot(d);
  const double b = 2.0 * oc.dot(d);
  const double cc = oc.dot(oc) - r * r;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) / (2.0 * a);
  if (t0 > 0.0) return t0;
  const double t1 = (-b + sq) / (2.0 * a);
  return t1 > 0.0 ? t1 : kInf;
}

double hit_box(const Vec3& o, const Vec3& d, const Vec3& c, const Vec3& half) {
  double tmin = -kInf;
  double tmax = kInf;
  for (int i = 0; i < 3; ++i) {
    const double lo = c[i] - half[i];
    const double hi = c[i] + half[i];
    if (std::abs(d[i]) < 1e-15) {
      if (o[i] < lo || o[i] > hi) return kInf;
      continue;
    }
    double t1 = (lo - o[i]) / d[i];
    double t2 = (hi - o[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  if (tmax < tmin || tmax <= 0.0) return kInf;
  return tmin > 0.0 ? tmin : tmax;
}

BitMask erode(const BitMask& m) {
  BitMask out = m;
  for (std::uint32_t v = 0; v < m.height; ++v) {
    for (std::uint32_t u = 0; u < m.width; ++u) {
      if (!m.at(u, v)) continue;
      const bool interior = u > 0 && v > 0 && u + 1 < m.width && v + 1 < m.height &&
                            m.at(u - 1, v) && m.at(u + 1, v) && m.at(u, v - 1) && m.at(u, v + 1);
      if (!interior) out.set(u, v, false);
    }
  }
  return out;
}

struct RenderedFrame {
  FramePackage package;
  RgbImage rgb;
};

RenderedFrame render_one(const FrameSceneSpec& spec, std::size_t frame_index) {
  const double t = spec.frame_times[frame_index];
  const CameraPose pose = spec.camera.pose_at(t);
  const Mat3& rot = pose.rotation();
  const Vec3& o = pose.translation();
  const auto& k = spec.intrinsics;

  std::vector<Vec3> centers;
  for (const auto& obj : spec.objects) centers.push_back(obj.motion.position(t));

  RenderedFrame out;
  FramePackage& f = out.package;
  f.t = t;
  f.intrinsics = k;
  f.pose = pose;
  f.metric_depth = DepthRaster(spec.width, spec.height, DepthKind::metric);
  f.relative_depth = DepthRaster(spec.width, spec.height, DepthKind::relative);
  out.rgb = RgbImage(spec.width, spec.height);
  std::vector<BitMask> masks(spec.objects.size(), BitMask(spec.width, spec.height));

  for (std::uint32_t v = 0; v < spec.height; ++v) {
    for (std::uint32_t u = 0; u < spec.width; ++u) {
      const Vec3 dc((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
      const Vec3 d = rot * dc;
      double best = kInf;
      int hit = -1;  // -1 background
      Rgb color{0, 0, 0};
      if (d.z() < 0.0) {
        const double lam = -o.z() / d.z();
        if (lam > 0.0 && lam < best) {
          best = lam;
          color = Rgb{96, 110, 80};
        }
      }
      if (d.x() > 0.0) {
        const double lam = (spec.backdrop_x - o.x()) / d.x();
        if (lam > 0.0 && lam < best) {
          best = lam;
          color = Rgb{150, 180, 210};
        }
      }
      for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        const SceneObject& obj = spec.objects[i];
        const double lam = obj.shape == Shape::sphere ? hit_sphere(o, d, centers[i], obj.size.x())
                                                      : hit_box(o, d, centers[i], obj.size);
        if (lam < best) {
          best = lam;
          hit = static_cast<int>(i);
          color = obj.color;
        }
      }
      if (std::isfinite(best)) {
        // dc has unit z, so the ray parameter is the depth along the optical axis.
        f.metric_depth.at(u, v) = static_cast<float>(best);
        f.relative_depth.at(u, v) = static_cast<float>(best / spec.planted_alpha);
      }
      if (hit >= 0) masks[static_cast<std::size_t>(hit)].set(u, v);
      out.rgb.at(u, v) = color;
    }
  }

  if (spec.depth_jitter > 0.0) {
    Rng rng(derive_seed(spec.noise_seed, "jitter/" + std::to_string(frame_index)));
    for (float& r : f.relative_depth.values) {
      if (is_valid_depth(r)) r = static_cast<float>(r * (1.0 + spec.depth_jitter * (2.0 * rng.uniform() - 1.0)));
    }
  }

  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& obj = spec.objects[i];
    BitMask mask = masks[i];
    for (int e = 0; e < spec.mask_erosion; ++e) mask = erode(mask);
    const Vec3 pc = rot.transpose() * (centers[i] - o);
    bool inside = pc.z() > 0.0;
    if (inside) {
      const Eigen::Vector2d px = project(pc, k);
      inside = px.x() >= 0.0 && px.x() < spec.width && px.y() >= 0.0 && px.y() < spec.height;
    }
    if (!inside || mask.count() == 0) {
      throw ValidationError("frame " + std::to_string(frame_index),
                            "object " + obj.motion.object_id + " leaves the frustum at t = " +
                                std::to_string(t));
    }
    std::uint32_t umin = spec.width, vmin = spec.height, umax = 0, vmax = 0;
    for (std::uint32_t v = 0; v < spec.height; ++v) {
      for (std::uint32_t u = 0; u < spec.width; ++u) {
        if (!mask.at(u, v)) continue;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
    Detection det;
    det.track_id = obj.motion.object_id;
    det.cls = obj.motion.cls;
    det.confidence = obj.confidence;
    det.mask = std::move(mask);
    det.box = Box2d{static_cast<double>(umin), static_cast<double>(vmin),
                    static_cast<double>(umax + 1), static_cast<double>(vmax + 1)};
    f.detections.push_back(std::move(det));
  }
  return out;
}

}  // namespace

std::vector<FramePackage> render_frames(const FrameSceneSpec& spec) {
  std::vector<FramePackage> frames;
  for (std::size_t i = 0; i < spec.frame_times.size(); ++i) frames.push_back(render_one(spec, i).package);
  return frames;
}

std::vector<RgbImage> render_rgb(const FrameSceneSpec& spec) {
  std::vector<RgbImage> images;
  for (std::size_t i = 0; i < spec.frame_times.size(); ++i) images.push_back(render_one(spec, i).rgb);
  return images;
}

void synth_frames(const FrameSceneSpec& spec, const std::filesystem::path& out_dir) {
  for (const auto& obj : spec.objects) obj.motion.validate();
  std::filesystem::create_directories(out_dir);
  SceneIndex idx;
  idx.scene_id = spec.scene_id;
  idx.domain = spec.domain;
  idx.duration = spec.duration;
  idx.width = spec.width;
  idx.height = spec.height;
  for (std::size_t i = 0; i < spec.frame_times.size(); ++i) {
    const RenderedFrame r = render_one(spec, i);
    const SceneFrameEntry entry = default_frame_entry(static_cast<int>(i), spec.frame_times[i], spec.write_rgb);
    write_frame(r.package, out_dir, entry);
    if (entry.rgb) write_ppm(r.rgb, out_dir / *entry.rgb);
    idx.frames.push_back(entry);
  }
  write_scene_index(idx, out_dir);
}

std::vector<std::string> scenario_names() { return {"moving", "static", "two_object", "low_conf"}; }

FrameSceneSpec scenario(const std::string& name, int frames, double planted_alpha) {
  if (frames < 2 || frames > static_cast<int>(kMaxFrames)) {
    throw ValidationError("frames", "must lie in 2..40");
  }
  FrameSceneSpec spec;
  spec.scene_id = "synth_" + name;
  spec.planted_alpha = planted_alpha;
  for (int k = 0; k < frames; ++k) spec.frame_times.push_back(0.5 * k);
  spec.duration = spec.frame_times.back();
  const double T = spec.duration;
  spec.camera.rotation = forward_looking_rotation();

  if (name == "moving" || name == "low_conf") {
    // The camera follows at 8 m/s so the 10 m/s object drifts slowly across the view.
    spec.camera.start = Vec3(0.0, 0.0, 1.5);
    spec.camera.velocity = Vec3(0.0, 8.0, 0.0);
    SceneObject obj;
    obj.motion.object_id = "car_0";
    obj.motion.cls = ObjectClass::car;
    obj.motion.start = Vec3(15.0, -T, 1.5);
    obj.motion.heading_deg = 90.0;
    obj.motion.speed = 10.0;
    obj.motion.t_end = T;
    obj.shape = Shape::sphere;
    obj.size = Vec3(1.5, 1.5, 1.5);
    obj.color = Rgb{200, 40, 40};
    if (name == "low_conf") obj.confidence = 0.3;
    spec.objects.push_back(obj);
  } else if (name == "static") {
    spec.camera.start = Vec3(0.0, -T, 1.5);
    spec.camera.velocity = Vec3(0.0, 2.0, 0.0);
    SceneObject obj;
    obj.motion.object_id = "car_0";
    obj.motion.cls = ObjectClass::car;
    obj.motion.start = Vec3(15.0, 0.0, 1.5);
    obj.motion.speed = 0.0;
    obj.motion.t_end = T;
    obj.shape = Shape::sphere;
    obj.size = Vec3(1.5, 1.5, 1.5);
    obj.color = Rgb{40, 40, 200};
    spec.objects.push_back(obj);
  } else if (name == "two_object") {
    spec.domain = Domain::general;
    spec.camera.start = Vec3(0.0, 0.0, 1.5);
    SceneObject car;
    car.motion.object_id = "car_0";
    car.motion.cls = ObjectClass::car;
    car.motion.start = Vec3(16.0, -1.5, 0.8);
    car.motion.heading_deg = -70.0;
    car.motion.speed = 1.5;
    car.motion.t_end = T;
    car.shape = Shape::box;
    car.size = Vec3(2.0, 1.0, 0.8);
    car.color = Rgb{200, 40, 40};
    SceneObject person;
    person.motion.object_id = "person_0";
    person.motion.cls = ObjectClass::person;
    person.motion.start = Vec3(18.0, 4.0, 1.0);
    person.motion.heading_deg = 180.0;
    person.motion.speed = 1.2;
    person.motion.t_end = T;
    person.shape = Shape::sphere;
    person.size = Vec3(1.0, 1.0, 1.0);
    person.color = Rgb{40, 200, 40};
    spec.objects.push_back(car);
    spec.objects.push_back(person);
  } else {
    throw ValidationError("scenario", "unknown scenario '" + name + "'");
  }
  return spec;
}

}  // namespace kinekit::synth
