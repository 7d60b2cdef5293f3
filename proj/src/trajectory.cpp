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

#include "kinekit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kinekit {

namespace {

constexpr double kGridTolerance = 1e-9;

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

Vec3 unit_up(const Vec3& up) {
  const double n = up.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("up", "up axis must be non-zero");
  return up / n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Trajectory

Trajectory Trajectory::make(std::string object_id, ObjectClass cls, double grid_step,
                            long first_index, std::vector<Vec3> positions) {
  IssueList issues;
  if (!(grid_step > 0.0 && std::isfinite(grid_step))) issues.add("grid_step", "must be > 0");
  if (first_index < 0) issues.add("first_index", "must be >= 0");
  if (positions.size() < 2) issues.add("samples", "need at least 2 samples");
  if (positions.size() > kMaxTrajectorySamples) {
    issues.add("samples", "more than " + std::to_string(kMaxTrajectorySamples) + " samples");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].allFinite()) {
      issues.add("samples[" + std::to_string(i) + "]", "non-finite position");
    }
  }
  issues.throw_if_any();
  Trajectory t;
  t.object_id_ = std::move(object_id);
  t.cls_ = cls;
  t.grid_step_ = grid_step;
  t.first_index_ = first_index;
  t.positions_ = std::move(positions);
  return t;
}

bool Trajectory::on_grid(double t) const noexcept {
  const double k = t / grid_step_;
  const double r = std::round(k);
  const long idx = static_cast<long>(r) - first_index_;
  return std::abs(k - r) <= kGridTolerance && idx >= 0 && idx < static_cast<long>(size());
}

std::size_t Trajectory::index_of(double t) const {
  const double k = t / grid_step_;
  const double r = std::round(k);
  if (!std::isfinite(k) || std::abs(k - r) > kGridTolerance) {
    throw KinematicsError("time " + fmt(t) + " s is not on the " + fmt(grid_step_) + " s grid");
  }
  const long idx = static_cast<long>(r) - first_index_;
  if (idx < 0 || idx >= static_cast<long>(size())) {
    throw KinematicsError("time " + fmt(t) + " s is outside the trajectory span [" +
                          fmt(start_time()) + ", " + fmt(end_time()) + "] of " + object_id_);
  }
  return static_cast<std::size_t>(idx);
}

std::vector<TrajectorySample> Trajectory::samples() const {
  std::vector<TrajectorySample> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({time(i), positions_[i]});
  return out;
}

Trajectory Trajectory::with_positions(std::vector<Vec3> positions) const {
  return make(object_id_, cls_, grid_step_, first_index_, std::move(positions));
}

// ---------------------------------------------------------------------------
// resampling

Trajectory resample(std::span<const TimedPoint> raw, const KinematicsConfig& cfg,
                    std::string object_id, ObjectClass cls) {
  if (raw.size() < 2) {
    throw KinematicsError("resample " + object_id + ": need at least 2 raw samples, got " +
                          std::to_string(raw.size()));
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!(raw[i].t > raw[i - 1].t)) {
      throw KinematicsError("resample " + object_id + ": raw samples not strictly increasing at " +
                            std::to_string(i));
    }
  }
  const double step = cfg.grid_step;
  const double t0 = raw.front().t;
  const double tn = raw.back().t;
  const long kmin = static_cast<long>(std::ceil(t0 / step - kGridTolerance));
  const long kmax = static_cast<long>(std::floor(tn / step + kGridTolerance));
  if (kmax - kmin + 1 < 2) {
    throw KinematicsError("resample " + object_id + ": raw span [" + fmt(t0) + ", " + fmt(tn) +
                          "] covers fewer than 2 grid points");
  }

  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(kmax - kmin + 1));
  std::size_t j = 0;
  for (long k = kmin; k <= kmax; ++k) {
    const double g = static_cast<double>(k) * step;
    while (j + 2 < raw.size() && raw[j + 1].t <= g) ++j;
    const TimedPoint& a = raw[j];
    const TimedPoint& b = raw[j + 1];
    const double gap = std::min(std::abs(g - a.t), std::abs(b.t - g));
    if (gap > cfg.max_gap + kGridTolerance) {
      throw KinematicsError("resample " + object_id + ": coverage gap around grid point " +
                            fmt(g) + " s (nearest raw samples at " + fmt(a.t) + " s and " +
                            fmt(b.t) + " s)");
    }
    if (g <= a.t) {
      positions.push_back(a.center);
    } else if (g >= b.t) {
      positions.push_back(b.center);
    } else {
      const double w = (g - a.t) / (b.t - a.t);
      positions.push_back(a.center + w * (b.center - a.center));
    }
  }
  return Trajectory::make(std::move(object_id), cls, step, kmin, std::move(positions));
}

Trajectory resample(const ObjectRecord& obj, const KinematicsConfig& cfg) {
  return resample(obj.samples, cfg, obj.object_id, obj.cls);
}

// ---------------------------------------------------------------------------
// distance and speed

double traveled_distance(const Trajectory& traj, double s, double e) {
  if (!(s < e)) throw KinematicsError("traveled_distance: need s < e, got [" + fmt(s) + ", " + fmt(e) + "]");
  const std::size_t i0 = traj.index_of(s);
  const std::size_t i1 = traj.index_of(e);
  double sum = 0.0;
  for (std::size_t i = i0; i < i1; ++i) sum += (traj.position(i + 1) - traj.position(i)).norm();
  return sum;
}

double speed_mps(const Trajectory& traj, double s, double e) {
  return traveled_distance(traj, s, e) / (e - s);
}

double speed(const Trajectory& traj, double s, double e) { return speed_mps(traj, s, e) * kKmhPerMps; }

// ---------------------------------------------------------------------------
// direction

Vec3 ground_projection(const Vec3& v, const Vec3& up) {
  const Vec3 n = unit_up(up);
  return v - v.dot(n) * n;
}

Vec3 reference_direction(const Trajectory& traj, const KinematicsConfig& cfg) {
  const Vec3 d = ground_projection(traj.position(1) - traj.position(0), cfg.up);
  const double n = d.norm();
  if (n < cfg.epsilon_move) {
    throw KinematicsError("stationary start: first displacement of " + traj.object_id() + " is " +
                          fmt(n) + " m on the ground plane");
  }
  return d / n;
}

double clockwise_angle_deg(const Vec3& reference, const Vec3& v, const Vec3& up) {
  const Vec3 n = unit_up(up);
  // Counter-clockwise about `up` is positive for the cross product, so negate.
  const double sin_part = -reference.cross(v).dot(n);
  const double cos_part = reference.dot(v);
  double deg = rad2deg(std::atan2(sin_part, cos_part));
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

std::optional<double> direction_angle(const Trajectory& traj, double t, const KinematicsConfig& cfg) {
  const std::size_t i = traj.index_of(t);
  if (i + 1 >= traj.size()) {
    throw KinematicsError("direction_angle: no step starts at the last grid time " + fmt(t));
  }
  const Vec3 ref = reference_direction(traj, cfg);
  const Vec3 d = ground_projection(traj.position(i + 1) - traj.position(i), cfg.up);
  if (d.norm() < cfg.epsilon_move) return std::nullopt;
  return clockwise_angle_deg(ref, d, cfg.up);
}

DirectionLabel clock_direction(double angle_deg) {
  int bin = static_cast<int>(std::floor(angle_deg / 30.0 + 0.5)) % 12;
  if (bin < 0) bin += 12;
  return DirectionLabel{bin == 0 ? 12 : bin};
}

std::vector<DirectionLabel> step_labels(const Trajectory& traj, const KinematicsConfig& cfg) {
  const Vec3 ref = reference_direction(traj, cfg);
  std::vector<DirectionLabel> labels;
  labels.reserve(traj.step_count());
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const Vec3 d = ground_projection(traj.position(i + 1) - traj.position(i), cfg.up);
    if (d.norm() < cfg.epsilon_move) {
      labels.push_back(DirectionLabel::stationary());
    } else {
      labels.push_back(clock_direction(clockwise_angle_deg(ref, d, cfg.up)));
    }
  }
  return labels;
}

std::vector<TimeInterval> direction_intervals(const Trajectory& traj, int hour,
                                              const KinematicsConfig& cfg) {
  const auto labels = step_labels(traj, cfg);
  std::vector<TimeInterval> out;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i].hour != hour) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < labels.size() && labels[j + 1].hour == hour) ++j;
    out.push_back({traj.time(i), traj.time(j + 1)});
    i = j + 1;
  }
  return out;
}

std::optional<TimeInterval> longest_interval(std::span<const TimeInterval> intervals) {
  std::optional<TimeInterval> best;
  for (const auto& iv : intervals) {
    if (!best || iv.length() > best->length()) best = iv;
  }
  return best;
}

// ---------------------------------------------------------------------------
// smoothing

namespace {

std::vector<Vec3> sliding(const std::vector<Vec3>& in, int window, bool use_median) {
  if (window <= 1) return in;
  const long radius = window / 2;
  const long n = static_cast<long>(in.size());
  std::vector<Vec3> out(in.size());
  std::vector<double> buf;
  for (long i = 0; i < n; ++i) {
    const long r = std::min({radius, i, n - 1 - i});
    for (int c = 0; c < 3; ++c) {
      buf.clear();
      for (long j = i - r; j <= i + r; ++j) buf.push_back(in[static_cast<std::size_t>(j)][c]);
      double v;
      if (use_median) {
        std::nth_element(buf.begin(), buf.begin() + r, buf.end());
        v = buf[static_cast<std::size_t>(r)];
      } else {
        double sum = 0.0;
        for (double x : buf) sum += x;
        v = sum / static_cast<double>(buf.size());
      }
      out[static_cast<std::size_t>(i)][c] = v;
    }
  }
  return out;
}

}  // namespace

Trajectory smooth(const Trajectory& traj, const SmoothingConfig& cfg) {
  if (cfg.median_window < 1 || cfg.mean_window < 1 || cfg.median_window % 2 == 0 ||
      cfg.mean_window % 2 == 0) {
    throw ValidationError("smoothing", "windows must be odd and >= 1");
  }
  auto p = sliding(traj.positions(), cfg.median_window, true);
  p = sliding(p, cfg.mean_window, false);
  return traj.with_positions(std::move(p));
}

// ---------------------------------------------------------------------------
// plausibility

double SpeedCaps::cap_for(ObjectClass c) const {
  auto it = mps.find(c);
  return it == mps.end() ? 60.0 : it->second;
}

Decision plausibility_filter(const Trajectory& traj, const SpeedCaps& caps) {
  if (traj.size() < caps.min_samples) return Decision::reject("too short");
  const double cap = caps.cap_for(traj.cls());
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double v = (traj.position(i + 1) - traj.position(i)).norm() / traj.grid_step();
    if (v > cap) return Decision::reject("speed cap");
  }
  return Decision::accept();
}

// ---------------------------------------------------------------------------
// comparisons

namespace {

Verdict ratio_verdict(double qa, double qb, double margin) {
  if (qa > qb && qa >= margin * qb) return Verdict::a;
  if (qb > qa && qb >= margin * qa) return Verdict::b;
  return Verdict::ambiguous;
}

}  // namespace

Verdict compare_distance(const Trajectory& a, const Trajectory& b, TimeInterval window,
                         const KinematicsConfig& cfg) {
  return ratio_verdict(traveled_distance(a, window.start, window.end),
                       traveled_distance(b, window.start, window.end), cfg.ratio_margin);
}

Verdict compare_speed(const Trajectory& a, const Trajectory& b, TimeInterval window,
                      const KinematicsConfig& cfg) {
  return ratio_verdict(speed(a, window.start, window.end), speed(b, window.start, window.end),
                       cfg.ratio_margin);
}

double net_direction_angle_deg(const Trajectory& a, const Trajectory& b, TimeInterval window,
                               const KinematicsConfig& cfg) {
  auto net = [&](const Trajectory& t) {
    const Vec3 d = ground_projection(t.position(t.index_of(window.end)) -
                                         t.position(t.index_of(window.start)),
                                     cfg.up);
    if (d.norm() < cfg.epsilon_move) {
      throw KinematicsError("same_direction: " + t.object_id() + " is stationary over [" +
                            fmt(window.start) + ", " + fmt(window.end) + "]");
    }
    return d;
  };
  const Vec3 da = net(a);
  const Vec3 db = net(b);
  return rad2deg(std::atan2(da.cross(db).norm(), da.dot(db)));
}

DirectionVerdict same_direction(const Trajectory& a, const Trajectory& b, TimeInterval window,
                                const KinematicsConfig& cfg) {
  const double phi = net_direction_angle_deg(a, b, window, cfg);
  if (phi <= cfg.same_direction_max_deg) return DirectionVerdict::same;
  if (phi >= cfg.different_direction_min_deg) return DirectionVerdict::different;
  return DirectionVerdict::ambiguous;
}

}  // namespace kinekit
