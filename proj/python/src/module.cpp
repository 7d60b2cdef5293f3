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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "kinekit/bench.hpp"
#include "kinekit/eval.hpp"
#include "kinekit/interchange.hpp"
#include "kinekit/pseudolabel.hpp"
#include "kinekit/qagen.hpp"
#include "kinekit/synthbench.hpp"
#include "kinekit/trajectory.hpp"

namespace py = pybind11;
using namespace kinekit;

namespace {

using Point = std::tuple<double, double, double>;

Trajectory to_trajectory(const std::vector<Point>& pts, long first_index) {
  std::vector<Vec3> v;
  v.reserve(pts.size());
  for (const auto& [x, y, z] : pts) v.emplace_back(x, y, z);
  return Trajectory::make("py", ObjectClass::other, kGridStep, first_index, std::move(v));
}

Task parse_task_or_throw(const std::string& name) {
  auto t = parse_task(name);
  if (!t) throw ValidationError("task", "unknown task '" + name + "'");
  return *t;
}

std::vector<Task> tasks_from(const std::optional<std::vector<std::string>>& names) {
  if (!names) return {kAllTasks.begin(), kAllTasks.end()};
  std::vector<Task> out;
  for (const auto& n : *names) out.push_back(parse_task_or_throw(n));
  return out;
}

py::bytes to_bytes(const std::vector<std::uint8_t>& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

}  // namespace

PYBIND11_MODULE(_kinekit, m) {
  m.doc() = "Kinematic instruction tuning toolkit: trajectories, QA generation, benchmark assembly, scoring";
  m.attr("__version__") = KINEKIT_VERSION;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<KinematicsError>(m, "KinematicsError", PyExc_ArithmeticError);

  m.attr("TASKS") = [] {
    std::vector<std::string> v;
    for (Task t : kAllTasks) v.emplace_back(to_string(t));
    return v;
  }();

  // manifests and datasets
  m.def("normalize_manifest", [](const std::string& text) { return manifest_to_json(manifest_from_json(text)); },
        py::arg("text"), "Validate a manifest and return its canonical JSON text.");
  m.def("manifest_issues", [](const std::string& text) {
    try {
      return manifest_issues(manifest_from_json(text));
    } catch (const ValidationError& e) {
      return e.issues();
    }
  }, py::arg("text"));
  m.def("read_dataset", [](const std::filesystem::path& p) {
    std::vector<std::string> lines;
    for (const auto& q : read_dataset(p).items) lines.push_back(qa_to_json_line(q));
    return lines;
  }, py::arg("path"), "QA items of a JSONL file as canonical JSON lines.");

  // kinematics on grid trajectories (0.5 s step)
  m.def("traveled_distance", [](const std::vector<Point>& pts, double s, double e, long first_index) {
    return traveled_distance(to_trajectory(pts, first_index), s, e);
  }, py::arg("points"), py::arg("start"), py::arg("end"), py::arg("first_index") = 0);
  m.def("speed_kmh", [](const std::vector<Point>& pts, double s, double e, long first_index) {
    return speed(to_trajectory(pts, first_index), s, e);
  }, py::arg("points"), py::arg("start"), py::arg("end"), py::arg("first_index") = 0);
  m.def("clock_direction", [](double deg) { return clock_direction(deg).hour; }, py::arg("angle_deg"));
  m.def("step_labels", [](const std::vector<Point>& pts) {
    std::vector<int> out;
    for (const auto& l : step_labels(to_trajectory(pts, 0))) out.push_back(l.hour);
    return out;
  }, py::arg("points"), "Clock hour of every step; 0 marks a stationary step.");

  // rasters
  m.def("encode_depth", [](std::uint32_t w, std::uint32_t h, const std::vector<float>& values) {
    DepthRaster d(w, h);
    if (values.size() != d.values.size()) throw ValidationError("values", "expected width*height values");
    d.values = values;
    return to_bytes(encode_depth(d));
  }, py::arg("width"), py::arg("height"), py::arg("values"));
  m.def("decode_depth", [](const py::bytes& b) {
    const DepthRaster d = decode_depth(from_bytes(b));
    return py::make_tuple(d.width, d.height, d.values);
  }, py::arg("data"));
  m.def("mask_runs", [](const py::bytes& b) { return encode_runs(decode_mask(from_bytes(b))); }, py::arg("data"),
        "Run lengths of a KMASK001 blob, starting with a run of zeros.");
  m.def("encode_mask", [](std::uint32_t w, std::uint32_t h, const std::vector<std::uint32_t>& runs) {
    return to_bytes(encode_mask(decode_runs(w, h, runs)));
  }, py::arg("width"), py::arg("height"), py::arg("runs"));

  // question generation and benchmark assembly
  m.def("generate", [](const std::string& manifest, std::uint64_t seed, std::optional<std::vector<std::string>> tasks) {
    const auto ts = tasks_from(tasks);
    std::vector<std::string> lines;
    for (const auto& q : generate(manifest_from_json(manifest), ts, seed)) lines.push_back(qa_to_json_line(q));
    return lines;
  }, py::arg("manifest"), py::arg("seed") = 0, py::arg("tasks") = py::none());
  m.def("common_prompt", [](double duration, const std::vector<double>& ts, const std::vector<std::string>& colors) {
    return common_prompt(duration, ts, colors);
  }, py::arg("duration"), py::arg("timestamps"), py::arg("colors"));
  m.def("assemble", [](const std::vector<std::string>& lines, std::size_t quota, std::uint64_t seed, bool allow_short) {
    std::vector<QaItem> items;
    for (const auto& l : lines) items.push_back(qa_from_json_line(l));
    AssembleOptions opt;
    opt.quota = quota;
    opt.seed = seed;
    opt.allow_short = allow_short;
    const Benchmark b = assemble(pools_by_task(items), opt);
    std::vector<std::string> out{b.header};
    for (const auto& q : b.items) out.push_back(qa_to_json_line(q));
    return out;
  }, py::arg("lines"), py::arg("quota") = kDefaultQuota, py::arg("seed") = 0, py::arg("allow_short") = false,
     "Header line followed by the drawn items.");

  // scoring
  m.def("extract_answer", [](const std::string& task, const std::string& response) -> std::optional<std::string> {
    auto a = extract_answer(parse_task_or_throw(task), response);
    if (!a) return std::nullopt;
    return answer_to_json_text(*a);
  }, py::arg("task"), py::arg("response"), "Typed answer as JSON text, or None when unparsed.");
  m.def("score_scalar", [](double y, double yhat) {
    const auto s = score_scalar(y, yhat);
    return py::make_tuple(s.correct, s.abs_err);
  }, py::arg("y"), py::arg("yhat"));
  m.def("score_clock", [](int y, int yhat) {
    const auto s = score_clock(y, yhat);
    return py::make_tuple(s.correct, s.err);
  }, py::arg("y"), py::arg("yhat"));
  m.def("interval_iou", [](double s1, double e1, double s2, double e2) {
    return interval_iou({s1, e1}, {s2, e2});
  }, py::arg("start_a"), py::arg("end_a"), py::arg("start_b"), py::arg("end_b"));
  m.def("evaluate", [](const std::filesystem::path& bench, const std::filesystem::path& preds, unsigned jobs) {
    py::gil_scoped_release nogil;
    return report_to_json(aggregate(read_dataset(bench).items, read_predictions(preds), GrammarExtractor{}, jobs));
  }, py::arg("bench"), py::arg("predictions"), py::arg("jobs") = 1, "Report JSON text.");

  // synthetic scenes and pseudo-labels
  m.def("synth_frames", [](const std::string& scenario, const std::filesystem::path& out, int frames, double alpha) {
    py::gil_scoped_release nogil;
    synth::synth_frames(synth::scenario(scenario, frames, alpha), out);
  }, py::arg("scenario"), py::arg("out_dir"), py::arg("frames") = 20, py::arg("alpha") = 2.5);
  m.def("random_manifest", [](std::uint64_t seed, int index) {
    return manifest_to_json(synth::random_scene(seed, index).manifest);
  }, py::arg("seed"), py::arg("index"));
  m.def("pseudo_label", [](const std::filesystem::path& scene_dir, unsigned jobs) {
    PipelineResult r;
    {
      py::gil_scoped_release nogil;
      r = run_pipeline(scene_dir, {}, jobs);
    }
    return py::make_tuple(manifest_to_json(r.manifest), r.alpha.alpha, r.warnings);
  }, py::arg("scene_dir"), py::arg("jobs") = 1, "(manifest JSON, scene scale, warnings)");
}
