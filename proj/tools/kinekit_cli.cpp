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

// kinekit command-line tool.
//
// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "kinekit/bench.hpp"
#include "kinekit/config.hpp"
#include "kinekit/eval.hpp"
#include "kinekit/json_writer.hpp"
#include "kinekit/parallel.hpp"
#include "kinekit/qagen.hpp"
#include "kinekit/scene_dir.hpp"
#include "kinekit/synthbench.hpp"

namespace fs = std::filesystem;
using namespace kinekit;

namespace {

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

Config load_config(const Common& c, CLI::App* sub) {
  Config cfg = c.config_path.empty() ? Config{} : read_config(c.config_path);
  if (!c.config_path.empty() && sub->count("--seed") == 0) return cfg;
  cfg.seed = c.seed;
  return cfg;
}

/// Files given directly plus every *.json / *.jsonl inside given directories,
/// directory entries sorted by name.
std::vector<fs::path> expand(const std::vector<std::string>& inputs, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ext) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  return out;
}

std::vector<Task> parse_tasks(const std::vector<std::string>& names) {
  if (names.empty()) return {kAllTasks.begin(), kAllTasks.end()};
  std::vector<Task> tasks;
  for (const auto& n : names) {
    auto t = parse_task(n);
    if (!t) throw ValidationError("--tasks", "unknown task '" + n + "'");
    tasks.push_back(*t);
  }
  return tasks;
}

void print_warnings(const std::vector<std::string>& ws) {
  for (const auto& w : ws) std::cerr << "warning: " << w << "\n";
}

// ---------------------------------------------------------------------------

std::string ground_dump(const SceneManifest& m, const KinematicsConfig& kc) {
  JsonWriter w;
  w.begin_object();
  w.field("scene_id", m.scene_id);
  w.key("objects").begin_array();
  for (const auto& o : m.objects) {
    w.begin_object();
    w.field("object_id", o.object_id);
    w.field("class", std::string(to_string(o.cls)));
    try {
      const Trajectory t = resample(o, kc);
      w.key("span").begin_array(true).value(t.start_time()).value(t.end_time()).end_array();
      w.field("distance_m", traveled_distance(t, t.start_time(), t.end_time()));
      w.field("speed_kmh", speed(t, t.start_time(), t.end_time()));
      w.key("reference");
      try {
        const Vec3 r = reference_direction(t, kc);
        w.begin_array(true).value(r.x()).value(r.y()).value(r.z()).end_array();
        w.key("step_hours").begin_array(true);
        for (const auto& l : step_labels(t, kc)) w.value(l.hour);
        w.end_array();
        w.key("intervals").begin_object();
        for (int h = 1; h <= 12; ++h) {
          const auto iv = direction_intervals(t, h, kc);
          if (iv.empty()) continue;
          w.key(std::to_string(h)).begin_array(true);
          for (const auto& i : iv) w.begin_array(true).value(i.start).value(i.end).end_array();
          w.end_array();
        }
        w.end_object();
      } catch (const KinematicsError& e) {
        w.null();
        w.field("note", std::string(e.what()));
      }
    } catch (const KinematicsError& e) {
      w.field("error", std::string(e.what()));
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinekit: object kinematics grounding, QA generation and evaluation"};
  app.set_version_flag("--version", KINEKIT_VERSION);
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--config", common.config_path, "JSON config file (flags override it)");
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    if (with_jobs) sub->add_option("--jobs", common.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
  };

  // ground
  auto* ground = app.add_subcommand("ground", "Dump kinematics of a manifest");
  std::string ground_in, ground_out;
  ground->add_option("--manifest", ground_in, "Scene manifest")->required();
  ground->add_option("--out", ground_out, "Output JSON (stdout if omitted)");
  add_common(ground, false);

  // pseudo
  auto* pseudo = app.add_subcommand("pseudo", "Scene directory to pseudo-labeled manifest");
  std::string pseudo_scene, pseudo_out;
  pseudo->add_option("--scene", pseudo_scene, "Scene directory")->required();
  pseudo->add_option("--out", pseudo_out, "Output manifest")->required();
  add_common(pseudo, true);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate QA items from manifests");
  std::vector<std::string> gen_in, gen_tasks;
  std::string gen_out;
  gen->add_option("--manifest", gen_in, "Manifest files or directories")->required();
  gen->add_option("--out", gen_out, "Output QA JSONL")->required();
  gen->add_option("--tasks", gen_tasks, "Task subset (default: all seven)");
  add_common(gen, true);

  // balance
  auto* bal = app.add_subcommand("balance", "Cap the number of items per label bin");
  std::vector<std::string> bal_in;
  std::string bal_out;
  std::size_t bal_cap = 0;
  bal->add_option("--in", bal_in, "QA JSONL files")->required();
  bal->add_option("--out", bal_out, "Output JSONL")->required();
  bal->add_option("--cap", bal_cap, "Items per bin (0: smallest bin clamped to [10, quota])")->capture_default_str();
  add_common(bal, false);

  // assemble
  auto* asmb = app.add_subcommand("assemble", "Draw a fixed quota per task");
  std::vector<std::string> asm_in;
  std::string asm_out;
  std::size_t asm_quota = 0;
  bool allow_short = false;
  asmb->add_option("--pool", asm_in, "Balanced JSONL files")->required();
  asmb->add_option("--out", asm_out, "Benchmark JSONL")->required();
  asmb->add_option("--quota", asm_quota, "Items per task (0: config value, default 200)")->capture_default_str();
  asmb->add_flag("--allow-short", allow_short, "Accept pools below quota with a warning");
  add_common(asmb, false);

  // eval
  auto* ev = app.add_subcommand("eval", "Score predictions against a benchmark");
  std::string ev_bench, ev_pred, ev_out, ev_cmd, ev_model = "model";
  ev->add_option("--bench", ev_bench, "Benchmark JSONL")->required();
  ev->add_option("--pred", ev_pred, "Predictions JSONL")->required();
  ev->add_option("--out", ev_out, "Report JSON");
  ev->add_option("--extractor-cmd", ev_cmd, "External extractor command (default: built-in grammar)");
  ev->add_option("--model", ev_model, "Row label in the table")->capture_default_str();
  add_common(ev, true);

  // synth
  auto* syn = app.add_subcommand("synth", "Synthetic fixtures");
  std::string syn_mode = "manifests", syn_out, syn_scenario = "moving";
  int syn_count = 10, syn_frames = 20, syn_erosion = 0;
  double syn_alpha = 2.5, syn_jitter = 0.0;
  bool syn_no_rgb = false;
  syn->add_option("--mode", syn_mode, "manifests | frames")->check(CLI::IsMember({"manifests", "frames"}))->capture_default_str();
  syn->add_option("--out", syn_out, "Output directory")->required();
  syn->add_option("--count", syn_count, "Number of random manifests")->capture_default_str()->check(CLI::Range(1, 100000));
  syn->add_option("--scenario", syn_scenario, "Frame scenario")->check(CLI::IsMember(synth::scenario_names()))->capture_default_str();
  syn->add_option("--frames", syn_frames, "Frames per scenario")->capture_default_str();
  syn->add_option("--alpha", syn_alpha, "Planted relative-to-metric depth scale")->capture_default_str();
  syn->add_option("--depth-jitter", syn_jitter, "Relative depth noise amplitude")->capture_default_str();
  syn->add_option("--mask-erosion", syn_erosion, "Mask erosion in pixels")->capture_default_str();
  syn->add_flag("--no-rgb", syn_no_rgb, "Skip PPM frames");
  add_common(syn, false);

  // overlay
  auto* ov = app.add_subcommand("overlay", "Draw manifest boxes onto scene frames");
  std::string ov_scene, ov_manifest, ov_out;
  int ov_thickness = kOverlayThickness;
  ov->add_option("--scene", ov_scene, "Scene directory with PPM frames")->required();
  ov->add_option("--manifest", ov_manifest, "Manifest with boxes2d")->required();
  ov->add_option("--out", ov_out, "Output directory")->required();
  ov->add_option("--thickness", ov_thickness, "Outline width in pixels")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*ground) {
      const Config cfg = load_config(common, ground);
      const std::string dump = ground_dump(read_manifest(ground_in), cfg.kinematics());
      if (ground_out.empty()) {
        std::cout << dump;
      } else {
        write_text_file(ground_out, dump);
      }
    } else if (*pseudo) {
      const Config cfg = load_config(common, pseudo);
      const PipelineResult r = run_pipeline(fs::path(pseudo_scene), cfg.pipeline, common.jobs);
      print_warnings(r.warnings);
      write_manifest(r.manifest, pseudo_out);
    } else if (*gen) {
      const Config cfg = load_config(common, gen);
      const std::vector<Task> tasks = parse_tasks(gen_tasks);
      const std::vector<fs::path> files = expand(gen_in, ".json");
      const auto manifests = parallel_map(files.size(), common.jobs, [&](std::size_t i) { return read_manifest(files[i]); });
      validate_unique_ids(manifests);
      const auto per_scene = parallel_map(manifests.size(), common.jobs, [&](std::size_t i) {
        return generate(manifests[i], tasks, cfg.seed, cfg.gen);
      });
      std::vector<QaItem> items;
      for (const auto& v : per_scene) items.insert(items.end(), v.begin(), v.end());
      write_dataset(std::move(items), gen_out);
    } else if (*bal) {
      const Config cfg = load_config(common, bal);
      std::vector<QaItem> items;
      for (const auto& f : expand(bal_in, ".jsonl")) {
        auto d = read_dataset(f);
        items.insert(items.end(), d.items.begin(), d.items.end());
      }
      std::map<Task, std::size_t> caps;
      const std::size_t cap = bal_cap ? bal_cap : cfg.cap.value_or(0);
      if (cap) {
        for (Task t : kAllTasks) caps[t] = cap;
      }
      const BalanceResult r = balance(items, caps, cfg.seed, cfg.quota, cfg.bins);
      write_dataset(r.items, bal_out, {balance_header(cfg.seed, r.caps)});
    } else if (*asmb) {
      const Config cfg = load_config(common, asmb);
      AssembleOptions opt;
      opt.quota = asm_quota ? asm_quota : cfg.quota;
      opt.seed = cfg.seed;
      opt.allow_short = allow_short;
      opt.bins = cfg.bins;
      std::vector<QaItem> items;
      for (const auto& f : expand(asm_in, ".jsonl")) {
        auto d = read_dataset(f);
        items.insert(items.end(), d.items.begin(), d.items.end());
        for (const auto& h : d.headers) {
          if (h.kind != "balance_header") continue;
          const auto j = nlohmann::json::parse(h.json);
          if (j.contains("caps") && j["caps"].is_object()) {
            for (const auto& [k, v] : j["caps"].items()) {
              if (auto t = parse_task(k); t && v.is_number_unsigned()) opt.caps[*t] = v.get<std::size_t>();
            }
          }
        }
      }
      const Benchmark b = assemble(pools_by_task(items), opt);
      print_warnings(b.warnings);
      write_dataset(b.items, asm_out, {b.header});
    } else if (*ev) {
      load_config(common, ev);
      const Dataset bench = read_dataset(ev_bench);
      const auto preds = read_predictions(ev_pred);
      GrammarExtractor grammar;
      CommandExtractor command(ev_cmd);
      const Extractor& ex = ev_cmd.empty() ? static_cast<const Extractor&>(grammar) : command;
      const EvalReport r = aggregate(bench.items, preds, ex, common.jobs);
      std::cout << report_table(r, ev_model);
      if (!ev_out.empty()) write_text_file(ev_out, report_to_json(r));
    } else if (*syn) {
      const Config cfg = load_config(common, syn);
      fs::create_directories(syn_out);
      if (syn_mode == "manifests") {
        for (int i = 0; i < syn_count; ++i) {
          const synth::SyntheticScene s = synth::random_scene(cfg.seed, i);
          write_manifest(s.manifest, fs::path(syn_out) / (s.manifest.scene_id + ".json"));
        }
      } else {
        synth::FrameSceneSpec spec = synth::scenario(syn_scenario, syn_frames, syn_alpha);
        spec.depth_jitter = syn_jitter;
        spec.mask_erosion = syn_erosion;
        spec.noise_seed = cfg.seed;
        spec.write_rgb = !syn_no_rgb;
        synth::synth_frames(spec, syn_out);
      }
    } else if (*ov) {
      const SceneIndex idx = read_scene_index(ov_scene);
      const SceneManifest m = read_manifest(ov_manifest);
      const auto colors = assign_colors(m);
      fs::create_directories(ov_out);
      for (const auto& f : idx.frames) {
        if (!f.rgb) continue;
        const RgbImage img = read_ppm(fs::path(ov_scene) / *f.rgb);
        const auto boxes = boxes_at(m, f.t, colors);
        write_ppm(render_overlay(img, boxes, ov_thickness),
                  fs::path(ov_out) / ("frame_" + std::to_string(f.index) + ".overlay.ppm"));
      }
    }
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
