# Copyright 2026 The kinekit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import struct

import pytest

import kinekit


def test_version_and_tasks():
    assert kinekit.__version__ == "0.1.0"
    assert len(kinekit.TASKS) == 7
    assert kinekit.TASKS[0] == "traveled_distance"


def test_kinematics_on_a_polyline():
    pts = [(0, 0, 0), (3, 4, 0), (3, 4, 0), (6, 8, 0)]
    assert kinekit.traveled_distance(pts, 0.0, 1.5) == pytest.approx(10.0)
    assert kinekit.speed_kmh(pts, 0.0, 1.5) == pytest.approx(10.0 / 1.5 * 3.6)
    assert kinekit.step_labels([(0, 0, 0), (0, 1, 0), (1, 1, 0)]) == [12, 3]
    assert [kinekit.clock_direction(a) for a in (0, 15, 90, 346)] == [12, 1, 3, 12]
    with pytest.raises(kinekit.KinematicsError):
        kinekit.traveled_distance(pts, 0.25, 1.0)


def test_depth_file_written_by_hand_decodes(tmp_path):
    values = [1.0, 2.5, float("nan"), 4.0, 0.0, 6.0]
    blob = b"KDEPTH01" + struct.pack("<II", 3, 2) + struct.pack("<6f", *values)
    (tmp_path / "d.d32").write_bytes(blob)
    w, h, back = kinekit.decode_depth((tmp_path / "d.d32").read_bytes())
    assert (w, h) == (3, 2)
    assert back[1] == 2.5 and math.isnan(back[2])
    assert kinekit.encode_depth(3, 2, values)[16:] == blob[16:]
    with pytest.raises(kinekit.ValidationError):
        kinekit.decode_depth(blob[:-3])


def test_mask_runs():
    blob = kinekit.encode_mask(2, 2, [1, 2, 1])
    assert blob[:8] == b"KMASK001"
    assert kinekit.mask_runs(blob) == [1, 2, 1]
    with pytest.raises(ValueError):
        kinekit.encode_mask(2, 2, [3, 2])


def test_generation_and_assembly():
    manifest = kinekit.random_manifest(4, 0)
    assert json.loads(kinekit.normalize_manifest(manifest)) == json.loads(manifest)
    lines = []
    for i in range(40):
        lines += kinekit.generate(kinekit.random_manifest(4, i), seed=4)
    items = [json.loads(x) for x in lines]
    assert items and all(q["question"].startswith("The video lasts for") for q in items)
    out = kinekit.assemble(lines, quota=3, seed=1, allow_short=True)
    header = json.loads(out[0])
    assert header["kind"] == "benchmark_header"
    assert len(out) - 1 == sum(header["counts"].values())
    assert kinekit.generate(manifest, seed=4) == kinekit.generate(manifest, seed=4)


def test_manifest_issues_are_listed():
    bad = json.loads(kinekit.random_manifest(1, 2))
    bad["duration"] = 99.0
    issues = kinekit.manifest_issues(json.dumps(bad))
    assert any("duration" in s for s in issues)


def test_prompt_and_scoring():
    p = kinekit.common_prompt(10.0, [0.0, 5.0, 10.0], ["red"])
    assert p.startswith("The video lasts for 10.0 seconds, and 3 frames")
    assert kinekit.score_scalar(20.0, 15.0) == (True, 5.0)
    assert kinekit.score_clock(11, 1) == (False, 2)
    assert kinekit.interval_iou(2, 6, 4, 8) == pytest.approx(1 / 3)
    assert json.loads(kinekit.extract_answer("traveling_speed", "about 10 m/s")) == {"type": "kmh", "value": 36.0}
    assert kinekit.extract_answer("movement_direction", "unsure") is None


def test_pseudo_label_round_trip(tmp_path):
    kinekit.synth_frames("moving", str(tmp_path / "scene"), frames=8)
    manifest, alpha, warnings = kinekit.pseudo_label(str(tmp_path / "scene"))
    assert alpha == pytest.approx(2.5, abs=1e-6)
    assert warnings == []
    m = json.loads(manifest)
    assert m["objects"][0]["source"] == "pseudo"


def test_evaluate_files(tmp_path):
    lines = kinekit.generate(kinekit.random_manifest(4, 1), seed=2)
    (tmp_path / "b.jsonl").write_text("".join(x + "\n" for x in lines))
    preds = [json.dumps({"qa_id": json.loads(x)["qa_id"], "response": json.loads(x)["answer_text"]}) for x in lines]
    (tmp_path / "p.jsonl").write_text("\n".join(preds) + "\n")
    report = json.loads(kinekit.evaluate(str(tmp_path / "b.jsonl"), str(tmp_path / "p.jsonl")))
    assert report["average_accuracy"] == pytest.approx(100.0)
