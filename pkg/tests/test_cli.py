"""Command-line interface: subcommands, exit codes, determinism."""

from __future__ import annotations

import json
import shutil

import pytest

from scenario_forge.cli import main

from conftest import FIXTURES


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _mock_args():
    return ["--mock-dir", str(FIXTURES / "mock_llm")]


def _rec(name: str, filename: str) -> str:
    return str(FIXTURES / "benchmark" / name / filename)


def test_compose_happy_path(workdir, capsys):
    code = main(
        _mock_args()
        + [
            "-o",
            "out.scn.yaml",
            "compose",
            _rec("rec_001", "description.txt"),
            _rec("rec_001", "detections.json"),
            "--report",
        ]
    )
    assert code == 0
    assert (workdir / "out.scn.yaml").exists()
    assert (workdir / "out.merge-report.json").exists()
    report = json.loads((workdir / "out.merge-report.json").read_text())
    assert report["matched_pairs"]


def test_compose_equals_manual_chain(workdir):
    description = _rec("rec_001", "description.txt")
    detections = _rec("rec_001", "detections.json")
    assert main(_mock_args() + ["-o", "composed.scn.yaml", "compose", description, detections]) == 0
    assert main(_mock_args() + ["-o", "text.scn.yaml", "extract-text", description]) == 0
    assert main(["-o", "visual.scn.yaml", "extract-vision", detections]) == 0
    assert main(["-o", "aligned.scn.yaml", "align", "text.scn.yaml", "visual.scn.yaml"]) == 0
    assert (workdir / "composed.scn.yaml").read_text() == (workdir / "aligned.scn.yaml").read_text()


def test_codegen_missing_input_is_exit_2(workdir):
    assert main(["codegen", "missing.scn.yaml"]) == 2


def test_usage_error_is_exit_1(workdir):
    assert main(["codegen"]) == 1
    assert main(["no-such-command"]) == 1


def test_codegen_all_targets_deterministic(workdir):
    ir = _rec("rec_002", "ground_truth.scn.yaml")
    for target, suffix in [("minisim", ".minisim.json"), ("carla", ".carla.py.txt"), ("lgsvl", ".lgsvl.py.txt")]:
        out = f"one{suffix}"
        assert main(["-o", out, "--seed", "5", "codegen", ir, "--target", target]) == 0
        first = (workdir / out).read_bytes()
        assert main(["-o", out, "--seed", "5", "codegen", ir, "--target", target]) == 0
        assert (workdir / out).read_bytes() == first


def test_codegen_unplaceable_is_exit_3(workdir):
    (workdir / "wide.scn.yaml").write_text(
        "road_network:\n  road_type: highway\nego_vehicle:\n  lane_idx: 0\n",
        encoding="utf-8",
    )
    assert main(["codegen", "wide.scn.yaml"]) == 3


def test_simulate_reports_bugs(workdir, capsys):
    assert main(["-o", "trace.json", "simulate", str(FIXTURES / "collision.minisim.json"), "--agent", "none"]) == 0
    out = capsys.readouterr().out
    assert "collision" in out
    payload = json.loads((workdir / "trace.json").read_text())
    assert payload["bugs"]


def test_fuzz_writes_stats_and_timeline(workdir):
    assert (
        main(
            [
                "-o",
                "stats.json",
                "fuzz",
                "--seeds",
                str(FIXTURES / "fuzz_seeds" / "single"),
                "--iters",
                "30",
            ]
        )
        == 0
    )
    stats = json.loads((workdir / "stats.json").read_text())
    assert stats["iterations"] == 30
    assert (workdir / "stats-timeline.csv").exists()


def test_evaluate_writes_report(workdir):
    assert (
        main(
            _mock_args()
            + [
                "-o",
                "eval-report.json",
                "evaluate",
                "--benchmark",
                str(FIXTURES / "benchmark"),
                "--reps",
                "3",
            ]
        )
        == 0
    )
    report = json.loads((workdir / "eval-report.json").read_text())
    assert report["repetitions"] == 3
    assert report["margin_of_error"] == pytest.approx(0.0)
    assert len(report["records"]) == 3


def test_inject_text_roundtrips(workdir):
    src = _rec("rec_002", "ground_truth.scn.yaml")
    assert main(["-o", "mutated.scn.yaml", "--seed", "9", "inject", src, "--kind", "text", "--rate", "0.1"]) == 0
    assert main(["-o", "mutated2.scn.yaml", "--seed", "9", "inject", src, "--kind", "text", "--rate", "0.1"]) == 0
    assert (workdir / "mutated.scn.yaml").read_text() == (workdir / "mutated2.scn.yaml").read_text()
    assert (workdir / "mutated.scn.yaml").read_text() != open(src).read()


def test_inject_detect_drops_actor(workdir):
    src = _rec("rec_001", "detections.json")
    assert main(["-o", "dropped.json", "inject", src, "--kind", "detect", "--rate", "0.3"]) == 0
    before = json.loads(open(src).read())
    after = json.loads((workdir / "dropped.json").read_text())
    n_actors = lambda d: sum(1 for b in d["boxes"] if b["class"] not in ("traffic_light", "traffic_sign"))  # noqa: E731
    assert n_actors(after) == n_actors(before) - 1
    assert after["lane_boundaries"] == before["lane_boundaries"]


def test_injected_detections_still_load(workdir):
    src = _rec("rec_001", "detections.json")
    assert main(["-o", "dropped.json", "inject", src, "--kind", "detect", "--rate", "0.3"]) == 0
    assert main(["-o", "v.scn.yaml", "extract-vision", "dropped.json"]) == 0


def test_malformed_detections_is_exit_2(workdir):
    (workdir / "bad.json").write_text('{"image_size": [0, 0]}', encoding="utf-8")
    assert main(["extract-vision", "bad.json"]) == 2


def test_config_file_provides_provider(workdir):
    (workdir / "config.yaml").write_text(
        f"provider:\n  kind: mock\n  endpoint: {FIXTURES / 'mock_llm'}\nseed: 123\n",
        encoding="utf-8",
    )
    code = main(
        ["--config", "config.yaml", "-o", "t.scn.yaml", "extract-text", _rec("rec_003", "description.txt")]
    )
    assert code == 0
    assert "cloudy" in (workdir / "t.scn.yaml").read_text()


def test_help_exits_zero():
    assert main(["--help"]) == 0
