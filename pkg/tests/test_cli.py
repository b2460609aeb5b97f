"""Command line: run artifacts, determinism, replay, assess, error exits."""

import json
from pathlib import Path

import pytest

from ascsim.cli import main
from tests.conftest import tiny_document


@pytest.fixture
def tiny_path(tmp_path) -> Path:
    """Tiny network plus one launch order, written where the CLI can load it."""
    doc = tiny_document()
    doc["initial_orders"] = [
        {"at": 0.0, "buyer": "W", "lines": {"beef": 5.0}, "trigger": "manual-launch"}
    ]
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- run ---------------------------------------------------------------------------


def test_run_writes_artifacts(capsys, tmp_path, tiny_path):
    out = tmp_path / "artifacts"
    code, stdout, _ = run_cli(capsys, "run", "--scenario", str(tiny_path), "--out", str(out))
    assert code == 0
    assert "run complete" in stdout

    events_text = (out / "events.ndjson").read_text(encoding="utf-8")
    lines = events_text.splitlines()
    assert lines, "run produced no events"
    first, last = json.loads(lines[0]), json.loads(lines[-1])
    assert first["seq"] == 1 and first["kind"] == "OrderPlaced"
    assert last["seq"] == len(lines)

    snapshot = json.loads((out / "snapshot.json").read_text(encoding="utf-8"))
    assert snapshot["last_seq"] == len(lines)
    assert snapshot["ledgers"]["W"]["beef"] == 85.0

    resolved = json.loads((out / "scenario.json").read_text(encoding="utf-8"))
    assert {e["id"] for e in resolved["entities"]} == {"W", "S", "R", "L", "P"}


def test_run_until_truncates(capsys, tmp_path, tiny_path):
    out = tmp_path / "short"
    code, _, _ = run_cli(
        capsys, "run", "--scenario", str(tiny_path), "--until", "120", "--out", str(out)
    )
    assert code == 0
    times = [
        json.loads(line)["sim_time"]
        for line in (out / "events.ndjson").read_text(encoding="utf-8").splitlines()
    ]
    assert times and max(times) <= 120.0
    snapshot = json.loads((out / "snapshot.json").read_text(encoding="utf-8"))
    assert snapshot["sim_time"] <= 120.0


def test_same_seed_runs_are_byte_identical(capsys, tmp_path, tiny_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        code, _, _ = run_cli(
            capsys, "run", "--scenario", str(tiny_path), "--until", "3000", "--out", str(out)
        )
        assert code == 0
    assert (out_a / "events.ndjson").read_bytes() == (out_b / "events.ndjson").read_bytes()
    assert (out_a / "snapshot.json").read_bytes() == (out_b / "snapshot.json").read_bytes()


def test_seed_flag_overrides_scenario(capsys, tmp_path, tiny_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    run_cli(capsys, "run", "--scenario", str(tiny_path), "--until", "3000",
            "--seed", "99", "--out", str(out_a))
    run_cli(capsys, "run", "--scenario", str(tiny_path), "--until", "3000",
            "--seed", "99", "--out", str(out_b))
    assert (out_a / "events.ndjson").read_bytes() == (out_b / "events.ndjson").read_bytes()
    resolved = json.loads((out_a / "scenario.json").read_text(encoding="utf-8"))
    assert resolved["seed"] == 99


# -- replay ------------------------------------------------------------------------


def test_replay_rebuilds_the_snapshot(capsys, tmp_path, tiny_path):
    out = tmp_path / "artifacts"
    run_cli(capsys, "run", "--scenario", str(tiny_path), "--out", str(out))
    snapshot_text = (out / "snapshot.json").read_text(encoding="utf-8")

    code, stdout, _ = run_cli(capsys, "replay", str(out / "events.ndjson"))
    assert code == 0
    assert stdout == snapshot_text  # scenario.json sits next to the log

    replay_out = tmp_path / "replayed"
    code, _, _ = run_cli(
        capsys, "replay", str(out / "events.ndjson"),
        "--scenario", str(out / "scenario.json"), "--out", str(replay_out),
    )
    assert code == 0
    assert (replay_out / "snapshot.json").read_bytes() == (out / "snapshot.json").read_bytes()


def test_replay_missing_log_exits_2(capsys, tmp_path):
    code, _, stderr = run_cli(capsys, "replay", str(tmp_path / "absent.ndjson"))
    assert code == 2
    assert "not found" in stderr


# -- assess ------------------------------------------------------------------------


def test_assess_default_scenario(capsys):
    code, stdout, _ = run_cli(capsys, "assess")
    assert code == 0
    assert "L3 Holistic Automation" in stdout
    assert "all major processes" in stdout
    assert "intelligence=0.00 automation=1.00" in stdout
    assert "automation-skewed" in stdout
    assert "characteristics present" in stdout


def test_assess_profile_file(capsys, tmp_path):
    profile = {
        "functions": [
            {"name": "pick", "automated": True, "self_deciding": True},
            {"name": "pack", "automated": True},
        ],
        "processes": [
            {
                "name": "fulfilment",
                "member_functions": ["pick", "pack"],
                "streamlined": True,
                "major": True,
            }
        ],
        "characteristics": {
            "instrumented": True,
            "standardised": True,
            "interconnected": True,
            "integrated": True,
            "automated": True,
            "intelligent": False,
        },
    }
    path = tmp_path / "profile.json"
    path.write_text(json.dumps(profile), encoding="utf-8")
    code, stdout, _ = run_cli(capsys, "assess", "--profile", str(path))
    assert code == 0
    assert "L4 Limited Autonomy" in stdout

    path.write_text(json.dumps({"functions": [{"name": "pick"}]}), encoding="utf-8")
    code, stdout, _ = run_cli(capsys, "assess", "--profile", str(path))
    assert code == 0
    assert "L0 No Automation" in stdout


def test_run_with_assess_flag(capsys, tmp_path, tiny_path):
    out = tmp_path / "assessed"
    code, stdout, _ = run_cli(
        capsys, "run", "--scenario", str(tiny_path), "--out", str(out), "--assess"
    )
    assert code == 0
    # one replenishment completed; the other declared major process never ran
    assert "L2 Process Automation" in stdout

    short = tmp_path / "short"
    code, _, stderr = run_cli(
        capsys, "run", "--scenario", str(tiny_path), "--until", "30",
        "--out", str(short), "--assess",
    )
    assert code == 1
    assert "assessment unavailable" in stderr


# -- error exits --------------------------------------------------------------------


def test_missing_scenario_file_exits_2(capsys, tmp_path):
    code, _, stderr = run_cli(
        capsys, "run", "--scenario", str(tmp_path / "ghost.json"), "--out", str(tmp_path / "o")
    )
    assert code == 2
    assert "error:" in stderr


def test_invalid_scenario_document_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"seed": 1, "entities": []}), encoding="utf-8")
    code, _, stderr = run_cli(capsys, "run", "--scenario", str(bad), "--out", str(tmp_path / "o"))
    assert code == 2
    assert "error:" in stderr

    bad.write_text("{broken", encoding="utf-8")
    code, _, stderr = run_cli(capsys, "run", "--scenario", str(bad), "--out", str(tmp_path / "o"))
    assert code == 2
