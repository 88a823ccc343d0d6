from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from zonegov.cli import main
from zonegov.service import create_app

from test_scenario import office_doc


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "office.json"
    path.write_text(json.dumps(office_doc()))
    return path


def summary_dict(stdout: str) -> dict:
    out = {}
    for line in stdout.strip().splitlines():
        key, value = line.split("=", 1)
        out[key] = float(value) if "." in value else int(value)
    return out


def test_frame_encode(capsys):
    assert main(["frame", "encode", "0xA5", "0x3"]) == 0
    assert capsys.readouterr().out.strip() == "5A53"


def test_frame_decode(capsys):
    assert main(["frame", "decode", "5A53"]) == 0
    assert capsys.readouterr().out.strip() == "address=0xA5 data=0x3"


def test_frame_decode_bad_header(capsys):
    assert main(["frame", "decode", "FA53"]) == 2
    assert "error" in capsys.readouterr().err


def test_frame_encode_out_of_range(capsys):
    assert main(["frame", "encode", "0x1FF", "0"]) == 2


def test_run_office_scenario(scenario_file, tmp_path, capsys):
    trace = tmp_path / "trace.tsv"
    assert main(["run", str(scenario_file), "--out", str(trace)]) == 0
    summary = summary_dict(capsys.readouterr().out)
    assert summary["violations"] == 0
    assert summary["frames_valid"] > 0
    lines = trace.read_text().splitlines()
    assert any("\tgoverned\t" in line for line in lines)


def test_run_is_deterministic(scenario_file, tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert main(["run", str(scenario_file), "--seed", "7", "--out", str(a)]) == 0
    assert main(["run", str(scenario_file), "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_bad_scenario_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    doc = office_doc()
    doc["zones"][0]["interval"] = [900, 500]
    path.write_text(json.dumps(doc))
    assert main(["run", str(path)]) == 2
    assert "zones[0].interval" in capsys.readouterr().err


def test_run_missing_file_exits_2(capsys):
    assert main(["run", "/no/such/file.json"]) == 2


def test_internal_error_exits_1(scenario_file, capsys, monkeypatch):
    import zonegov.cli as cli_mod
    monkeypatch.setattr(cli_mod, "run_scenario",
                        lambda *a, **k: (_ for _ in ()).throw(RuntimeError("boom")))
    assert main(["run", str(scenario_file)]) == 1
    assert "internal error" in capsys.readouterr().err


def test_trace_command_prints_events(scenario_file, capsys):
    assert main(["trace", str(scenario_file)]) == 0
    out = capsys.readouterr().out
    assert "\tgoverned\t" in out


def test_cli_metrics_match_service(scenario_file, capsys):
    assert main(["run", str(scenario_file)]) == 0
    summary = summary_dict(capsys.readouterr().out)

    doc = office_doc()
    with TestClient(create_app()) as client:
        assert client.post("/scenario", json=doc).status_code == 200
        ticks = int(round(doc["duration"] / doc["dt"]))
        client.post("/sim", json={"action": "step", "ticks": ticks})
        metrics = client.get("/state").json()["metrics"]

    for key, value in metrics.items():
        assert summary[key] == value
