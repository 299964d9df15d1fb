import copy
import json
import math

import pytest

from fractal_nevanlinna.cli import run
from fractal_nevanlinna.harness import standard_config


def small_config(tmp_path, **changes):
    cfg = copy.deepcopy(standard_config())
    cfg["functions"]["random"]["count"] = 3
    cfg["measures"] = [m for m in cfg["measures"] if m["name"] != "frostman-cantor"]
    cfg.update(changes)
    path = tmp_path / "cases.json"
    path.write_text(json.dumps(cfg))
    return path


def test_content_example(capsys):
    code = run(["content", "--gauge", '{"kind":"power","b":1,"d":0.5}',
                "--set", '{"cantor":{"depth":2,"ratio":0.3333333333}}', "--diameter", "inf"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(1.0, abs=1e-9)


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        run(["content", "--bogus"])
    assert exc.value.code == 2


def test_verify_writes_reports_and_is_reproducible(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACTAL_NEVANLINNA_THREADS", "1")
    path = small_config(tmp_path)
    assert run(["verify", "--config", str(path), "--output", str(tmp_path / "a")]) == 0
    assert run(["verify", "--config", str(path), "--output", str(tmp_path / "b"), "--no-figures"]) == 0
    first = (tmp_path / "a" / "report.csv").read_bytes()
    assert first == (tmp_path / "b" / "report.csv").read_bytes()
    assert (tmp_path / "a" / "ratios.png").stat().st_size > 0
    assert not (tmp_path / "b" / "ratios.png").exists()
    header = first.decode().splitlines()[0]
    assert header == "case_id,variant,r0,lhs,rhs,ratio,status"


def test_verify_negative_control_exits_1(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACTAL_NEVANLINNA_THREADS", "1")
    path = small_config(tmp_path)
    assert run(["verify", "--config", str(path), "--output", str(tmp_path), "--no-figures",
                "--rhs-scale", "0.5"]) == 1


def test_malformed_config_names_field(tmp_path, capsys):
    path = small_config(tmp_path, R=0.5)
    assert run(["verify", "--config", str(path), "--output", str(tmp_path)]) == 2
    assert "R" in capsys.readouterr().err


def test_characteristic(capsys):
    assert run(["characteristic", "--function", '{"zeros":[],"poles":[[0,0,1]]}', "--r", "0.5", "--R", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(3 * math.log(2))


def test_frostman_single_point_exits_2(tmp_path):
    assert run(["frostman", "--gauge", '{"kind":"power","b":1,"d":0.5}', "--set", '{"points":[0.5]}',
                "--output", str(tmp_path)]) == 2


def test_frostman_outputs(tmp_path, capsys):
    code = run(["frostman", "--gauge", '{"kind":"power","b":1,"d":0.6309297535714574}',
                "--set", '{"cantor":{"depth":5,"ratio":0.3333333333333333}}', "--base", "3", "--depth", "5",
                "--output", str(tmp_path)])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["passed"]
    for name in ("frostman.csv", "frostman.json", "frostman.png"):
        assert (tmp_path / name).exists()


def test_modulus_stdout(capsys):
    assert run(["modulus", "--measure", '{"kind":"identity"}', "--r", "1", "--grid", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,m,omega"
    assert lines[2] == "0.25,0.25,0.25"


def test_sweep(tmp_path, capsys):
    cfg = {"parameter": "depth", "values": [3, 4], "count": 2, "variant": "thm1", "seed": 1}
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(cfg))
    assert run(["sweep", "--config", str(path), "--output", str(tmp_path)]) == 0
    rows = (tmp_path / "sweep.csv").read_text().splitlines()
    assert rows[0] == "parameter,lhs,rhs,ratio"
    assert len(rows) == 5
    assert (tmp_path / "sweep.png").exists()
