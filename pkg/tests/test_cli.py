from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from weylfold.cli import main

DATA = Path(__file__).resolve().parents[1] / "src" / "weylfold" / "data"
SL4 = str(DATA / "sl4_subregular_fan.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def result(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    report = json.loads(out)
    assert set(report) == {"command", "input_digest", "result", "version"}
    return report["result"]


@pytest.fixture
def a4_leaf(tmp_path):
    p = tmp_path / "sing.json"
    p.write_text(json.dumps({"leaves": [{"id": "L1", "slice": "A4", "monodromy_generators": ["(1 4)(2 3)"]}]}))
    return str(p)


def test_fold(capsys):
    assert result(capsys, "fold", "--type", "A4", "--gen", "(1 4)(2 3)")["folded_type"] == "C2"
    assert result(capsys, "fold", "--type", "D4", "--gen", "(1 3 4)")["folded_type"] == "G2"
    assert result(capsys, "fold", "--type", "A2")["folded_type"] == "A2"
    r = result(capsys, "fold", "--type", "A4", "--gen", "[4, 3, 2, 1]")
    assert r["betas"] == [["1/2", "0", "0", "1/2"], ["0", "1", "1", "0"]]


def test_namikawa(capsys, a4_leaf):
    assert result(capsys, "namikawa", a4_leaf)["order"] == 8
    assert result(capsys, "namikawa", a4_leaf, "--contract", "L1:1,L1:2")["partial"]["order"] == 8
    part = result(capsys, "namikawa", a4_leaf, "--contract", "L1:1")["partial"]
    assert part["order"] == 2 and part["generators"] == ["L1:1"]


def test_fan(capsys, tmp_path):
    r = result(capsys, "fan", SL4)
    assert (r["face_count"], r["z2_faces"], r["bijective"], r["fundamental_domain"]) == (8, 3, False, True)
    quad = tmp_path / "quad.json"
    quad.write_text(json.dumps({
        "dim": 2,
        "hyperplanes": [{"normal": [1, 0], "generator": "P:1"}, {"normal": [0, 1], "generator": "Q:1"}],
        "chambers": [{"rays": [[1, 0], [0, 1]]}],
        "singularity": {"leaves": [{"id": "P", "slice": "A1"}, {"id": "Q", "slice": "A1"}]},
    }))
    r = result(capsys, "fan", str(quad))
    assert (r["face_count"], r["bijective"], r["fundamental_domain"]) == (4, True, None)


def test_fan_with_separate_singularity(capsys, tmp_path):
    obj = json.loads(Path(SL4).read_text())
    sing = obj.pop("singularity")
    (tmp_path / "fan.json").write_text(json.dumps(obj))
    (tmp_path / "sing.json").write_text(json.dumps(sing))
    r = result(capsys, "fan", str(tmp_path / "fan.json"), "--singularity", str(tmp_path / "sing.json"))
    assert r["face_count"] == 8
    code, out, err = run(capsys, "fan", str(tmp_path / "fan.json"))
    assert code == 2 and out == ""


def test_kleinian(capsys):
    r = result(capsys, "kleinian", "--type", "A3", "--contract", "2")
    assert (r["end_spr_dim"], r["b2_partial"], r["invariant_check"]) == (2, 2, True)
    r = result(capsys, "kleinian", "--type", "A3", "--contract", "")
    assert r["smooth"] and r["end_spr_dim"] == 1


def test_hecke(capsys):
    r = result(capsys, "hecke", "--type", "A2", "--parabolic", "1")
    assert (r["dim"], r["associative"], r["left_cosets"]) == (2, True, 3)
    r = result(capsys, "hecke", "--type", "C2", "--parabolic", "1", "--constants")
    assert r["dim"] == 3 and r["constants"]


@pytest.mark.parametrize(
    "argv",
    [
        ["fold", "--type", "B3"],
        ["fold", "--type", "A4", "--gen", "(1 2)"],
        ["fold", "--type", "A4", "--gen", "[1, 2"],
        ["fold", "--type", "Q7"],
        ["namikawa", "/nonexistent.json"],
        ["kleinian", "--type", "A3", "--contract", "x"],
        ["kleinian", "--type", "A3", "--contract", "7"],
        ["hecke", "--type", "A2", "--parabolic", "5"],
    ],
)
def test_invalid_input_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "InvalidInput" in err


def test_bad_json_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, out, _ = run(capsys, "namikawa", str(p))
    assert code == 2 and out == ""


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("WEYLFOLD_BUDGET", "10")
    code, out, err = run(capsys, "hecke", "--type", "B3", "--parabolic", "1")
    assert code == 3 and out == "" and "BudgetExceeded" in err


def test_hecke_budget_on_large_group(capsys):
    code, out, _ = run(capsys, "hecke", "--type", "D5")
    assert code == 3 and out == ""


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fold"])
    assert exc.value.code == 2


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "kleinian", "--type", "D4", "--contract", "2", "--seed", "7")
    _, b, _ = run(capsys, "kleinian", "--type", "D4", "--contract", "2", "--seed", "7")
    assert a == b
    _, c, _ = run(capsys, "kleinian", "--type", "D4", "--contract", "2", "--seed", "8")
    assert json.loads(a)["input_digest"] != json.loads(c)["input_digest"]


def test_pretty(capsys):
    code, out, _ = run(capsys, "fold", "--type", "A4", "--gen", "(1 4)(2 3)", "--pretty")
    assert code == 0 and "folded_type" in out and "C2" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weylfold", "fold", "--type", "A3", "--gen", "(1 3)"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["folded_type"] == "C2"
