import json
import shutil
import subprocess
import sys

import pytest

from deepfri.cli import run
from deepfri.lab import CURVE_LABELS
from deepfri.poly import Polynomial, encode
from deepfri.presets import get_preset


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("DEEPFRI_GUARD_OVERRIDE", raising=False)
    return tmp_path


def _honest_input(path, preset="r3-q16"):
    p = get_preset(preset)
    fld = p.domain().field
    word = encode(Polynomial(fld, range(1, p.degree + 1)), p.domain())
    path.write_text(json.dumps(word.to_json()))
    return word


def test_deep_prove_verify(work):
    _honest_input(work / "f0.json")
    assert run(["deep-prove", "--preset", "r3-q16", "--input", "f0.json", "--out", "t.json"]) == 0
    assert run(["deep-verify", "--in", "t.json", "--ell", "8", "--seed", "7", "--json-summary", "s.json"]) == 0
    s = json.loads((work / "s.json").read_text())
    assert s["accepted"] and s["exact_accept"] == "1"
    assert {"johnson_delta", "err_commit", "err_query"} <= set(s)


def test_deep_reject(work):
    _honest_input(work / "f0.json")
    run(["deep-prove", "--preset", "r3-q16", "--input", "f0.json", "--out", "t.json"])
    t = json.loads((work / "t.json").read_text())
    t["final"] = format(int(t["final"], 16) ^ 1, "x")
    (work / "bad.json").write_text(json.dumps(t))
    assert run(["deep-verify", "--in", "bad.json"]) == 1


def test_fri_roundtrip(work):
    assert run(["fri-prove", "--out", "t.json"]) == 0
    assert run(["fri-verify", "--input", "t.json"]) == 0


def test_coefficient_input(work):
    (work / "c.json").write_text(json.dumps({"coeffs": ["1", "2", "3"]}))
    assert run(["deep-prove", "--preset", "r1-q8", "--input", "c.json", "--out", "t.json"]) == 0
    assert run(["deep-verify", "--in", "t.json"]) == 0


def test_curves(work):
    assert run(["curves", "--rho", "0.25", "--rho", "0.0625", "--out", "curves.csv"]) == 0
    lines = (work / "curves.csv").read_text().splitlines()
    assert lines[0].split(",")[1:6] == list(CURVE_LABELS)
    assert len(lines) == 3
    assert (work / "curves.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_lab_tightness(work):
    assert run(["lab", "tightness", "--n", "4", "--out", "report.csv"]) == 0
    rows = (work / "report.csv").read_text().splitlines()
    assert "delta_max,,3/4,3/4,True" in rows
    assert (work / "report.png").exists()


def test_byte_identical(work):
    for d in ("a", "b"):
        (work / d).mkdir()
        assert run(["curves", "--out", f"{d}/c.csv"]) == 0
        assert run(["lab", "tightness", "--n", "4", "--out", f"{d}/r.csv"]) == 0
        assert run(["deep-prove", "--preset", "r2-q16", "--seed", "3", "--out", f"{d}/t.json"]) == 0
    for name in ("c.csv", "c.png", "r.csv", "r.png", "t.json"):
        assert (work / "a" / name).read_bytes() == (work / "b" / name).read_bytes()


def test_ali(work):
    assert run(["ali-prove", "--out", "t.json"]) == 0
    assert run(["ali-verify", "--in", "t.json"]) == 0
    assert run(["ali-prove", "--corrupt", "0,0", "--out", "bad.json"]) == 0
    assert run(["ali-verify", "--in", "bad.json"]) == 1


def test_usage_errors(work, capsys):
    assert run(["bogus"]) == 2
    assert run(["deep-verify", "--in", "missing.json"]) == 2
    (work / "junk.json").write_text("{}")
    assert run(["deep-verify", "--in", "junk.json"]) == 2
    assert run(["curves", "--rho", "2"]) == 2


def test_guard_exit(work, capsys):
    _honest_input(work / "f0.json")
    code = run(["deep-prove", "--preset", "r3-q16", "--adversary", "nearest-codeword", "--input", "f0.json", "--out", "t.json"])
    assert code == 3
    err = capsys.readouterr().err
    assert "rs_search_bits" in err and "DEEPFRI_GUARD_OVERRIDE" in err


def test_console_script(work):
    exe = shutil.which("deepfri")
    cmd = [exe] if exe else [sys.executable, "-m", "deepfri.cli"]
    out = subprocess.run(cmd + ["curves", "--out", "c.csv"], capture_output=True)
    assert out.returncode == 0
    assert (work / "c.csv").exists()
