import json
import subprocess
import sys
from pathlib import Path

import pytest

from frolicher.cli import main

GOLDEN = Path(__file__).parent / "golden"
MANIFEST = json.loads((GOLDEN / "manifest.json").read_text(encoding="utf-8"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("entry", MANIFEST, ids=lambda e: e["file"])
def test_golden_reports(capsys, entry):
    args = entry["args"]
    code, out, _ = run(capsys, args[0], entry["model"], *args[1:], "--json")
    assert code == entry["exit"]
    assert out == (GOLDEN / entry["file"]).read_text(encoding="utf-8")


def test_json_is_deterministic(capsys):
    a = run(capsys, "kuranishi", "nakamura3b", "--json")[1]
    b = run(capsys, "kuranishi", "nakamura3b", "--json")[1]
    assert a == b
    doc = json.loads(a)
    assert doc["engine"]["name"] == "frolicher"
    assert doc["model"]["file"] == "nakamura3b.json"
    assert "wall" not in a


@pytest.mark.parametrize("argv,code", [
    (["validate", "iwasawa3"], 0),
    (["check", "iwasawa3", "--page", "1"], 1),
    (["check", "iwasawa3", "--page", "2"], 0),
    (["check", "torus3", "--page", "1"], 0),
    (["kuranishi", "nakamura3b", "--order", "2"], 0),
    (["kuranishi", "nakamura3b", "--order", "2", "--fail-on-obstruction"], 2),
    (["kuranishi", "iwasawa3", "--order", "3", "--fail-on-obstruction"], 0),
    (["kuranishi", "nakamura3b", "--directions", "t4,t5,t6", "--order", "3", "--fail-on-obstruction"], 0),
    (["pages", "no-such-model"], 64),
    (["pages", "iwasawa3", "--max-page", "0"], 64),
    (["check", "iwasawa3", "--page", "0"], 64),
    (["kuranishi", "iwasawa3", "--directions", "x"], 64),
    (["kuranishi", "iwasawa3", "--directions", "99"], 64),
    (["kuranishi", "iwasawa3", "--mode", "partial"], 64),
    (["frobnicate", "iwasawa3"], 64),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_model(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"kind": "lie_algebra", "name": "bad", "n": 3,
                             "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1/0"}]}), encoding="utf-8")
    code, _, err = run(capsys, "pages", str(f))
    assert code == 64
    assert "brackets/0/c" in err


def test_invalid_model_fails_validation(tmp_path, capsys):
    doc = json.loads((Path(__file__).parent.parent / "src/frolicher/models/iwasawa3.json").read_text("utf-8"))
    from frolicher.complex import load_document, matrix_to_json
    k = load_document(doc)
    n = k.n
    grid = lambda get: [[matrix_to_json(get(p, q)) for q in range(n + 1)] for p in range(n + 1)]
    dbar = grid(k.dbar)
    # setting every nonzero ∂̄ entry to 5 breaks the anticommutation with ∂
    for p in range(n + 1):
        for q in range(n + 1):
            for row in dbar[p][q]:
                for j, x in enumerate(row):
                    if x != "0/1":
                        row[j] = "5/1"
    explicit = {"kind": "explicit", "name": "broken", "n": n,
                "dims": [[k.dim(p, q) for q in range(n + 1)] for p in range(n + 1)],
                "del": grid(k.d), "dbar": dbar}
    f = tmp_path / "broken.json"
    f.write_text(json.dumps(explicit), encoding="utf-8")
    code, out, _ = run(capsys, "validate", str(f))
    assert code == 1
    assert "FAILED" in out and "bidegree" in out
    assert run(capsys, "pages", str(f))[0] == 64


def test_human_output(capsys):
    code, out, err = run(capsys, "condition11", "nakamura3b", "--timing")
    assert code == 0
    assert out.startswith("nakamura3b (nakamura3b.json): condition11")
    assert "-2·e^{−2z₁}dz_{12 1̄ 2̄}" in out
    assert "wall time" in err
    _, out, _ = run(capsys, "kuranishi", "nakamura3b", "--order", "2")
    assert "OBSTRUCTED at order 2, monomial t1·t6" in out


def test_essential_human_output(capsys):
    _, out, _ = run(capsys, "essential", "iwasawa5")
    for lab in ("φ_{1345 1̄}", "φ_{1345 2̄}", "φ_{2345 1̄}", "φ_{2345 2̄}"):
        assert lab in out


def test_cache_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FROLICHER_CACHE_DIR", str(tmp_path))
    first = run(capsys, "pages", "iwasawa3", "--json")
    assert list(tmp_path.iterdir())
    second = run(capsys, "pages", "iwasawa3", "--json")
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "frolicher", "check", "iwasawa3", "--page", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "page-1-ddbar: true" in proc.stdout
