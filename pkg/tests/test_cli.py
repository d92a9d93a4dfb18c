import json
import subprocess
import sys

import pytest

from torusgw.cli import main


def run(args, tmp_path, monkeypatch):
    monkeypatch.setenv("TORUSGW_CERT_DIR", str(tmp_path / "certs"))
    out = tmp_path / "report.json"
    code = main(["--output", str(out)] + args)
    return code, (json.loads(out.read_text()) if out.exists() else None)


@pytest.mark.parametrize("args", [
    ["verify", "lemma27", "--rank", "2", "--max-entry", "2"],
    ["verify", "lemma26", "--rank", "1", "--degree", "4"],
    ["filtration", "--rank", "1", "--c-max", "3", "--degree", "6"],
    ["complete", "--rank", "1", "--stages", "3"],
    ["complete", "--rank", "2", "--stages", "2", "--model", "presented"],
    ["borel", "--rank", "1", "--r-max", "2", "--samples", "5"],
    ["theorem36", "--rank", "1", "--theory", "complex", "--stages", "2", "--r-max", "1"],
    ["parse", "3*x1^2*y2 - 2"],
])
def test_passing_runs(args, tmp_path, monkeypatch):
    code, rep = run(args, tmp_path, monkeypatch)
    assert code == 0
    assert rep["overall"] == "pass"
    assert all(c["verdict"] == "pass" for c in rep["checks"])
    for c in rep["checks"]:
        if "certificate" in c:
            assert (tmp_path / "certs" / c["certificate"]).exists()


def test_inconclusive_exit(tmp_path, monkeypatch):
    code, rep = run(["karoubi", "--theory", "real", "--i-to", "1", "--r-max", "1"], tmp_path, monkeypatch)
    assert code == 2 and rep["overall"] == "inconclusive"


def test_filtration_not_found_is_inconclusive(tmp_path, monkeypatch):
    code, rep = run(["filtration", "--rank", "1", "--c-max", "1", "--degree", "4"], tmp_path, monkeypatch)
    assert code == 2


def test_failing_theory_exit(tmp_path, monkeypatch):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"name": "bad", "duality": 1, "shifts": {"0": {"generators": ["a"],
                   "forgetful": [1], "hyperbolic": [3], "unit": [1], "mult": [[[1]]]}}, "witt": {"0": [3]}}))
    code, rep = run(["theorem36", "--rank", "1", "--theory", str(cfg), "--stages", "1", "--r-max", "1"],
                    tmp_path, monkeypatch)
    assert code == 1 and rep["overall"] == "fail"


@pytest.mark.parametrize("args", [
    ["bogus"],
    ["complete", "--rank", "1"],
    ["complete", "--rank", "1", "--stages", "2", "--unknown"],
    ["complete", "--rank", "0", "--stages", "2"],
    ["theorem36", "--rank", "1", "--theory", "no-such-theory"],
    ["parse", "x1 +"],
])
def test_usage_errors(args, tmp_path, monkeypatch):
    code, _ = run(args, tmp_path, monkeypatch)
    assert code == 3


def test_reports_are_deterministic(tmp_path, monkeypatch):
    args = ["--seed", "7", "borel", "--rank", "1", "--r-max", "1", "--samples", "5"]
    _, a = run(args, tmp_path, monkeypatch)
    _, b = run(args, tmp_path, monkeypatch)
    for rep in (a, b):
        for c in rep["checks"]:
            c.pop("seconds")
    assert a == b
    assert a["invocation"]["seed"] == 7


def test_console_script(tmp_path):
    res = subprocess.run([sys.executable, "-m", "torusgw.cli", "parse", "u1^-1"],
                         capture_output=True, text=True, env={"TORUSGW_CERT_DIR": str(tmp_path)})
    assert res.returncode == 0
    assert json.loads(res.stdout)["checks"][0]["presented"] == "y1 + 1"


@pytest.mark.parametrize("args, check", [
    (["verify", "lemma27", "--rank", "2", "--max-entry", "3"], None),
    (["filtration", "--rank", "1", "--c-max", "4", "--degree", "8"], ("c", 2)),
    (["theorem36", "--rank", "1", "--theory", "complex", "--stages", "4", "--r-max", "4"], None),
    (["parse", "u1^-1 - 1"], ("presented", "y1")),
    (["parse", "x1 + y1", "--rank", "1"], ("normal_form", "x1 + y1")),
])
def test_documented_examples(args, check, tmp_path, monkeypatch):
    code, rep = run(args, tmp_path, monkeypatch)
    assert code == 0 and rep["overall"] == "pass"
    if check:
        key, value = check
        assert any(c.get(key) == value for c in rep["checks"])


def test_index_out_of_range(tmp_path, monkeypatch, capsys):
    code, _ = run(["parse", "x0"], tmp_path, monkeypatch)
    assert code == 3
    assert "range" in capsys.readouterr().err
