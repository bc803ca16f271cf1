import json
import subprocess
import sys

import pytest

from indsetlab.harness.cli import main


@pytest.fixture
def p3(tmp_path):
    f = tmp_path / "p3.el"
    f.write_text("3 2\n0 1\n1 2\n")
    return str(f)


def test_sample(p3, capsys):
    assert main(["sample", "--graph", p3, "--epsilon", "0.1", "--seed", "42"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("{0}") and "failed=False" in out


def test_sample_report_file(p3, tmp_path):
    out = tmp_path / "r.json"
    assert main(["sample", "--graph", p3, "--seed", "1", "--count", "3", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert len(d["measurements"]["outcomes"]) == 3 and d["config"]["seed"] == 1


def test_unknown_flag(p3, capsys):
    assert main(["sample", "--graph", p3, "--bogus"]) == 1
    assert "usage:" in capsys.readouterr().err


def test_missing_command(capsys):
    assert main([]) == 1


@pytest.mark.parametrize("argv", [
    ["sample"],
    ["sample", "--graph", "/nonexistent/graph.el"],
    ["sample", "--graph", "GRAPH", "--backend", "gibbs"],
    ["sample", "--graph", "GRAPH", "--epsilon", "2"],
    ["verify-independence", "--graph", "GRAPH", "--round", "5"],
    ["count", "--graph", "GRAPH", "--epsilon0", "1.5"],
])
def test_usage_errors(argv, p3):
    assert main([p3 if a == "GRAPH" else a for a in argv]) == 1


def test_bad_graph_file(tmp_path, capsys):
    f = tmp_path / "bad.el"
    f.write_text("3 1\n0 0\n")
    assert main(["sample", "--graph", str(f)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_seed_env(p3, monkeypatch, tmp_path):
    monkeypatch.setenv("INDSETLAB_SEED", "42")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["sample", "--graph", p3, "--out", str(a)])
    main(["sample", "--graph", p3, "--seed", "42", "--out", str(b)])
    assert json.loads(a.read_text())["measurements"] == json.loads(b.read_text())["measurements"]
    monkeypatch.setenv("INDSETLAB_SEED", "nope")
    assert main(["sample", "--graph", p3]) == 1


def test_verify_pm_bound_exit_zero(tmp_path):
    out = tmp_path / "pm.json"
    assert main(["verify-pm-bound", "--seed", "7", "--trials", "500", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["verdict"] == "CONFIRMED"


def test_refuted_exit_two(tmp_path):
    assert main(["verify-independence", "--seed", "1", "--trials", "20000", "--out", str(tmp_path / "i.json")]) == 2


def test_inconclusive_exit_three(capsys):
    assert main(["verify-robustness", "--trials", "2", "--n", "4"]) == 3


def test_count_and_uniformity(p3, capsys):
    assert main(["count", "--graph", p3, "--samples", "300", "--seed", "2"]) == 0
    assert "estimate" in capsys.readouterr().out
    assert main(["measure-uniformity", "--graph", p3, "--samples", "10000", "--backend", "mcmc:50"]) == 0


def test_verify_distances(tmp_path):
    assert main(["verify-distances", "--trials", "200", "--out", str(tmp_path / "d.json")]) == 0


def test_bench(capsys):
    assert main(["bench", "--repeat", "1"]) == 0
    assert "speedup" in capsys.readouterr().out


def test_module_entry_point(p3):
    res = subprocess.run([sys.executable, "-m", "indsetlab", "sample", "--graph", p3, "--seed", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("{")
