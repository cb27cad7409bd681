import csv
import json
import subprocess
import sys

import pytest

from stslab import __version__
from stslab.cli import run


def run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    assert run(argv + ["--out", str(out)]) == 0
    return json.loads(out.read_text())


def test_build_toric(tmp_path):
    data = run_json(["build", "--family", "toric", "--D", "2", "--m", "1", "--L", "3"], tmp_path)
    assert data["n_qubits"] == 18
    man = data["manifest"]
    assert man["command"] == "build" and man["version"] == __version__ and man["seed"] == 0


def test_analyze_built_file(tmp_path):
    run_json(["build", "--family", "toric", "--D", "2", "--m", "1", "--L", "3"], tmp_path, "code.json")
    data = run_json(["analyze", str(tmp_path / "code.json")], tmp_path)
    assert data["k"] == 2
    assert data["distance"] == 3
    assert data["topological_order"]["passed"]
    assert data["manifest"]["input"] == str(tmp_path / "code.json")


def test_analyze_three_dimensional_duality(tmp_path):
    data = run_json(["analyze", "--family", "toric", "--D", "3", "--m", "1", "--L", "2", "--max-weight", "1"], tmp_path)
    duality = data["duality"]
    assert duality["passed"]
    assert sorted(tuple(sorted((p["left_dim"], p["right_dim"]))) for p in duality["pairs"]) == [(1, 2)] * 3
    assert data["distance"] is None and data["distance_exceeded"]


def test_analyze_inline_code(tmp_path):
    spec = json.dumps({"n_qubits": 3, "generators": ["ZZI", "IZZ"]})
    data = run_json(["analyze", spec], tmp_path)
    assert data["k"] == 1 and data["distance"] == 1


def test_barrier(tmp_path):
    data = run_json(["barrier", "--family", "ising", "--D", "1", "--L", "6", "--logical", "XXXXXX"], tmp_path)
    assert data["barrier"] == 4
    assert len(data["path"]) == 6


def test_barrier_default_logical(tmp_path):
    data = run_json(["barrier", "--family", "toric", "--D", "2", "--m", "1", "--L", "3"], tmp_path)
    assert data["barrier"] == 4


def test_regions(tmp_path):
    data = run_json(["regions", "--family", "toric", "--D", "2", "--m", "1", "--L", "3"], tmp_path)
    assert data["g_R"] == {"0": 0, "1": 4, "2": 4}
    assert all(e["g_left"] == e["g_right"] for e in data["equivalences"])
    one = run_json(["regions", "--family", "toric", "--D", "2", "--m", "1", "--L", "3", "--region", "[[0,0],[0,1],[0,2]]"],
                   tmp_path, "r.json")
    assert one["g"] + one["g_complement"] == 4


def test_appendixc(tmp_path):
    data = run_json(["appendixc", "--m-max", "2", "--trials", "30"], tmp_path)
    assert data["passed"] and data["odd_matrix_verified"] == 30


def test_thermal_order_csv_and_summary(tmp_path):
    out, summary = tmp_path / "t.csv", tmp_path / "s.json"
    argv = ["thermal", "--family", "ising", "--D", "2", "--L", "6", "--T", "1.5", "--eps", "0.01",
            "--sweeps", "40", "--burn-in", "10", "--chains", "2", "--out", str(out), "--summary", str(summary)]
    assert run(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["sweep", "energy", "order_parameter", "chain"]
    assert len(rows) == 1 + 80
    assert rows[1][0] == "11"
    body = json.loads(summary.read_text())
    assert -1 <= body["mean"] <= 1 and body["stderr"] >= 0


def test_thermal_memory_mode(tmp_path):
    data = run_json(["thermal", "--family", "toric", "--D", "2", "--m", "1", "--L", "4", "--T", "3.0",
                     "--mode", "memory", "--trials", "5", "--sweeps", "200", "--summary", str(tmp_path / "m.json")],
                    tmp_path, "m.json")
    assert len(data["failure_times"]) == 5
    lo, hi = data["median_ci95"]
    assert lo <= data["median"] <= hi


def test_exit_codes(tmp_path, capsys):
    assert run(["build", "--bogus"]) == 64
    assert run(["build"]) == 64
    assert run(["analyze", json.dumps({"n_qubits": 2, "generators": ["XI", "ZI"]})]) == 2
    assert run(["analyze", str(tmp_path / "missing.json")]) == 2
    assert run(["barrier", "--family", "ising", "--D", "1", "--L", "4", "--logical", "XIII"]) == 2
    assert run(["thermal", "--family", "ising", "--D", "1", "--L", "4", "--T", "-1"]) == 2
    err = capsys.readouterr().err
    assert "usage" in err and "validation failed" in err


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    base = ["thermal", "--family", "ising", "--D", "2", "--L", "6", "--T", "2.0", "--sweeps", "30", "--chains", "3"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(base + ["--out", str(a), "--summary", str(tmp_path / "sa.json")]) == 0
    monkeypatch.setenv("STSLAB_THREADS", "3")
    assert run(base + ["--out", str(a.with_name("a2.csv")), "--summary", str(tmp_path / "sb.json")]) == 0
    assert run(base + ["--threads", "2", "--out", str(b), "--summary", str(tmp_path / "sc.json")]) == 0
    body = lambda p: p.read_text().split("\n", 1)[1]
    assert body(a) == body(a.with_name("a2.csv")) == body(b)


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--family", "toric", "--D", "3", "--m", "2", "--L", "2"],
        ["analyze", "--family", "ising", "--D", "2", "--L", "3"],
        ["thermal", "--family", "ising", "--D", "2", "--L", "4", "--T", "2.0", "--sweeps", "50", "--seed", "9"],
    ],
)
def test_byte_identical_across_processes(tmp_path, argv):
    out = tmp_path / "o"
    outputs = []
    for _ in range(2):
        subprocess.run([sys.executable, "-m", "stslab", *argv, "--out", str(out)], check=True, capture_output=True)
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
