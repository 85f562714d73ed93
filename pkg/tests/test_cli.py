import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from hhsynth.circuit import parse_qasm
from hhsynth.cli import main
from hhsynth.linalg import ginibre_matrix, read_matrix, write_matrix


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _synth(*extra, n=2, seed=1):
    assert main(["random", str(n), "m.txt", "--seed", str(seed)]) == 0
    return main(["synth", "m.txt", "c.qasm", "r.json", *extra])


def test_random_round_trip(workdir):
    assert main(["random", "2", "a.txt", "--seed", "1"]) == 0
    assert main(["random", "2", "b.txt", "--seed", "1"]) == 0
    assert (workdir / "a.txt").read_bytes() == (workdir / "b.txt").read_bytes()
    m = read_matrix("a.txt")
    assert m.shape == (4, 4)
    write_matrix(m, "c.txt")
    assert (workdir / "c.txt").read_bytes() == (workdir / "a.txt").read_bytes()
    assert main(["verify", "a.txt", "--self-unitary"]) == 0


def test_random_bad_size(workdir, capsys):
    assert main(["random", "0", "a.txt"]) == 2
    assert "n_qubits" in capsys.readouterr().err


def test_synth_one_qubit(workdir):
    assert _synth("--verify", n=1) == 0
    qasm = (workdir / "c.qasm").read_text()
    assert "// global_phase:" in qasm
    c = parse_qasm(qasm)
    assert len(c) <= 6
    report = json.loads((workdir / "r.json").read_text())
    assert report["residual"] <= 1e-12
    assert report["counts"]["total"] == len(c)


def test_synth_no_merge_has_more_gates(workdir):
    assert _synth("--verify", n=3) == 0
    merged = json.loads((workdir / "r.json").read_text())
    assert main(["synth", "m.txt", "c2.qasm", "r2.json", "--verify", "--no-merge"]) == 0
    plain = json.loads((workdir / "r2.json").read_text())
    assert plain["counts"]["total"] > merged["counts"]["total"]
    assert merged["residual"] <= 1e-12 and plain["residual"] <= 1e-12


def test_synth_identity_file(workdir):
    write_matrix(np.eye(8), "id.txt")
    assert main(["synth", "id.txt", "c.qasm", "r.json", "--verify"]) == 0
    assert json.loads((workdir / "r.json").read_text())["residual"] <= 1e-12


def test_synth_flags(workdir):
    assert _synth("--block-size", "2", "--nx", "2", "--no-cancel-x", "--threads", "1", n=3) == 0
    report = json.loads((workdir / "r.json").read_text())
    assert report["residual"] is None
    assert report["counts"]["x"] == 8


def test_synth_exit_codes(workdir):
    (workdir / "bad.txt").write_text("2\n1,0 0,0\n")
    assert main(["synth", "bad.txt", "c.qasm", "r.json"]) == 2
    write_matrix(np.eye(3), "three.txt")
    assert main(["synth", "three.txt", "c.qasm", "r.json"]) == 2
    write_matrix(ginibre_matrix(4, 0), "g.txt")
    assert main(["synth", "g.txt", "c.qasm", "r.json"]) == 3
    assert _synth("--verify", "--tol", "1e-300") == 4
    # outputs are still written for inspection
    assert json.loads((workdir / "r.json").read_text())["residual"] > 1e-300
    assert main(["synth", "missing.txt", "c.qasm", "r.json"]) == 1


def test_synth_verify_cap(workdir):
    assert _synth("--verify", n=8) == 2


def test_verify_matching_pair(workdir, capsys):
    assert _synth() == 0
    assert main(["verify", "m.txt", "c.qasm"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] and out["residual"] <= 1e-12


def test_verify_tampered_angle(workdir):
    assert _synth() == 0
    lines = (workdir / "c.qasm").read_text().splitlines()
    i = next(i for i, ln in enumerate(lines) if ln.startswith("ry("))
    lines[i] = "ry(0.123) " + lines[i].split(") ", 1)[1]
    (workdir / "c.qasm").write_text("\n".join(lines) + "\n")
    assert main(["verify", "m.txt", "c.qasm"]) == 4


def test_verify_exit_codes(workdir):
    write_matrix(ginibre_matrix(4, 0), "g.txt")
    assert main(["verify", "g.txt", "--self-unitary"]) == 3
    assert _synth() == 0
    (workdir / "junk.qasm").write_text("OPENQASM 2.0;\nqreg q[2];\nh q[0];\n")
    assert main(["verify", "m.txt", "junk.qasm"]) == 2
    assert main(["random", "3", "m3.txt"]) == 0
    assert main(["verify", "m3.txt", "c.qasm"]) == 2
    assert main(["verify", "m.txt", "nope.qasm"]) == 1


def test_counts(capsys):
    assert main(["counts", "5"]) == 0
    assert json.loads(capsys.readouterr().out) == {"cnot": 2048, "rotation": 2048}
    assert main(["counts", "1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"cnot": 8, "rotation": 8}
    assert main(["counts", "0"]) == 2


def test_bench_csv(workdir):
    args = ["bench", "--min-qubits", "2", "--max-qubits", "3", "--modes",
            "modified-qr,generic-qr,full-synth", "--seeds", "2", "--out", "b.csv", "--quiet"]
    assert main(args) == 0
    rows = list(csv.DictReader(open("b.csv")))
    assert list(rows[0]) == ["mode", "n", "seed", "time_ms", "flops_mul", "flops_add", "cnot", "rotation", "x"]
    assert len(rows) == 12
    synth = [r for r in rows if r["mode"] == "full-synth"]
    assert all(int(r["cnot"]) > 0 for r in synth)
    assert all(r["cnot"] == "" for r in rows if r["mode"] != "full-synth")
    # append mode adds rows without a second header, deterministic apart from times
    assert main(args + ["--append"]) == 0
    again = list(csv.DictReader(open("b.csv")))
    assert len(again) == 24
    strip = [{k: v for k, v in r.items() if k != "time_ms"} for r in again]
    assert strip[:12] == strip[12:]


def test_bench_rejects(workdir):
    assert main(["bench", "--modes", "fast-qr", "--out", "b.csv"]) == 2
    assert main(["bench", "--modes", "generic-qr", "--max-qubits", "13", "--out", "b.csv"]) == 2


def test_round_trip_many_seeds(workdir):
    for n in range(1, 7):
        for seed in range(10):
            assert main(["random", str(n), "m.txt", "--seed", str(seed)]) == 0
            assert main(["synth", "m.txt", "c.qasm", "r.json", "--verify"]) == 0
            assert main(["verify", "m.txt", "c.qasm"]) == 0


def test_console_entry_point(workdir):
    out = subprocess.run([sys.executable, "-m", "hhsynth", "counts", "3"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout) == {"cnot": 128, "rotation": 128}
    out = subprocess.run([sys.executable, "-m", "hhsynth", "bogus"], capture_output=True, text=True)
    assert out.returncode == 2
