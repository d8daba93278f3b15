import csv
import io
import json
import math
import subprocess
import sys

import pytest

import reference as ref
from oraclebench.cli import DEFAULT_SEED, main
from oraclebench.oracles import Permutation, save_permutation


@pytest.fixture
def graphs(tmp_path):
    return {
        "a": ref.write_graph(tmp_path / "a.txt", 6, ref.ASYMMETRIC_6[0]),
        "a_relabeled": ref.write_graph(tmp_path / "a2.txt", 6,
                                       [((u + 2) % 6, (v + 2) % 6) for u, v in ref.ASYMMETRIC_6[0]]),
        "b": ref.write_graph(tmp_path / "b.txt", 6, ref.ASYMMETRIC_6[1]),
        "k3": ref.write_graph(tmp_path / "k3.txt", 3, [(0, 1), (1, 2), (0, 2)]),
    }


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_identities_default(capsys):
    code, out, _ = run(["verify-identities"], capsys)
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 8
    assert all(r["passed"] and r["n"] == 3 and r["schema_version"] == 1 for r in lines)
    assert lines[0]["seed"] == DEFAULT_SEED


def test_verify_identities_over_cap(capsys):
    code, _, err = run(["verify-identities", "--n", "9"], capsys)
    assert code == 2 and "cap" in err and "6" in err


def test_verify_identities_fault_exits_one():
    proc = subprocess.run([sys.executable, "-m", "oraclebench", "verify-identities", "--n", "2", "--inject-fault"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert all(not json.loads(line)["passed"] for line in proc.stdout.splitlines())


def test_verify_identities_csv_and_perm_file(tmp_path, capsys):
    path = tmp_path / "p.txt"
    save_permutation(Permutation(2, [2, 3, 0, 1]), path)
    code, out, _ = run(["verify-identities", "--perm", str(path), "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8 and {r["n"] for r in rows} == {"2"}
    code, _, err = run(["verify-identities", "--perm", str(path), "--n", "3"], capsys)
    assert code == 2
    path.write_text("2\n0 0 1 2\n")
    code, _, err = run(["verify-identities", "--perm", str(path)], capsys)
    assert code == 2 and "p.txt" in err


def test_promise_reports(capsys):
    code, out, _ = run(["promise", "--case", "identical", "--trials", "20"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == "identical-with-confidence"
    assert report["error_bound"] == 9.5367431640625e-07
    assert abs(report["p_zero"]) < 1e-12 and abs(report["p_one"] - 1) < 1e-12
    code, out, _ = run(["promise", "--case", "disjoint", "--trials", "20", "--seed", "4"], capsys)
    report = json.loads(out)
    assert abs(report["p_zero"] - 0.5) < 1e-12 and abs(report["p_one"] - 0.5) < 1e-12
    assert report["verdict"] == "disjoint"


@pytest.mark.parametrize("argv", [
    ["promise", "--subset-size", "0"],
    ["promise", "--n", "3", "--subset-size", "5", "--case", "disjoint"],
    ["promise", "--n", "11"],
    ["promise", "--trials", "0"],
])
def test_promise_bad_config(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_grover_scaling_rows(capsys):
    code, out, _ = run(["grover-scaling", "--n-min", "2", "--n-max", "6"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "N", "iterations", "sf_queries", "mean_success_probability"]
    assert len(rows) == 6
    n, big_n, k, q, p = rows[1]
    assert (int(n), int(big_n), int(k), int(q)) == (2, 4, 1, 2)
    assert abs(float(p) - 1.0) < 1e-12
    for row in rows[1:]:
        assert int(row[3]) <= 2 * math.ceil(math.pi / 4 * math.sqrt(int(row[1])))


@pytest.mark.parametrize("argv", [
    ["grover-scaling", "--n-min", "5", "--n-max", "3"],
    ["grover-scaling", "--n-max", "9"],
    ["grover-scaling", "--n-min", "0"],
])
def test_grover_scaling_bad_range(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_graph_iso(graphs, capsys):
    code, out, _ = run(["graph-iso", str(graphs["a"]), str(graphs["a_relabeled"])], capsys)
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "isomorphic"
    assert report["overlap"] == 1.0 and report["error_bound"] == 2.0 ** -20
    code, out, _ = run(["graph-iso", str(graphs["a"]), str(graphs["b"]), "--trials", "30"], capsys)
    report = json.loads(out)
    assert report["verdict"] == "non-isomorphic" and report["certain"]
    assert report["p_zero"] == 0.5


def test_graph_iso_rejects_automorphic(graphs, capsys):
    code, _, err = run(["graph-iso", str(graphs["k3"]), str(graphs["k3"])], capsys)
    assert code == 2 and "automorphic" in err and "k3.txt" in err


def test_graph_iso_bad_file(graphs, tmp_path, capsys):
    bad = tmp_path / "broken.txt"
    bad.write_text("6 2\n0 1\n")
    code, _, err = run(["graph-iso", str(graphs["a"]), str(bad)], capsys)
    assert code == 2 and "broken.txt" in err
    code, _, err = run(["graph-iso", str(graphs["a"]), str(tmp_path / "missing.txt")], capsys)
    assert code == 2 and "missing.txt" in err


def test_usage_errors_exit_two():
    proc = subprocess.run([sys.executable, "-m", "oraclebench", "no-such-command"], capture_output=True)
    assert proc.returncode == 2


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("ORACLEBENCH_SEED", "17")
    _, out, _ = run(["promise", "--trials", "5"], capsys)
    assert json.loads(out)["seed"] == 17
    _, out, _ = run(["promise", "--trials", "5", "--seed", "3"], capsys)
    assert json.loads(out)["seed"] == 3
    monkeypatch.setenv("ORACLEBENCH_SEED", "seventeen")
    assert run(["promise"], capsys)[0] == 2


def reproducibility_commands(graphs):
    return [
        ["verify-identities", "--n", "2"],
        ["verify-identities", "--n", "2", "--format", "csv"],
        ["promise", "--case", "disjoint", "--trials", "25"],
        ["promise", "--case", "identical", "--format", "csv"],
        ["grover-scaling", "--n-max", "4", "--trials", "2"],
        ["grover-scaling", "--n-max", "3", "--format", "json"],
        ["graph-iso", str(graphs["a"]), str(graphs["b"])],
    ]


def test_same_seed_gives_byte_identical_reports(graphs, tmp_path, capsys):
    for i, argv in enumerate(reproducibility_commands(graphs)):
        outputs = []
        for attempt in range(2):
            path = tmp_path / f"out{i}_{attempt}.txt"
            code, stdout, _ = run(argv + ["--seed", "123", "--out", str(path)], capsys)
            assert code == 0
            assert path.read_bytes() == stdout.encode()
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1], argv
