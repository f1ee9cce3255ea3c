import csv
import json
import os
import subprocess
import sys

import pytest

from orthowell.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_modes_json(capsys):
    code, out, _ = run(capsys, "modes", "--family", "III", "--cutoff", "4")
    assert code == 0
    report = json.loads(out)
    assert report["outputs"]["levels"][:3] == ["0+", "2+", "2-"]


def test_gram_csv_format(capsys):
    code, out, _ = run(capsys, "gram", "--family", "I", "--cutoff", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0][0] == "mode" and len(rows) == len(rows[0])
    # 17 significant digits
    assert rows[1][1] == "1.0000000000000000e+00"


def test_gram_cross_and_sift(capsys):
    code, out, _ = run(capsys, "gram", "--family", "I", "--cross", "II", "--cutoff", "3")
    assert code == 0 and "matrix" in json.loads(out)["outputs"]
    code, out, _ = run(capsys, "sift", "--cutoff", "6")
    assert code == 0
    assert sorted(f["family"] for f in json.loads(out)["outputs"]["families"]) == ["I", "II", "III", "IV"]


def test_expand_csv_with_sidecar(tmp_path, capsys):
    target = tmp_path / "s.csv"
    code, _, _ = run(capsys, "expand", "--family", "IV", "--cutoff", "15", "--fn", "const1",
                     "--emit", "csv", "--samples", "21", "--out", str(target))
    assert code == 0
    rows = list(csv.reader(target.read_text().splitlines()))
    assert rows[0] == ["x", "f", "s_n"] and len(rows) == 22
    assert float(rows[1][2]) == pytest.approx(0.0, abs=1e-12)
    report = json.loads((tmp_path / "s.csv.json").read_text())
    assert report["passed"] is True


def test_operators_checks(capsys):
    code, out, _ = run(capsys, "operators", "--check", "all", "--cutoff", "4", "--ref-cutoff", "16")
    assert code == 0
    outputs = json.loads(out)["outputs"]
    assert outputs["linear_dependence"]["hamiltonian_residual"] == 0.0
    code, out, _ = run(capsys, "operators", "--cutoff", "2", "--ref-cutoff", "4", "--matrix", "III", "--kind", "projector")
    assert code == 0 and out.startswith("mode,")


def test_kets_mixed_converge(capsys):
    assert run(capsys, "kets-check")[0] == 0
    code, out, _ = run(capsys, "mixed-bc", "--hmax", "4")
    assert code == 0
    assert json.loads(out)["outputs"]["contradicts_no_solution_claim"] is True
    code, out, _ = run(capsys, "converge", "--p-target", "3.0", "--a-list", "2,4,8,16", "--emit", "csv")
    assert code == 0 and out.splitlines()[0] == "a,j,p_selected,momentum_gap,error_even,error_odd"


def test_converge_rejects_singlet_family(capsys):
    assert run(capsys, "converge", "--family", "I")[0] == 3


@pytest.mark.parametrize(
    "argv, code",
    [
        (["nosuch"], 2),
        (["modes", "--cutoff", "abc"], 2),
        (["modes", "--cutoff", "0"], 3),
        (["modes", "--family", "VII"], 3),
        (["gram", "--a", "-1"], 3),
        (["sift", "--cutoff", "1"], 3),
        (["modes", "--tol", "0"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unwritable_output(capsys, tmp_path):
    assert run(capsys, "modes", "--out", str(tmp_path / "missing" / "x.json"))[0] == 4


def test_byte_identical_reruns(tmp_path, capsys):
    # the report echoes --out, so both runs write the same path
    target, blobs = tmp_path / "r.json", []
    for _ in range(2):
        assert run(capsys, "operators", "--cutoff", "4", "--ref-cutoff", "16", "--out", str(target))[0] == 0
        blobs.append(target.read_bytes())
    assert blobs[0] == blobs[1]
    first = main(["converge", "--p-target", "3.0", "--emit", "csv"]), capsys.readouterr().out
    second = main(["converge", "--p-target", "3.0", "--emit", "csv"]), capsys.readouterr().out
    assert first == second


def test_console_entry_point_and_worker_env(tmp_path):
    env = dict(os.environ, ORTHOWELL_MAX_WORKERS="1")
    res = subprocess.run([sys.executable, "-m", "orthowell.cli", "converge", "--p-target", "3.0"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
    env["ORTHOWELL_MAX_WORKERS"] = "zero"
    res = subprocess.run([sys.executable, "-m", "orthowell.cli", "converge"], capture_output=True, text=True, env=env)
    assert res.returncode == 3
