import json
import subprocess
import sys

import numpy as np
import pytest

from symlab.cli import main
from symlab.core import random_hermitian


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def diag_file(tmp_path, name, values, kind="hermitian"):
    n = len(values)
    entries = [[[float(values[i]) if i == j else 0.0, 0.0] for j in range(n)]
               for i in range(n)]
    return write(tmp_path, name, {"n": n, "kind": kind, "entries": entries})


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_le_exit_codes(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [1.0, 2.0])
    b = diag_file(tmp_path, "b.json", [2.0, 3.0])
    code, out, _ = run_cli(capsys, "check", "le", a, b)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "pass" and report["dimension"] == 2

    code, out, _ = run_cli(capsys, "check", "le", b, a)
    assert code == 1
    assert json.loads(out)["verdict"] == "fail"


def test_check_adjacent_same_matrix(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [1.0, 2.0])
    code, _, _ = run_cli(capsys, "check", "adjacent", a, a)
    assert code == 1


def test_check_coexistent_exit_codes(tmp_path, capsys):
    p = diag_file(tmp_path, "p.json", [1.0, 0.0], kind="projection")
    q = write(tmp_path, "q.json", {
        "n": 2, "kind": "projection",
        "entries": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]})
    code, out, _ = run_cli(capsys, "check", "coexistent", p, q)
    assert code == 1  # non-commuting projections are never coexistent

    scalar = diag_file(tmp_path, "s.json", [0.3, 0.3], kind="effect")
    e = diag_file(tmp_path, "e.json", [0.9, 0.4], kind="effect")
    code, _, _ = run_cli(capsys, "check", "coexistent", scalar, e)
    assert code == 0


def test_parse_errors_exit_2(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"n": 2, "entries": [[[1, 0]]]})
    a = diag_file(tmp_path, "a.json", [1.0, 2.0])
    code, _, err = run_cli(capsys, "check", "le", bad, a)
    assert code == 2 and "error" in err

    not_effect = diag_file(tmp_path, "ne.json", [1.7, 0.0], kind="effect")
    code, _, _ = run_cli(capsys, "check", "le", not_effect, a)
    assert code == 2

    code, _, _ = run_cli(capsys, "check", "le", str(tmp_path / "missing.json"), a)
    assert code == 2

    code, _, _ = run_cli(capsys, "nonsense")
    assert code == 2


def test_compute_geomean_golden(tmp_path, capsys):
    a = diag_file(tmp_path, "a.json", [1.0, 4.0])
    b = diag_file(tmp_path, "b.json", [4.0, 1.0])
    out_path = str(tmp_path / "mean.json")
    code, _, _ = run_cli(capsys, "compute", "geomean", a, b, "--out", out_path)
    assert code == 0
    obj = json.loads(open(out_path).read())
    assert obj["entries"][0][0] == [2.0, 0.0]
    assert obj["entries"][1][1] == [2.0, 0.0]

    # bit-stable across runs
    first = open(out_path).read()
    run_cli(capsys, "compute", "geomean", a, b, "--out", out_path)
    assert open(out_path).read() == first


def test_compute_orthocomplement_and_sqrt(tmp_path, capsys):
    zero = diag_file(tmp_path, "z.json", [0.0, 0.0], kind="effect")
    code, out, _ = run_cli(capsys, "compute", "orthocomplement", zero)
    assert code == 0
    obj = json.loads(out)
    assert obj["entries"][0][0] == [1.0, 0.0] and obj["entries"][1][1] == [1.0, 0.0]

    sq = diag_file(tmp_path, "sq.json", [4.0, 9.0])
    code, out, _ = run_cli(capsys, "compute", "sqrt", sq)
    assert json.loads(out)["entries"][0][0] == [2.0, 0.0]


def test_compute_tau_automorphism_fixes_identity(tmp_path, capsys):
    t = diag_file(tmp_path, "t.json", [0.9, 0.6], kind="effect")
    eye = diag_file(tmp_path, "i.json", [1.0, 1.0], kind="effect")
    code, out, _ = run_cli(capsys, "compute", "vau", "--t", t, "--in", eye)
    assert code == 0
    obj = json.loads(out)
    m = np.array([[complex(*e) for e in row] for row in obj["entries"]])
    assert np.allclose(m, np.eye(2), atol=1e-9)

    # tau with T = I is the identity map
    a = diag_file(tmp_path, "a.json", [0.25, 0.7], kind="effect")
    ti = diag_file(tmp_path, "ti.json", [1.0, 1.0], kind="effect")
    code, out, _ = run_cli(capsys, "compute", "tau", "--t", ti, "--in", a)
    obj = json.loads(out)
    assert abs(obj["entries"][0][0][0] - 0.25) < 1e-9

    code, _, _ = run_cli(capsys, "compute", "tau", "--t", t)
    assert code == 2


def test_verify_report_and_determinism(capsys):
    code, out1, _ = run_cli(capsys, "verify", "T3.3-bicommutant", "--dim", "4",
                            "--trials", "10", "--seed", "5", "--json")
    assert code == 0
    rep1 = json.loads(out1)
    assert rep1["verdict"] == "pass"
    assert rep1["details"]["cardinalities"]["n4-middle"] == 16

    code, out2, _ = run_cli(capsys, "verify", "T3.3-bicommutant", "--dim", "4",
                            "--trials", "10", "--seed", "5", "--json")
    rep2 = json.loads(out2)
    for rep in (rep1, rep2):
        del rep["wall_time"]
    assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)


def test_verify_unknown_suite(capsys):
    code, _, err = run_cli(capsys, "verify", "T9.9-nothing")
    assert code == 2 and "unknown suite" in err


@pytest.mark.parametrize("suite,dim", [
    ("MEAN-sym", 3),
    ("VAU-order", 2),
    ("T2.2-dagger", 2),
    ("T4.1-gleason", 3),
])
def test_verify_small_suites_pass(capsys, suite, dim):
    code, out, _ = run_cli(capsys, "verify", suite, "--dim", str(dim),
                           "--trials", "20", "--seed", "3", "--json")
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_reconstruct_wigner_and_params_file(tmp_path, capsys):
    out_path = str(tmp_path / "params.json")
    code, out, _ = run_cli(capsys, "reconstruct", "wigner", "--dim", "4",
                           "--seed", "7", "--out", out_path, "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "pass"
    assert rep["details"]["gauge_defect"] <= 1e-6
    params = json.loads(open(out_path).read())
    assert params["class"] == "wigner" and params["matrix"]["n"] == 4


def test_reconstruct_order_auto_conjugate(capsys):
    code, out, _ = run_cli(capsys, "reconstruct", "order-auto", "--dim", "3",
                           "--seed", "2", "--oracle-spec", "conjugate", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "pass"
    assert rep["details"]["shift_error"] <= 1e-8
    assert rep["details"]["gauge_residual"] <= 1e-7
    assert rep["details"]["flag_correct"] is True


def test_reconstruct_adversarial_exit_1(capsys):
    code, _, err = run_cli(capsys, "reconstruct", "order-auto", "--dim", "3",
                           "--oracle-spec", "order-reversing")
    assert code == 1 and "rejected" in err

    code, _, _ = run_cli(capsys, "reconstruct", "optimal-wigner", "--dim", "3",
                         "--oracle-spec", "constant")
    assert code == 1


def test_reconstruct_unknown_spec(capsys):
    code, _, err = run_cli(capsys, "reconstruct", "wigner", "--oracle-spec", "nope")
    assert code == 2 and "unknown oracle spec" in err


def test_gen_kinds_and_replay(tmp_path, capsys):
    for kind in ("hermitian", "effect", "projection", "unitary"):
        path = str(tmp_path / f"{kind}.json")
        code, _, _ = run_cli(capsys, "gen", kind, "--dim", "3", "--seed", "1",
                             "--out", path)
        assert code == 0
        obj = json.loads(open(path).read())
        assert obj["kind"] == kind and obj["n"] == 3

    # generated files parse back through check
    a = str(tmp_path / "hermitian.json")
    code, _, _ = run_cli(capsys, "check", "le", a, a)
    assert code == 0


def test_gen_deterministic(tmp_path, capsys):
    p1 = str(tmp_path / "g1.json")
    p2 = str(tmp_path / "g2.json")
    run_cli(capsys, "gen", "effect", "--dim", "4", "--seed", "11", "--out", p1)
    run_cli(capsys, "gen", "effect", "--dim", "4", "--seed", "11", "--out", p2)
    assert open(p1).read() == open(p2).read()


def test_counterexample_replay_through_check(tmp_path, capsys):
    # counterexamples embed two matrices and a relation under which check
    # reproduces the violation with exit code 1
    from symlab.cli import counterexample_to_obj
    from symlab.suites import CounterExample, relation_holds

    a = random_hermitian(3, 21)
    b = random_hermitian(3, 22)
    assert relation_holds("le", a, b) is False
    ce = CounterExample("le", 1e-9, a, b, "synthetic")
    obj = counterexample_to_obj(ce)
    fa = write(tmp_path, "ce_a.json", obj["a"])
    fb = write(tmp_path, "ce_b.json", obj["b"])
    code, _, _ = run_cli(capsys, "check", obj["relation"], fa, fb,
                         "--tol", str(obj["tol"]))
    assert code == 1


def test_max_dim_env_guard(tmp_path, capsys, monkeypatch):
    a = diag_file(tmp_path, "a.json", [1.0, 2.0, 3.0])
    monkeypatch.setenv("SYMLAB_MAX_DIM", "2")
    code, _, err = run_cli(capsys, "check", "le", a, a)
    assert code == 2 and "max_dim" in err
    monkeypatch.setenv("SYMLAB_MAX_DIM", "8")
    code, _, _ = run_cli(capsys, "check", "le", a, a)
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symlab.cli", "gen", "hermitian", "--dim", "2",
         "--seed", "3"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 2
