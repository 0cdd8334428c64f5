"""Command line front end.

Subcommands: ``check`` (binary relations), ``compute`` (single-shot
operations), ``verify`` (named suites), ``reconstruct`` (built-in oracle
reconstruction runs) and ``gen`` (random matrix files).

Matrix files are UTF-8 JSON with ``n``, row-major ``entries`` of [re, im]
pairs and an optional ``kind`` tag validated on load.  Reports are JSON on
stdout with deterministic field values for a fixed command and seed (only
``wall_time`` varies).  Exit codes: 0 relation holds / suite passes, 1
violated / rejected, 2 usage or parse errors, 3 unknown or numerical
failure.  SYMLAB_MAX_DIM overrides the dimension guard.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

import numpy as np

from .core import DEFAULT_TOL, ToleranceContext, as_hermitian, spectral_norm
from .errors import (
    NumericalFailure,
    OracleNotInClass,
    SymlabError,
)

USAGE_ERROR, VIOLATED, HOLDS, UNDECIDED = 2, 1, 0, 3

KINDS = ("hermitian", "effect", "projection", "unitary")


def build_tolerance(tol_value: Optional[float]) -> ToleranceContext:
    max_dim = int(os.environ.get("SYMLAB_MAX_DIM", DEFAULT_TOL.max_dim))
    if tol_value is None:
        return ToleranceContext(max_dim=max_dim)
    return ToleranceContext(atol=tol_value, rtol=tol_value, max_dim=max_dim)


# --- matrix files -------------------------------------------------------------


def matrix_to_obj(m: np.ndarray, kind: str = "hermitian") -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {
        "n": int(m.shape[0]),
        "kind": kind,
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def obj_to_matrix(obj: dict, tol: ToleranceContext) -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ValueError("matrix file needs 'n' and 'entries'")
    n = int(obj["n"])
    entries = obj["entries"]
    if len(entries) != n or any(len(row) != n for row in entries):
        raise ValueError(f"entries shape does not match n = {n}")
    m = np.array([[complex(e[0], e[1]) for e in row] for row in entries])
    file_tol = ToleranceContext(atol=float(obj.get("atol", tol.atol)),
                                rtol=tol.rtol, eig_cluster=tol.eig_cluster,
                                max_dim=tol.max_dim)
    kind = obj.get("kind", "hermitian")
    if kind not in KINDS:
        raise ValueError(f"unknown matrix kind {kind!r}")
    if kind == "unitary":
        defect = spectral_norm(m.conj().T @ m - np.eye(n))
        if defect > 100 * file_tol.effective(m):
            raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
        return m
    if spectral_norm(m - m.conj().T) > file_tol.effective(m):
        raise ValueError("matrix is not hermitian within tolerance")
    m = as_hermitian(m, file_tol)
    if kind == "effect":
        from .effects import as_effect

        return as_effect(m, file_tol)
    if kind == "projection":
        from .core import is_projection_matrix

        if not is_projection_matrix(m, file_tol):
            raise ValueError("matrix is not a projection within tolerance")
    return m


def load_matrix(path: str, tol: ToleranceContext) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return obj_to_matrix(json.load(fh), tol)


def dump_json(obj: dict, compact: bool) -> str:
    if compact:
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return json.dumps(obj, sort_keys=True, indent=2)


def write_matrix(path: Optional[str], m: np.ndarray, kind: str, compact: bool):
    text = dump_json(matrix_to_obj(m, kind), compact)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- reports ------------------------------------------------------------------


def counterexample_to_obj(ce) -> dict:
    return {
        "relation": ce.relation,
        "tol": ce.tol,
        "note": ce.note,
        "a": matrix_to_obj(ce.a),
        "b": matrix_to_obj(ce.b),
    }


def emit_report(command: str, verdict: str, *, seed: int = 0, dimension: int = 0,
                trials: int = 0, res_max: float = 0.0, res_mean: float = 0.0,
                counterexample: Optional[dict] = None, details: Optional[dict] = None,
                wall_time: float = 0.0, compact: bool = False):
    report = {
        "command": command,
        "seed": seed,
        "dimension": dimension,
        "trials": trials,
        "verdict": verdict,
        "residuals": {"max": res_max, "mean": res_mean},
        "counterexample": counterexample,
        "details": details or {},
        "wall_time": round(wall_time, 6),
    }
    print(dump_json(report, compact))


# --- subcommands ----------------------------------------------------------------


def cmd_check(args) -> int:
    from .suites import relation_holds

    tol = build_tolerance(args.tol)
    a = load_matrix(args.file_a, tol)
    b = load_matrix(args.file_b, tol)
    start = time.perf_counter()
    held = relation_holds(args.relation, a, b, tol)
    wall = time.perf_counter() - start
    verdict = "pass" if held is True else ("unknown" if held == "unknown" else "fail")
    emit_report(f"check {args.relation}", verdict, seed=args.seed or 0,
                dimension=a.shape[0], trials=1, wall_time=wall, compact=args.json)
    if held is True:
        return HOLDS
    return UNDECIDED if held == "unknown" else VIOLATED


def cmd_compute(args) -> int:
    from . import effects
    from .core import sqrt_psd
    from .zoo import tau_automorphism, tau_map

    tol = build_tolerance(args.tol)
    op = args.op
    if op in ("tau", "vau"):
        if not args.t or not args.operand_in:
            raise ValueError(f"{op} needs --t and --in matrix files")
        t = load_matrix(args.t, tol)
        a = load_matrix(args.operand_in, tol)
        result = tau_map(t, a, tol) if op == "tau" else tau_automorphism(t, a, tol)
        kind = "effect"
    else:
        files = args.files
        expected = 2 if op in ("geomean", "seqprod") else 1
        if len(files) != expected:
            raise ValueError(f"{op} takes exactly {expected} matrix file(s)")
        mats = [load_matrix(f, tol) for f in files]
        if op == "geomean":
            result, kind = effects.geometric_mean(*mats, tol), "hermitian"
        elif op == "seqprod":
            result, kind = effects.sequential_product(*mats, tol), "effect"
        elif op == "orthocomplement":
            result, kind = effects.orthocomplement(mats[0], tol), "effect"
        elif op == "sqrt":
            result, kind = sqrt_psd(mats[0], tol), "hermitian"
        else:
            raise ValueError(f"unknown operation {op!r}")
    write_matrix(args.out, result, kind, args.json)
    return HOLDS


def cmd_verify(args) -> int:
    from .suites import SUITES, run_suite

    if args.suite not in SUITES:
        print(f"unknown suite id {args.suite!r}; known: {', '.join(sorted(SUITES))}",
              file=sys.stderr)
        return USAGE_ERROR
    tol = build_tolerance(args.tol)
    start = time.perf_counter()
    outcome = run_suite(args.suite, dim=args.dim, trials=args.trials,
                        seed=args.seed, tol=tol)
    wall = time.perf_counter() - start
    ce = counterexample_to_obj(outcome.counterexample) if outcome.counterexample else None
    emit_report(f"verify {args.suite}", "pass" if outcome.passed else "fail",
                seed=args.seed, dimension=outcome.dim, trials=outcome.trials,
                res_max=outcome.max_residual, res_mean=outcome.mean_residual,
                counterexample=ce, details=outcome.details, wall_time=wall,
                compact=args.json)
    return HOLDS if outcome.passed else VIOLATED


def _reconstruct_run(class_id: str, spec: str, dim: int, seed: int,
                     tol: ToleranceContext, residual_tol: float):
    from .oracles import (
        adversaries,
        congruence_value_residual,
        ground_truth,
        unitary_gauge_defect,
    )

    truth = None
    if spec in ("linear", "conjugate"):
        truth = ground_truth(class_id, dim, seed, conjugates=(spec == "conjugate"),
                             tol=tol)
        oracle = truth.oracle
    else:
        battery = adversaries(class_id, dim, seed, tol)
        if spec not in battery:
            raise ValueError(
                f"unknown oracle spec {spec!r}; use linear, conjugate or one of "
                f"{', '.join(sorted(battery))}")
        oracle = battery[spec]

    params: dict = {"class": class_id, "oracle_spec": spec}
    details: dict = {}
    if class_id in ("wigner", "optimal-wigner"):
        from .projective import optimal_wigner_reconstruct, semilinear_reconstruct

        fn = semilinear_reconstruct if class_id == "wigner" else optimal_wigner_reconstruct
        fit = fn(oracle, dim, tol, seed=(seed, 41))
        op, residual = fit.operator, fit.residual
        if fit.gleason_min is not None:
            details["gleason_min"] = fit.gleason_min
        params["matrix"] = matrix_to_obj(op.matrix, "unitary")
        params["conjugates"] = op.conjugates
    else:
        from .reconstruct import (
            EffectSymmetryEstimator,
            HermitianSymmetryEstimator,
            OrderAutomorphismEstimator,
            ProjectionSymmetryEstimator,
        )

        cls = {
            "order-auto": OrderAutomorphismEstimator,
            "effect-ortho": EffectSymmetryEstimator,
            "proj-commute": ProjectionSymmetryEstimator,
            "herm-commute": HermitianSymmetryEstimator,
        }[class_id]
        est = cls(dim, seed=(seed, 42), tol=tol).fit(oracle)
        op, residual = est.operator_, est.residual_
        params["matrix"] = matrix_to_obj(op.matrix)
        params["conjugates"] = op.conjugates
        if class_id == "order-auto":
            params["shift"] = matrix_to_obj(est.shift_)
        if class_id == "herm-commute":
            params["tables"] = [[[float(a), float(b)] for a, b in tab]
                                for tab in est.tables_]
        if class_id == "proj-commute":
            details["pairings"] = dict(
                zip(*np.unique(est.pairings_, return_counts=True)))
            details["pairings"] = {k: int(v) for k, v in details["pairings"].items()}

    passed = residual <= residual_tol
    if truth is not None:
        if "shift" in truth.params:
            details["shift_error"] = spectral_norm(
                est.shift_ - truth.params["shift"])
            details["gauge_residual"] = congruence_value_residual(
                op.matrix, truth.params["matrix"], seed=(seed, 43), trials=50, tol=tol)
            passed = passed and details["shift_error"] <= 1e-8 \
                and details["gauge_residual"] <= 1e-7
        else:
            details["gauge_defect"] = abs(unitary_gauge_defect(
                op.matrix, truth.params["matrix"]))
            passed = passed and details["gauge_defect"] <= 1e-6
        details["flag_correct"] = bool(op.conjugates == truth.params["conjugates"])
        passed = passed and details["flag_correct"]
    return passed, residual, params, details


def cmd_reconstruct(args) -> int:
    tol = build_tolerance(args.tol)
    residual_tol = args.tol if args.tol is not None else 1e-6
    start = time.perf_counter()
    passed, residual, params, details = _reconstruct_run(
        args.class_id, args.oracle_spec, args.dim, args.seed, tol, residual_tol)
    wall = time.perf_counter() - start
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(params, args.json) + "\n")
        details["parameters_file"] = args.out
    else:
        details["parameters"] = params
    emit_report(f"reconstruct {args.class_id}", "pass" if passed else "fail",
                seed=args.seed, dimension=args.dim, trials=1, res_max=residual,
                res_mean=residual, details=details, wall_time=wall,
                compact=args.json)
    return HOLDS if passed else VIOLATED


def cmd_gen(args) -> int:
    from .core import random_effect, random_hermitian, random_projection, random_unitary

    tol = build_tolerance(args.tol)
    n, seed = args.dim, args.seed
    if args.kind == "hermitian":
        m = random_hermitian(n, seed, tol)
    elif args.kind == "effect":
        m = random_effect(n, seed, tol)
    elif args.kind == "projection":
        m = random_projection(n, args.rank or 1, seed, tol)
    elif args.kind == "unitary":
        m = random_unitary(n, seed, tol)
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    write_matrix(args.out, m, args.kind, args.json)
    return HOLDS


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symlab",
        description="relations, products and symmetry reconstructions for "
                    "hermitian matrix sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--json", action="store_true",
                       help="compact single-line JSON output")

    p = sub.add_parser("check", help="evaluate a binary relation on two matrix files")
    p.add_argument("relation",
                   choices=["le", "adjacent", "commute", "orthogonal", "coexistent"])
    p.add_argument("file_a")
    p.add_argument("file_b")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compute", help="apply an operation and write a matrix file")
    p.add_argument("op", choices=["geomean", "seqprod", "tau", "vau",
                                  "orthocomplement", "sqrt"])
    p.add_argument("files", nargs="*", help="operand matrix files")
    p.add_argument("--t", help="parameter effect T for tau/vau")
    p.add_argument("--in", dest="operand_in", help="input effect for tau/vau")
    p.add_argument("--out", help="output matrix file (stdout when omitted)")
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reconstruct",
                       help="recover symmetry parameters from a built-in oracle")
    p.add_argument("class_id", choices=["order-auto", "effect-ortho", "proj-commute",
                                        "herm-commute", "wigner", "optimal-wigner"])
    p.add_argument("--oracle-spec", default="linear",
                   help="linear, conjugate, or an adversarial oracle name")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--out", help="file for the recovered, gauge-normalized parameters")
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("gen", help="write a random matrix file")
    p.add_argument("kind", choices=list(KINDS))
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--out", help="output matrix file (stdout when omitted)")
    common(p)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except OracleNotInClass as exc:
        print(f"oracle rejected: {exc}", file=sys.stderr)
        return VIOLATED
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return UNDECIDED
    except (SymlabError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
