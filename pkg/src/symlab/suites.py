"""Named verification suites behind the command line ``verify`` subcommand.

Every suite runs a seeded battery of checks and returns a
:class:`SuiteOutcome`; on failure it carries a counterexample pair together
with the relation (and tolerance) under which the ``check`` subcommand
reproduces the violation with exit code 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .commutant import bicommutant_rank_one_test, commute, second_commutant_projections
from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    random_effect,
    random_hermitian,
    random_projection,
    random_unitary,
    rng_for,
    spectral_norm,
)
from .effects import NO, UNKNOWN, YES, as_effect, coexistent, geometric_mean
from .errors import OracleNotInClass
from .oracles import congruence_value_residual, ground_truth, unitary_gauge_defect
from .order import interval_chain_check, is_adjacent, loewner_le
from .projective import (
    Ray,
    gleason_fit,
    optimal_wigner_reconstruct,
    random_ray,
    semilinear_reconstruct,
    tomography_family,
    transition_probability,
)
from .zoo import tau_automorphism, tau_map, tau_map_chain

__all__ = [
    "SuiteOutcome",
    "CounterExample",
    "SUITES",
    "run_suite",
    "relation_holds",
    "random_ordered_effect_pair",
    "random_invertible_effect",
    "random_pd",
    "coexistence_grid_verdict",
    "diagonal_rotation_instance",
]


@dataclass(frozen=True)
class CounterExample:
    """Pair of matrices plus the relation under which ``check`` exits 1."""

    relation: str
    tol: float
    a: np.ndarray
    b: np.ndarray
    note: str = ""


@dataclass
class SuiteOutcome:
    suite: str
    dim: int
    trials: int
    seed: int
    passed: bool = True
    residuals: list = field(default_factory=list)
    counterexample: Optional[CounterExample] = None
    details: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return float(max(self.residuals, default=0.0))

    @property
    def mean_residual(self) -> float:
        return float(np.mean(self.residuals)) if self.residuals else 0.0

    def fail(self, counterexample: Optional[CounterExample], note: str):
        self.passed = False
        if self.counterexample is None and counterexample is not None:
            self.counterexample = counterexample
        self.details.setdefault("failures", []).append(note)


def relation_holds(relation: str, a, b, tol: ToleranceContext = DEFAULT_TOL):
    """Evaluate a binary relation by name; returns True/False or "unknown"."""
    if relation == "le":
        return loewner_le(a, b, tol)
    if relation == "adjacent":
        return is_adjacent(a, b, tol)
    if relation == "commute":
        return commute(a, b, tol)
    if relation == "orthogonal":
        return transition_probability(a, b, tol) <= tol.atol + tol.rtol
    if relation == "coexistent":
        verdict = coexistent(a, b, tol).verdict
        if verdict == UNKNOWN:
            return "unknown"
        return verdict == YES
    raise ValueError(f"unknown relation {relation!r}")


def _violated_le_pair(x, y, tol: ToleranceContext) -> CounterExample:
    """A counterexample under "le" out of two matrices that should be equal."""
    if not loewner_le(x, y, tol):
        return CounterExample("le", tol.atol, x, y, "matrices expected equal differ")
    return CounterExample("le", tol.atol, y, x, "matrices expected equal differ")


# --- samplers ----------------------------------------------------------------


def random_pd(n: int, rng, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    h = random_hermitian(n, rng, tol)
    return as_hermitian(h @ h + 0.2 * identity(n), tol)


def random_invertible_effect(n: int, rng, lo: float = 0.15,
                             tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    dec = eig_hermitian(random_hermitian(n, rng, tol), tol)
    w = lo + (1.0 - lo) * (1.0 / (1.0 + np.exp(-dec.eigenvalues)))
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(w) @ v.conj().T, tol)


def random_ordered_effect_pair(n: int, rng, tol: ToleranceContext = DEFAULT_TOL):
    """Effects A <= B with the increment scaled to keep B inside [0, I].

    Clipping A + increment back into the effect algebra can push parts of it
    below A (the truncation is not operator monotone), so the increment is
    scaled instead: B = A + s W with s <= (1 - max eig A)/max eig W.
    """
    a = as_effect(0.9 * random_effect(n, rng, tol) + 0.02 * identity(n), tol)
    w = random_hermitian(n, rng, tol)
    w = as_hermitian(w @ w, tol)
    head = float(np.linalg.eigvalsh(a)[-1])
    top = float(np.linalg.eigvalsh(w)[-1])
    s = float(rng.uniform(0.0, 1.0)) * max(0.0, 1.0 - head) / max(top, 1e-12)
    b = as_effect(a + s * w, tol)
    return a, b


# --- coexistence grid oracle (independent of the solver) ---------------------


def diagonal_rotation_instance(rng, projections: bool):
    """Real 2x2 instance: diagonal A versus rotated-diagonal B."""
    if projections:
        a_eigs = np.array([1.0, 0.0])
        b_eigs = np.array([1.0, 0.0])
        theta = float(rng.uniform(0.35, 1.2))
    else:
        a_eigs = rng.uniform(0.05, 0.95, size=2)
        b_eigs = rng.uniform(0.05, 0.95, size=2)
        theta = float(rng.uniform(0.0, np.pi))
    c, s = np.cos(theta), np.sin(theta)
    r = np.array([[c, -s], [s, c]])
    a = np.diag(a_eigs).astype(np.complex128)
    b = (r @ np.diag(b_eigs) @ r.T).astype(np.complex128)
    return as_effect(a), as_effect(b)


def coexistence_grid_verdict(a, b, step: float = 0.02) -> str:
    """Brute-force verdict for real 2x2 effects by gridding real symmetric G.

    For real operands a complex witness can be averaged with its conjugate,
    so the real grid is complete.  The best grid violation below the grid
    covering radius means some exact witness is within reach ("yes"); above
    twice the radius no witness exists anywhere ("no"); in between the grid
    cannot decide.
    """
    lower = a + b - identity(2)
    slack = 0.03
    axis_d = np.arange(-slack, 1.0 + slack + step / 2, step)
    axis_o = np.arange(-0.5 - slack, 0.5 + slack + step / 2, step)
    g22, g12 = np.meshgrid(axis_d, axis_o, indexing="ij")

    def lam_min(x11, x22, x12):
        return 0.5 * (x11 + x22) - np.sqrt(0.25 * (x11 - x22) ** 2 + x12 ** 2)

    best = np.inf
    for g11 in axis_d:
        v = -lam_min(g11, g22, g12)
        for m in (a, b):
            v = np.maximum(v, -lam_min(m[0, 0].real - g11, m[1, 1].real - g22,
                                       m[0, 1].real - g12))
        v = np.maximum(v, -lam_min(g11 - lower[0, 0].real, g22 - lower[1, 1].real,
                                   g12 - lower[0, 1].real))
        best = min(best, float(v.min()))
    radius = step  # frobenius covering radius of the real grid
    if best <= 1.05 * radius:
        return YES
    if best > 2.0 * radius:
        return NO
    return UNKNOWN


# --- suites -------------------------------------------------------------------


def suite_adjacency_chain(dim: int, trials: int, seed: int,
                          tol: ToleranceContext) -> SuiteOutcome:
    """Rank-one difference is equivalent to a totally ordered interval."""
    out = SuiteOutcome("T2.2-dagger", dim, trials, seed)
    for k in range(trials):
        rng = rng_for((seed, k))
        a = random_hermitian(dim, rng, tol)
        kind = k % 3
        if kind == 0:
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            v = v / np.linalg.norm(v)
            t = float(rng.uniform(0.2, 2.0)) * (1 if rng.random() < 0.5 else -1)
            b = as_hermitian(a + t * np.outer(v, v.conj()), tol)
        elif kind == 1:
            w = random_hermitian(dim, rng, tol)
            b = as_hermitian(a + w @ w + 0.05 * identity(dim), tol)
        else:
            b = random_hermitian(dim, (seed, k, 1), tol)
        if spectral_norm(b - a) <= tol.effective(a, b):
            continue
        verdict = interval_chain_check(a, b, tol)
        chain_holds = verdict.comparable and verdict.witness is None
        if verdict.adjacent != chain_holds:
            out.fail(CounterExample("adjacent", tol.atol, a, b,
                                    "adjacency and interval chain disagree"),
                     f"trial {k}: adjacency/chain mismatch")
            continue
        if verdict.witness is not None:
            lo, hi = (a, b) if loewner_le(a, b, tol) else (b, a)
            c, d = verdict.witness
            for x, y, what in ((lo, c, "lower-c"), (c, hi, "c-upper"),
                               (lo, d, "lower-d"), (d, hi, "d-upper")):
                if not loewner_le(x, y, tol):
                    out.fail(CounterExample("le", tol.atol, x, y,
                                            f"witness betweenness {what}"),
                             f"trial {k}: witness not between")
            if loewner_le(c, d, tol) or loewner_le(d, c, tol):
                out.fail(CounterExample("adjacent", tol.atol, a, b,
                                        "witness pair comparable"),
                         f"trial {k}: witness pair comparable")
        out.residuals.append(0.0)
    return out


def suite_hyperplane(dim: int, trials: int, seed: int,
                     tol: ToleranceContext) -> SuiteOutcome:
    """Rank-one direction of A - B exists exactly for adjacent pairs."""
    from .reconstruct import rank_one_direction

    out = SuiteOutcome("T2.3-hyperplane", dim, trials, seed)
    for k in range(trials):
        rng = rng_for((seed, k))
        a = random_hermitian(dim, rng, tol)
        if k % 2 == 0:
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            t = float(rng.uniform(0.2, 2.0))
            b = as_hermitian(a + t * np.outer(v, v.conj()), tol)
        else:
            b = random_hermitian(dim, (seed, k, 1), tol)
        direction = rank_one_direction(a - b, tol)
        adjacent = is_adjacent(a, b, tol)
        if (direction is not None) != adjacent:
            out.fail(CounterExample("adjacent", tol.atol, a, b,
                                    "rank-one direction test disagrees with adjacency"),
                     f"trial {k}: hyperplane/adjacency mismatch")
            continue
        if direction is not None:
            d = a - b
            y = direction.vector
            res = spectral_norm(d - np.trace(d).real * np.outer(y, y.conj()))
            out.residuals.append(res)
        else:
            out.residuals.append(0.0)
    return out


def suite_mean_symmetry(dim: int, trials: int, seed: int,
                        tol: ToleranceContext) -> SuiteOutcome:
    """Geometric mean symmetry and congruence equivariance."""
    out = SuiteOutcome("MEAN-sym", dim, trials, seed)
    bound = 1e-7
    for k in range(trials):
        rng = rng_for((seed, k))
        a = random_pd(dim, rng, tol)
        b = random_pd(dim, (seed, k, 1), tol)
        m_ab = geometric_mean(a, b, tol)
        m_ba = geometric_mean(b, a, tol)
        res_sym = spectral_norm(m_ab - m_ba)
        t = np.linalg.qr(rng.standard_normal((dim, dim))
                         + 1j * rng.standard_normal((dim, dim)))[0] @ \
            np.diag(rng.uniform(0.5, 1.5, size=dim))
        lhs = as_hermitian(t @ m_ab @ t.conj().T, tol)
        rhs = geometric_mean(as_hermitian(t @ a @ t.conj().T, tol),
                             as_hermitian(t @ b @ t.conj().T, tol), tol)
        res_cong = spectral_norm(lhs - rhs)
        out.residuals.extend([res_sym, res_cong])
        if res_sym > bound:
            out.fail(_violated_le_pair(m_ab, m_ba, tol),
                     f"trial {k}: mean not symmetric ({res_sym:.2e})")
        if res_cong > bound:
            out.fail(_violated_le_pair(lhs, rhs, tol),
                     f"trial {k}: congruence equivariance off ({res_cong:.2e})")
    return out


def suite_tau_order(dim: int, trials: int, seed: int,
                    tol: ToleranceContext) -> SuiteOutcome:
    """The normalized tau map preserves order, endpoints and its factorization."""
    out = SuiteOutcome("VAU-order", dim, trials, seed)
    order_bound, endpoint_bound, chain_bound = 1e-7, 1e-9, 1e-7
    eye = identity(dim)
    zero = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(trials):
        rng = rng_for((seed, k))
        t = random_invertible_effect(dim, rng, tol=tol)
        a, b = random_ordered_effect_pair(dim, rng_for((seed, k, 1)), tol)
        fa = tau_automorphism(t, a, tol)
        fb = tau_automorphism(t, b, tol)
        gap = float(np.linalg.eigvalsh(fb - fa)[0])
        out.residuals.append(max(0.0, -gap))
        if gap < -order_bound:
            out.fail(CounterExample("le", order_bound, fa, fb,
                                    "order violated by the normalized tau map"),
                     f"trial {k}: order violated ({gap:.2e})")
        e0 = spectral_norm(tau_automorphism(t, zero, tol))
        e1 = spectral_norm(tau_automorphism(t, eye, tol) - eye)
        out.residuals.extend([e0, e1])
        if max(e0, e1) > endpoint_bound:
            out.fail(_violated_le_pair(tau_automorphism(t, eye, tol), eye, tol),
                     f"trial {k}: endpoints not fixed")
        chain_gap = spectral_norm(tau_map(t, a, tol) - tau_map_chain(t, a, tol))
        out.residuals.append(chain_gap)
        if chain_gap > chain_bound:
            out.fail(_violated_le_pair(tau_map(t, a, tol), tau_map_chain(t, a, tol), tol),
                     f"trial {k}: closed formula and chain disagree ({chain_gap:.2e})")
    return out


def _ray_counterexample(oracle, op, dim: int, seed, tol) -> CounterExample:
    worst, pair = -1.0, None
    for k in range(200):
        p = random_ray(dim, rng_for((seed, 31), k))
        img = oracle(p)
        got = op.apply_ray(p)
        dist = 1.0 - img.overlap(got)
        if dist > worst:
            worst, pair = dist, (img.projector(), got.projector())
    return CounterExample("le", tol.atol, pair[0], pair[1],
                          "oracle image vs reconstructed image")


def suite_uhlhorn(dim: int, trials: int, seed: int,
                  tol: ToleranceContext) -> SuiteOutcome:
    """Semilinear reconstruction round-trips hidden (anti)unitary ray maps."""
    out = SuiteOutcome("T3.1-uhlhorn", dim, trials, seed)
    for k in range(trials):
        flag = bool(k % 2)
        gt = ground_truth("wigner", dim, (seed, k), conjugates=flag, tol=tol)
        try:
            fit = semilinear_reconstruct(gt.oracle, dim, tol, seed=(seed, k, 1))
        except OracleNotInClass as exc:
            out.fail(None, f"trial {k}: rejected in-class oracle ({exc})")
            continue
        defect = abs(unitary_gauge_defect(fit.operator.matrix, gt.params["matrix"]))
        out.residuals.append(defect)
        if defect > 1e-6 or fit.operator.conjugates != flag:
            out.fail(_ray_counterexample(gt.oracle, fit.operator, dim, (seed, k), tol),
                     f"trial {k}: gauge defect {defect:.2e} or wrong flag")
    return out


def suite_effect_ortho(dim: int, trials: int, seed: int,
                       tol: ToleranceContext) -> SuiteOutcome:
    """Ortho-order automorphism reconstruction round-trips."""
    from .reconstruct import EffectSymmetryEstimator

    out = SuiteOutcome("T3.2-ludwig", dim, trials, seed)
    for k in range(trials):
        flag = bool(k % 2)
        gt = ground_truth("effect-ortho", dim, (seed, k), conjugates=flag, tol=tol)
        try:
            est = EffectSymmetryEstimator(dim, seed=(seed, k, 1), tol=tol).fit(gt.oracle)
        except OracleNotInClass as exc:
            out.fail(None, f"trial {k}: rejected in-class oracle ({exc})")
            continue
        defect = abs(unitary_gauge_defect(est.operator_.matrix, gt.params["matrix"]))
        out.residuals.append(max(defect, est.residual_))
        if defect > 1e-6 or est.conjugates_ != flag:
            out.fail(_ray_counterexample(
                lambda p: Ray.from_projector(gt.oracle(p.projector()), tol),
                est.operator_, dim, (seed, k), tol),
                f"trial {k}: gauge defect {defect:.2e} or wrong flag")
    # an order-reversing oracle must be rejected
    eye = identity(dim)
    try:
        EffectSymmetryEstimator(dim, seed=(seed, 77), tol=tol).fit(lambda a: eye - a)
        out.fail(None, "orthocomplement map accepted despite reversing order")
    except OracleNotInClass:
        pass
    return out


def suite_bicommutant(dim: int, trials: int, seed: int,
                      tol: ToleranceContext) -> SuiteOutcome:
    """Second-commutant cardinalities: 4/8/16 demos plus rank classification."""
    out = SuiteOutcome("T3.3-bicommutant", dim, trials, seed)

    p3 = np.diag([1.0, 0.0, 0.0]).astype(np.complex128)
    q3 = np.diag([1.0, 1.0, 0.0]).astype(np.complex128)
    card8 = len(second_commutant_projections(p3, q3, tol))
    p4 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(np.complex128)
    q4 = np.diag([1.0, 0.0, 1.0, 0.0]).astype(np.complex128)
    card16 = len(second_commutant_projections(p4, q4, tol))
    same = np.diag([1.0, 0.0]).astype(np.complex128)
    card4 = len(second_commutant_projections(same, same, tol))
    out.details["cardinalities"] = {"n3-rank1": card8, "n4-middle": card16,
                                    "n2-equal": card4}
    if (card8, card16, card4) != (8, 16, 4):
        out.fail(CounterExample("commute", tol.atol, p4, q4,
                                "cardinality demo failed"),
                 f"cardinalities {(card8, card16, card4)} != (8, 16, 4)")

    per_rank = max(1, trials // max(1, dim - 1))
    errors = 0
    for rank in range(1, dim):
        expected = rank in (1, dim - 1)
        for k in range(per_rank):
            p = random_projection(dim, rank, rng_for((seed, rank, k)), tol)
            got = bicommutant_rank_one_test(p, trials=8, seed=(seed, rank, k, 1),
                                            tol=tol)
            out.residuals.append(0.0 if got == expected else 1.0)
            if got != expected:
                errors += 1
                out.fail(CounterExample("adjacent", tol.atol, p, identity(dim) - p,
                                        "rank classification failed"),
                         f"rank {rank} probe {k} misclassified")
    out.details["classification_errors"] = errors
    return out


def suite_gleason(dim: int, trials: int, seed: int,
                  tol: ToleranceContext) -> SuiteOutcome:
    """Density fitting round-trips, COSP normalization, state-fit pipeline."""
    out = SuiteOutcome("T4.1-gleason", dim, trials, seed)
    family = tomography_family(dim)
    for k in range(trials):
        rng = rng_for((seed, k))
        g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
        d0 = g @ g.conj().T
        d0 = as_hermitian(d0 / np.trace(d0).real, tol)
        values = [float(np.real(np.vdot(p.vector, d0 @ p.vector))) for p in family]
        fitted = gleason_fit(zip(family, values), dim, tol)
        err = float(np.max(np.abs(fitted - d0)))
        out.residuals.append(err)
        if err > 1e-8:
            out.fail(_violated_le_pair(fitted, d0, tol),
                     f"trial {k}: fit error {err:.2e}")
        u = random_unitary(dim, rng_for((seed, k, 2)), tol)
        total = sum(float(np.real(np.vdot(u[:, j], fitted @ u[:, j])))
                    for j in range(dim))
        out.residuals.append(abs(total - 1.0))
        if abs(total - 1.0) > 1e-9:
            out.fail(_violated_le_pair(fitted, d0, tol),
                     f"trial {k}: frame normalization off ({total - 1.0:.2e})")

    gt = ground_truth("optimal-wigner", dim, (seed, 5), conjugates=False, tol=tol)
    fit = optimal_wigner_reconstruct(gt.oracle, dim, tol, seed=(seed, 6))
    out.details["gleason_min"] = fit.gleason_min
    if fit.gleason_min < 1.0 - 1e-8:
        out.fail(None, f"state-fit intermediate below bound ({fit.gleason_min})")
    e0 = Ray(identity(dim)[:, 0])
    try:
        optimal_wigner_reconstruct(lambda p: e0, dim, tol, seed=(seed, 7))
        out.fail(None, "constant ray map accepted")
    except OracleNotInClass:
        pass
    return out


def suite_hermitian_commutativity(dim: int, trials: int, seed: int,
                                  tol: ToleranceContext) -> SuiteOutcome:
    """Commutativity-preserver reconstruction with spectral certificates."""
    from .reconstruct import HermitianSymmetryEstimator

    out = SuiteOutcome("T4.2-commutativity", dim, trials, seed)
    for k in range(trials):
        flag = bool(k % 2)
        gt = ground_truth("herm-commute", dim, (seed, k), conjugates=flag, tol=tol)
        try:
            est = HermitianSymmetryEstimator(dim, seed=(seed, k, 1), tol=tol,
                                             probes=20).fit(gt.oracle)
        except OracleNotInClass as exc:
            out.fail(None, f"trial {k}: rejected in-class oracle ({exc})")
            continue
        defect = abs(unitary_gauge_defect(est.operator_.matrix, gt.params["matrix"]))
        table_err = max((abs(b - (2.0 * a + 1.0)) for tab in est.tables_
                         for a, b in tab), default=0.0)
        out.residuals.extend([defect, table_err, est.residual_])
        if defect > 1e-6 or est.conjugates_ != flag or table_err > 1e-7:
            out.fail(None, f"trial {k}: defect {defect:.2e} table {table_err:.2e}")
    if not out.passed and out.counterexample is None:
        eye = identity(dim)
        out.counterexample = CounterExample("le", tol.atol, eye, 0.5 * eye,
                                            "reconstruction failed; see details")
    return out


def suite_coexistence(dim: int, trials: int, seed: int,
                      tol: ToleranceContext) -> SuiteOutcome:
    """Solver verdicts against the independent 2x2 grid oracle, plus the
    unknown rate over random non-commuting effect pairs."""
    out = SuiteOutcome("COEX-oracle", 2, trials, seed)
    decisive = agreements = 0
    attempts = 0
    while decisive < trials and attempts < 20 * trials:
        rng = rng_for((seed, attempts))
        a, b = diagonal_rotation_instance(rng, projections=bool(attempts % 5 == 0))
        attempts += 1
        decision = coexistent(a, b, tol)
        if decision.verdict == UNKNOWN:
            continue
        grid = coexistence_grid_verdict(a, b)
        if grid == UNKNOWN:
            continue
        decisive += 1
        ok = grid == decision.verdict
        agreements += ok
        out.residuals.append(0.0 if ok else 1.0)
        if not ok:
            out.fail(CounterExample("coexistent", tol.atol, a, b,
                                    f"solver {decision.verdict} vs grid {grid}"),
                     f"attempt {attempts}: solver/grid disagreement")
    out.details["decisive"] = decisive
    out.details["agreements"] = agreements
    if decisive < trials:
        out.fail(None, f"only {decisive}/{trials} decisive instances found")

    unknowns = pairs = 0
    for k in range(max(50, trials // 2)):
        a = random_effect(2, (seed, 91, k), tol)
        b = random_effect(2, (seed, 92, k), tol)
        if commute(a, b, tol):
            continue
        pairs += 1
        if coexistent(a, b, tol).verdict == UNKNOWN:
            unknowns += 1
    rate = unknowns / max(pairs, 1)
    out.details["unknown_rate"] = rate
    out.details["unknown_pairs"] = f"{unknowns}/{pairs}"
    if rate >= 0.2:
        out.fail(None, f"unknown rate {rate:.2f} above 20%")
    return out


def suite_order_auto(dim: int, trials: int, seed: int,
                     tol: ToleranceContext) -> SuiteOutcome:
    """Order automorphism reconstruction: shift, gauge law and rejection."""
    from .reconstruct import OrderAutomorphismEstimator

    out = SuiteOutcome("T2.2-order-auto", dim, trials, seed)
    for k in range(trials):
        flag = bool(k % 2)
        gt = ground_truth("order-auto", dim, (seed, k), conjugates=flag, tol=tol)
        try:
            est = OrderAutomorphismEstimator(dim, seed=(seed, k, 1), tol=tol).fit(gt.oracle)
        except OracleNotInClass as exc:
            out.fail(None, f"trial {k}: rejected in-class oracle ({exc})")
            continue
        shift_err = spectral_norm(est.shift_ - gt.params["shift"])
        gauge = congruence_value_residual(est.operator_.matrix, gt.params["matrix"],
                                          seed=(seed, k, 2), trials=20, tol=tol)
        out.residuals.extend([est.residual_, shift_err, gauge])
        if est.residual_ > 1e-6 or shift_err > 1e-8 or gauge > 1e-7 \
                or est.conjugates_ != flag:
            out.fail(_violated_le_pair(est.shift_, gt.params["shift"], tol),
                     f"trial {k}: residual {est.residual_:.2e} shift {shift_err:.2e} "
                     f"gauge {gauge:.2e}")
    return out


SUITES: Dict[str, Callable[[int, int, int, ToleranceContext], SuiteOutcome]] = {
    "T2.2-dagger": suite_adjacency_chain,
    "T2.3-hyperplane": suite_hyperplane,
    "MEAN-sym": suite_mean_symmetry,
    "VAU-order": suite_tau_order,
    "T3.1-uhlhorn": suite_uhlhorn,
    "T3.2-ludwig": suite_effect_ortho,
    "T3.3-bicommutant": suite_bicommutant,
    "T4.1-gleason": suite_gleason,
    "T4.2-commutativity": suite_hermitian_commutativity,
    "COEX-oracle": suite_coexistence,
}

SUITE_DEFAULTS: Dict[str, dict] = {
    "T2.2-dagger": {"dim": 3, "trials": 300},
    "T2.3-hyperplane": {"dim": 3, "trials": 300},
    "MEAN-sym": {"dim": 4, "trials": 100},
    "VAU-order": {"dim": 3, "trials": 100},
    "T3.1-uhlhorn": {"dim": 4, "trials": 20},
    "T3.2-ludwig": {"dim": 3, "trials": 10},
    "T3.3-bicommutant": {"dim": 4, "trials": 60},
    "T4.1-gleason": {"dim": 3, "trials": 50},
    "T4.2-commutativity": {"dim": 3, "trials": 6},
    "COEX-oracle": {"dim": 2, "trials": 40},
}


def run_suite(suite_id: str, dim: Optional[int] = None, trials: Optional[int] = None,
              seed: int = 0, tol: ToleranceContext = DEFAULT_TOL) -> SuiteOutcome:
    if suite_id not in SUITES:
        raise KeyError(f"unknown suite {suite_id!r}")
    defaults = SUITE_DEFAULTS[suite_id]
    return SUITES[suite_id](dim or defaults["dim"], trials or defaults["trials"],
                            seed, tol)
