"""Built-in black-box oracles: hidden ground truths and adversarial batteries.

Ground-truth factories draw canonical symmetry parameters from a seed and
hide them behind a closure, so reconstruction runs are self-contained; the
hidden parameters ride along for gauge-aware comparison.  The adversarial
battery provides, per oracle class, five deterministic out-of-class maps
(order reversal, illegal complementing, probe swaps, constant maps and
1e-3 noise injections) that a sound reconstructor must reject.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    random_hermitian,
    random_unitary,
    rank_tol,
    rng_for,
    spectral_apply,
    spectral_norm,
)
from .projective import Ray, SemilinearOperator
from .zoo import Congruence

__all__ = [
    "GroundTruth",
    "random_invertible",
    "ground_truth",
    "adversaries",
    "unitary_gauge_defect",
    "congruence_value_residual",
    "CLASS_IDS",
]

CLASS_IDS = ("order-auto", "effect-ortho", "proj-commute", "herm-commute",
             "wigner", "optimal-wigner")


@dataclass(frozen=True)
class GroundTruth:
    """Oracle closure plus the hidden parameters it was built from."""

    class_id: str
    oracle: Callable
    params: dict


def random_invertible(n: int, seed, min_singular: float = 0.35) -> np.ndarray:
    """Complex matrix with singular values floored away from zero."""
    rng = rng_for(seed)
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    u, s, vh = np.linalg.svd(g)
    return u @ np.diag(np.clip(s, min_singular, None)) @ vh


def _pick_flag(seed, conjugates: Optional[bool]) -> bool:
    if conjugates is None:
        return bool(rng_for(seed, 999).random() < 0.5)
    return bool(conjugates)


def _affine_table(a: float, b: float):
    return lambda x: a * x + b


def ground_truth(class_id: str, n: int, seed=0,
                 conjugates: Optional[bool] = None,
                 tol: ToleranceContext = DEFAULT_TOL) -> GroundTruth:
    """Build a hidden-parameter oracle of the given class."""
    flag = _pick_flag(seed, conjugates)
    if class_id == "order-auto":
        t = random_invertible(n, (seed, 11))
        s = random_hermitian(n, (seed, 12), tol)
        desc = Congruence(matrix=t, conjugates=flag, shift=s, sign=1)
        return GroundTruth(class_id, lambda a: desc.apply(a, tol),
                           {"matrix": t, "conjugates": flag, "shift": s})
    if class_id in ("effect-ortho", "proj-commute"):
        u = random_unitary(n, rng_for((seed, 13)), tol)
        op = SemilinearOperator(u, flag)
        if class_id == "effect-ortho":
            oracle = op.apply_matrix
        else:
            eye = identity(n)

            def oracle(p, _op=op, _eye=eye):
                img = _op.apply_matrix(p)
                # complementing every even-rank image stays inside the class
                if rank_tol(p, tol) % 2 == 0 and not np.allclose(p, 0) \
                        and not np.allclose(p, _eye):
                    return _eye - img
                return img

        return GroundTruth(class_id, oracle, {"matrix": u, "conjugates": flag})
    if class_id == "herm-commute":
        u = random_unitary(n, rng_for((seed, 14)), tol)
        op = SemilinearOperator(u, False)
        func = _affine_table(2.0, 1.0)

        def oracle(a):
            base = as_hermitian(np.conj(a), tol) if flag else as_hermitian(a, tol)
            return op.apply_matrix(spectral_apply(base, func, tol))

        return GroundTruth(class_id, oracle,
                           {"matrix": u, "conjugates": flag, "func": func})
    if class_id in ("wigner", "optimal-wigner"):
        u = random_unitary(n, rng_for((seed, 15)), tol)
        op = SemilinearOperator(u, flag)
        return GroundTruth(class_id, op.apply_ray, {"matrix": u, "conjugates": flag})
    raise ValueError(f"unknown oracle class {class_id!r}")


def _match(a, b) -> bool:
    return bool(np.allclose(a, b, atol=1e-12, rtol=0.0))


def _swap_oracle(base: Callable, x, y) -> Callable:
    def oracle(a):
        if _match(a, x):
            return base(y)
        if _match(a, y):
            return base(x)
        return base(a)

    return oracle


def _basis_proj(n: int, i: int) -> np.ndarray:
    p = np.zeros((n, n), dtype=np.complex128)
    p[i, i] = 1.0
    return p


def _plus_proj(n: int) -> np.ndarray:
    v = np.zeros((n, 1), dtype=np.complex128)
    v[0, 0] = v[1, 0] = 1.0 / np.sqrt(2.0)
    return v @ v.conj().T


def _round_to_projection(m: np.ndarray) -> np.ndarray:
    dec = eig_hermitian(as_hermitian(m))
    w = (dec.eigenvalues >= 0.5).astype(float)
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(w) @ v.conj().T)


def adversaries(class_id: str, n: int, seed=0,
                tol: ToleranceContext = DEFAULT_TOL) -> Dict[str, Callable]:
    """Five deterministic out-of-class oracles for the given class."""
    eye = identity(n)
    e0 = _basis_proj(n, 0)
    plus = _plus_proj(n)
    noise_h = random_hermitian(n, (seed, 21), tol)
    noise_u = random_unitary(n, rng_for((seed, 22)), tol)

    if class_id == "order-auto":
        truth = ground_truth(class_id, n, seed, conjugates=False, tol=tol)
        t, s = truth.params["matrix"], truth.params["shift"]
        return {
            "order-reversing": lambda a: -as_hermitian(a),
            "complement-composition": lambda a: eye - as_hermitian(a),
            "probe-swap": _swap_oracle(lambda a: a, e0, e0 + _basis_proj(n, 1)),
            "constant": lambda a: noise_h,
            "noise": lambda a: as_hermitian(t @ a @ t.conj().T + s
                                            + 1e-3 * (a @ a)),
        }
    if class_id == "effect-ortho":
        u = random_unitary(n, rng_for((seed, 23)), tol)
        return {
            "order-reversing": lambda a: eye - as_hermitian(a),
            "square": lambda a: as_hermitian(a @ a),
            "constant": lambda a: 0.5 * eye,
            "probe-swap": (lambda base: lambda a: u @ base(a) @ u.conj().T)(
                _swap_oracle(lambda a: a, e0, plus)),
            "depolarizing-noise": lambda a: as_hermitian(
                0.999 * (u @ a @ u.conj().T)
                + 0.001 * (np.trace(a).real / n) * eye),
        }
    if class_id == "proj-commute":
        u = random_unitary(n, rng_for((seed, 24)), tol)

        def rank_collapse(p):
            r = rank_tol(p, tol)
            out = np.zeros((n, n), dtype=np.complex128)
            for i in range(r):
                out[i, i] = 1.0
            return out

        u2 = random_unitary(n, rng_for((seed, 25)), tol)

        def split_unitaries(p):
            r = rank_tol(p, tol)
            w = u if r <= 1 or r == n else u2
            return as_hermitian(w @ p @ w.conj().T)

        return {
            "constant": lambda p: e0,
            "probe-swap": (lambda base: lambda p: u @ base(p) @ u.conj().T)(
                _swap_oracle(lambda p: p, e0, plus)),
            "rank-collapse": rank_collapse,
            "split-unitaries": split_unitaries,
            "projection-noise": lambda p: _round_to_projection(
                u @ p @ u.conj().T + 1e-3 * noise_h),
        }
    if class_id == "herm-commute":
        return {
            "constant": lambda a: eye,
            "square": lambda a: as_hermitian(a @ a),
            "absolute-value": lambda a: spectral_apply(a, abs, tol),
            "probe-swap": _swap_oracle(lambda a: as_hermitian(2.0 * a + eye),
                                       e0, plus),
            "noise": lambda a: as_hermitian(
                2.0 * a + eye + 1e-3 * (noise_u @ a @ noise_u.conj().T)),
        }
    if class_id in ("wigner", "optimal-wigner"):
        u = random_unitary(n, rng_for((seed, 26)), tol)
        op = SemilinearOperator(u, False)
        e0_ray = Ray(eye[:, 0])
        plus_ray = Ray(eye[:, 0] + eye[:, 1])

        def ray_swap(p: Ray) -> Ray:
            if p.overlap(e0_ray) >= 1.0 - 1e-12:
                return op.apply_ray(plus_ray)
            if p.overlap(plus_ray) >= 1.0 - 1e-12:
                return op.apply_ray(e0_ray)
            return op.apply_ray(p)

        def nonlinear_noise(p: Ray) -> Ray:
            return Ray(op.apply_vector(p.vector)
                       + 1e-3 * (p.vector * np.abs(p.vector)))

        def collapse_near(p: Ray) -> Ray:
            return op.apply_ray(e0_ray if p.overlap(e0_ray) >= 0.5 else p)

        def pull_toward(p: Ray) -> Ray:
            return Ray(p.vector + 0.3 * eye[:, 0])

        return {
            "constant": lambda p: e0_ray,
            "ray-swap": ray_swap,
            "nonlinear-noise": nonlinear_noise,
            "collapse-pair": collapse_near,
            "orthogonality-breaking": pull_toward,
        }
    raise ValueError(f"unknown oracle class {class_id!r}")


def unitary_gauge_defect(u_hat: np.ndarray, u_ref: np.ndarray) -> float:
    """n - |tr(U_hat* U_ref)|, zero exactly when they agree up to phase."""
    n = u_ref.shape[0]
    return float(n - abs(np.trace(u_hat.conj().T @ u_ref)))


def congruence_value_residual(t_hat: np.ndarray, t_ref: np.ndarray,
                              seed=0, trials: int = 100,
                              tol: ToleranceContext = DEFAULT_TOL) -> float:
    """max over random A of || T_hat A T_hat* - T_ref A T_ref* ||."""
    n = t_ref.shape[0]
    worst = 0.0
    for k in range(trials):
        a = random_hermitian(n, rng_for((seed, 27), k), tol)
        worst = max(worst, spectral_norm(
            t_hat @ a @ t_hat.conj().T - t_ref @ a @ t_ref.conj().T))
    return worst
