"""The effect algebra on [0, I]: products, means, coexistence.

Coexistence of two effects is decided through the single-variable
feasibility problem

    0 <= G,  G <= A,  G <= B,  A + B - I <= G,

after which E = A - G and F = B - G complete a witness.  Commuting and
scalar pairs get explicit witnesses; a non-commuting pair in which one
operand is a projection is never coexistent (the witness forces a block
decomposition along that projection).  Everything else runs Dykstra's
alternating projections onto the four spectrahedra, which can certify
feasibility but not infeasibility, hence the Unknown verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .commutant import commute, joint_blocks
from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    inv_hermitian,
    is_pd,
    is_projection_matrix,
    same_dimension,
    sqrt_psd,
)
from .errors import NotAnEffect, NotPositiveDefinite

__all__ = [
    "as_effect",
    "is_effect",
    "orthocomplement",
    "jordan_product",
    "triple_product",
    "sequential_product",
    "geometric_mean",
    "is_scalar",
    "CoexistenceDecision",
    "coexistent",
    "YES",
    "NO",
    "UNKNOWN",
]

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


def as_effect(mat, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Validate 0 <= M <= I; eigenvalues within tolerance outside are clipped."""
    a = as_hermitian(mat, tol)
    eff = tol.effective(a, identity(a.shape[0]))
    dec = eig_hermitian(a, tol)
    w = dec.eigenvalues
    if w[0] < -eff or w[-1] > 1.0 + eff:
        raise NotAnEffect(
            f"eigenvalues [{w[0]:.3g}, {w[-1]:.3g}] leave [0, 1] beyond tolerance")
    if w[0] < 0.0 or w[-1] > 1.0:
        v = dec.eigenvectors
        return as_hermitian(v @ np.diag(np.clip(w, 0.0, 1.0)) @ v.conj().T, tol)
    return a


def is_effect(mat, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    try:
        as_effect(mat, tol)
    except NotAnEffect:
        return False
    return True


def orthocomplement(a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    a = as_effect(a, tol)
    return identity(a.shape[0]) - a


def jordan_product(a, b, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """(AB + BA)/2."""
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    return as_hermitian((a @ b + b @ a) / 2.0, tol)


def triple_product(a, b, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """ABA."""
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    return as_hermitian(a @ b @ a, tol)


def sequential_product(a, b, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """A^(1/2) B A^(1/2) for effects A, B; the result is again an effect."""
    a = as_effect(a, tol)
    b = as_effect(b, tol)
    same_dimension(a, b)
    r = sqrt_psd(a, tol)
    return as_effect(r @ b @ r, tol)


def geometric_mean(a, b, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """A # B = A^(1/2) (A^(-1/2) B A^(-1/2))^(1/2) A^(1/2), A and B pd.

    The psd limit is rejected rather than regularized; the formula needs an
    invertible A.
    """
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    if not (is_pd(a, tol) and is_pd(b, tol)):
        raise NotPositiveDefinite("geometric mean requires positive definite operands")
    r = sqrt_psd(a, tol)
    r_inv = inv_hermitian(r, tol)
    mid = sqrt_psd(as_hermitian(r_inv @ b @ r_inv, tol), tol)
    return as_hermitian(r @ mid @ r, tol)


def is_scalar(a, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True when the spectral diameter is within the effective tolerance."""
    a = as_hermitian(a, tol)
    w = np.linalg.eigvalsh(a)
    return bool(w[-1] - w[0] <= tol.effective(a))


@dataclass(frozen=True)
class CoexistenceDecision:
    """Outcome of the coexistence feasibility problem.

    On ``yes`` the witness triple (G, E, F) satisfies A = E + G, B = F + G
    with E, F, G effects and E + F + G <= I.  ``no`` is only ever issued
    from an exact criterion, stated in ``reason``; solver non-convergence
    yields ``unknown``.
    """

    verdict: str
    witness: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]]
    iterations: int
    residual: float
    reason: Optional[str] = None


def _decision(verdict, g, a, b, iterations, residual, reason=None) -> CoexistenceDecision:
    witness = None
    if verdict == YES:
        witness = (g, as_hermitian(a - g), as_hermitian(b - g))
    return CoexistenceDecision(verdict, witness, iterations, residual, reason)


def _psd_part(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w[0] >= 0.0:
        return m
    return as_hermitian((v * np.clip(w, 0.0, None)) @ v.conj().T)


def _violation(g, a, b, lower) -> float:
    worst = 0.0
    for m in (g, a - g, b - g, g - lower):
        lam = float(np.linalg.eigvalsh(as_hermitian(m))[0])
        worst = max(worst, -lam)
    return worst


def _lam_min_2x2(x11, x22, re, im):
    return 0.5 * (x11 + x22) - np.sqrt(0.25 * (x11 - x22) ** 2 + re ** 2 + im ** 2)


def _certified_not_coexistent_2x2(a, b, step: float = 0.02,
                                  slack: float = 0.03) -> Tuple[bool, float]:
    """Certified lower bound on the best achievable constraint violation, n = 2.

    Any witness candidate violating the constraints by at most ``slack`` has
    eigenvalues in [-slack, 1 + slack], hence diagonal entries in that range
    and off-diagonal modulus at most 1/2 + slack; a full grid over that box
    plus the 1-Lipschitz dependence of each eigenvalue violation on G (grid
    covering radius sqrt(3/2) * step in Frobenius norm) bounds the violation
    of every hermitian G from below.  A strictly positive bound proves the
    pair is not coexistent.
    """
    lower = a + b - identity(2)
    parts = [(m[0, 0].real, m[1, 1].real, m[0, 1].real, m[0, 1].imag)
             for m in (a, b, lower)]
    diag_axis = np.arange(-slack, 1.0 + slack + step / 2, step)
    off_axis = np.arange(-0.5 - slack, 0.5 + slack + step / 2, step)
    g22, re, im = np.meshgrid(diag_axis, off_axis, off_axis, indexing="ij")
    best = np.inf
    radius = np.sqrt(1.5) * step
    (a11, a22, are, aim), (b11, b22, bre, bim), (l11, l22, lre, lim) = parts
    for g11 in diag_axis:
        v = -_lam_min_2x2(g11, g22, re, im)
        np.maximum(v, -_lam_min_2x2(a11 - g11, a22 - g22, are - re, aim - im), out=v)
        np.maximum(v, -_lam_min_2x2(b11 - g11, b22 - g22, bre - re, bim - im), out=v)
        np.maximum(v, -_lam_min_2x2(g11 - l11, g22 - l22, re - lre, im - lim), out=v)
        best = min(best, float(v.min()))
        if best <= radius + 1e-6:
            break
    bound = min(slack, best - radius)
    return bound > 1e-6, bound


def coexistent(a, b, tol: ToleranceContext = DEFAULT_TOL,
               max_iter: int = 10_000) -> CoexistenceDecision:
    """Decide coexistence of two effects.

    Fast paths: a scalar operand gives the explicit witness G = t B (resp.
    G = s A); commuting operands take G = entrywise min in a joint
    eigenbasis; a projection operand that fails to commute with the other
    effect is an exact ``no``.  The general path is Dykstra's alternating
    projections; convergence to a point with constraint violation below
    atol is ``yes``, stalling or hitting ``max_iter`` is ``unknown``.
    """
    a = as_effect(a, tol)
    b = as_effect(b, tol)
    n = same_dimension(a, b)
    eye = identity(n)
    lower = a + b - eye

    if is_scalar(a, tol):
        t = float(np.trace(a).real) / n
        g = as_hermitian(t * b, tol)
        return _decision(YES, g, a, b, 0, _violation(g, a, b, lower),
                         reason="scalar operand")
    if is_scalar(b, tol):
        s = float(np.trace(b).real) / n
        g = as_hermitian(s * a, tol)
        return _decision(YES, g, a, b, 0, _violation(g, a, b, lower),
                         reason="scalar operand")

    if commute(a, b, tol):
        joint = joint_blocks([a, b], tol)
        v = joint.basis
        da = np.real(np.diagonal(v.conj().T @ a @ v))
        db = np.real(np.diagonal(v.conj().T @ b @ v))
        g = as_hermitian(v @ np.diag(np.minimum(da, db)) @ v.conj().T, tol)
        return _decision(YES, g, a, b, 0, _violation(g, a, b, lower),
                         reason="commuting pair")

    if is_projection_matrix(a, tol) or is_projection_matrix(b, tol):
        # a witness below a projection is block diagonal along it, which
        # would force the pair to commute
        return CoexistenceDecision(NO, None, 0, 0.0,
                                   reason="non-commuting pair with a projection operand")

    projections = (
        _psd_part,
        lambda m: a - _psd_part(a - m),
        lambda m: b - _psd_part(b - m),
        lambda m: lower + _psd_part(m - lower),
    )
    x = np.zeros_like(a)
    corrections = [np.zeros_like(a) for _ in projections]
    yes_tol = tol.atol
    best = np.inf
    stall_mark, stall_value = 0, np.inf
    iterations = max_iter
    stalled = False
    for it in range(1, max_iter + 1):
        for i, proj in enumerate(projections):
            shifted = x + corrections[i]
            y = proj(shifted)
            corrections[i] = shifted - y
            x = y
        if it % 10 == 0 or it == max_iter:
            res = _violation(x, a, b, lower)
            best = min(best, res)
            if res <= yes_tol:
                return _decision(YES, as_hermitian(x, tol), a, b, it, res)
            # stall window: no meaningful progress over 600 sweeps
            if it - stall_mark >= 600:
                if best > stall_value * 0.5:
                    iterations, stalled = it, True
                    break
                stall_mark, stall_value = it, best

    if n == 2:
        certified, bound = _certified_not_coexistent_2x2(a, b)
        if certified:
            return CoexistenceDecision(
                NO, None, iterations, bound,
                reason=f"grid certificate: every candidate witness violates the "
                       f"constraints by more than {bound:.2e}")
    reason = ("alternating projections stalled" if stalled
              else "iteration cap reached")
    return CoexistenceDecision(UNKNOWN, None, iterations, best, reason=reason)
