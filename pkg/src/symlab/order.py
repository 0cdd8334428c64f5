"""Loewner order, adjacency and order-interval chain tests.

``interval_chain_check`` decides whether two distinct hermitian matrices are
comparable with a totally ordered interval between them.  That condition
holds exactly for rank-one differences, and when it fails for a comparable
pair the check returns an explicit incomparable pair of intermediates built
from scaled eigenprojections of the difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    is_projection_matrix,
    is_psd,
    rank_tol,
    same_dimension,
    spectral_norm,
)
from .errors import EqualInputs, NotAnEffect, NotRankOneProjection

__all__ = [
    "loewner_le",
    "comparable",
    "is_adjacent",
    "IntervalChainVerdict",
    "interval_chain_check",
    "comparability_cone_witness",
    "max_scalar_below",
]


def loewner_le(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """A <= B in the Loewner order, i.e. B - A psd within tolerance."""
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    return is_psd(b - a, tol)


def comparable(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """A <= B or B <= A; ties at the psd boundary resolve toward comparable."""
    return loewner_le(a, b, tol) or loewner_le(b, a, tol)


def is_adjacent(a, b, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True when B - A has rank one."""
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    return rank_tol(b - a, tol) == 1


@dataclass(frozen=True)
class IntervalChainVerdict:
    """Outcome of the order-interval chain test.

    ``witness`` is only present for comparable non-adjacent pairs: two
    matrices strictly between the inputs that are mutually incomparable.
    For incomparable inputs the pair itself already refutes the condition.
    """

    adjacent: bool
    comparable: bool
    witness: Optional[Tuple[np.ndarray, np.ndarray]]


def interval_chain_check(a, b, tol: ToleranceContext = DEFAULT_TOL) -> IntervalChainVerdict:
    """Decide adjacency of distinct A, B through the order interval [A, B].

    Adjacent pairs are comparable with a totally ordered interval.  For a
    comparable pair whose difference has rank >= 2 the two largest
    eigendirections of the difference give intermediates C = A + p P and
    D = A + q Q with C, D incomparable, which is returned as the witness.
    """
    a = as_hermitian(a, tol)
    b = as_hermitian(b, tol)
    same_dimension(a, b)
    if spectral_norm(b - a) <= tol.effective(a, b):
        raise EqualInputs("interval chain test requires distinct inputs")

    adjacent = is_adjacent(a, b, tol)
    a_le_b = loewner_le(a, b, tol)
    b_le_a = loewner_le(b, a, tol)
    if not (a_le_b or b_le_a):
        return IntervalChainVerdict(adjacent=adjacent, comparable=False, witness=None)
    if adjacent:
        return IntervalChainVerdict(adjacent=True, comparable=True, witness=None)

    lo, hi = (a, b) if a_le_b else (b, a)
    dec = eig_hermitian(hi - lo, tol)
    # difference has rank >= 2, so its two largest eigenvalues are positive
    order = np.argsort(dec.eigenvalues)[::-1]
    i, j = int(order[0]), int(order[1])
    p_val, q_val = dec.eigenvalues[i], dec.eigenvalues[j]
    vi = dec.eigenvectors[:, i:i + 1]
    vj = dec.eigenvectors[:, j:j + 1]
    c = as_hermitian(lo + p_val * (vi @ vi.conj().T), tol)
    d = as_hermitian(lo + q_val * (vj @ vj.conj().T), tol)
    return IntervalChainVerdict(adjacent=False, comparable=True, witness=(c, d))


def comparability_cone_witness(a, tol: ToleranceContext = DEFAULT_TOL):
    """Two incomparable sub-effects of an effect of rank >= 2, else None.

    Scaled eigenprojections a_i P_i for two distinct eigendirections sit
    below A yet are mutually incomparable; rank <= 1 effects admit no such
    pair (every pair below them is comparable).
    """
    a = as_hermitian(a, tol)
    eff = tol.effective(a)
    w = np.linalg.eigvalsh(a)
    if w[0] < -eff or w[-1] > 1.0 + eff:
        raise NotAnEffect("input eigenvalues leave [0, 1]")
    if rank_tol(a, tol) < 2:
        return None
    dec = eig_hermitian(a, tol)
    order = np.argsort(dec.eigenvalues)[::-1]
    i, j = int(order[0]), int(order[1])
    vi = dec.eigenvectors[:, i:i + 1]
    vj = dec.eigenvectors[:, j:j + 1]
    return (
        as_hermitian(dec.eigenvalues[i] * (vi @ vi.conj().T), tol),
        as_hermitian(dec.eigenvalues[j] * (vj @ vj.conj().T), tol),
    )


def max_scalar_below(a, p, tol: ToleranceContext = DEFAULT_TOL) -> float:
    """sup { t in [0, 1] : A - t P psd } for an effect A and rank-one P.

    Bisection on the psd test down to width atol; the boundary behaviour is
    then uniform in A (no pseudo-inverse special cases).
    """
    a = as_hermitian(a, tol)
    p = as_hermitian(p, tol)
    same_dimension(a, p)
    eff = tol.effective(a)
    w = np.linalg.eigvalsh(a)
    if w[0] < -eff or w[-1] > 1.0 + eff:
        raise NotAnEffect("first operand must be an effect")
    if rank_tol(p, tol) != 1 or not is_projection_matrix(p, tol):
        raise NotRankOneProjection("second operand must be a rank-one projection")

    if is_psd(a - p, tol):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol.atol:
        mid = 0.5 * (lo + hi)
        if is_psd(a - mid * p, tol):
            lo = mid
        else:
            hi = mid
    return lo
