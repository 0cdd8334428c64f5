"""Constructors and evaluators for the canonical symmetry forms.

Each descriptor is a frozen dataclass with an ``apply`` method; the module
level :func:`apply` dispatches on the descriptor type.  ``tau_map`` is the
fractional-linear order isomorphism of the effect algebra built from an
invertible effect T, and ``tau_automorphism`` its normalization back onto
[0, I]; ``tau_map_chain`` evaluates the same map as a composition of
interval isomorphisms, which doubles as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .commutant import commute
from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    inv_hermitian,
    is_pd,
    rng_for,
    same_dimension,
    spectral_apply,
    spectral_norm,
)
from .effects import as_effect, jordan_product, triple_product
from .errors import (
    ContractUnknown,
    DomainViolation,
    NotInvertibleEffect,
    NotPositiveDefinite,
    OutOfInterval,
)
from .order import is_adjacent, loewner_le
from .projective import SemilinearOperator

__all__ = [
    "Congruence",
    "UnitarySimilarity",
    "Transpose",
    "SpectralReparam",
    "TauAutomorphism",
    "IntervalShift",
    "IntervalCongruence",
    "IntervalInvert",
    "apply",
    "tau_map",
    "tau_automorphism",
    "tau_map_chain",
    "interval_map",
    "SymmetryReport",
    "verify_symmetry",
    "CONTRACTS",
]

ORDER_CONTRACTS = frozenset({"loewner_order_iff"})


def _require_invertible(m: np.ndarray, what: str):
    if np.linalg.matrix_rank(m, tol=1e-10) < m.shape[0]:
        raise DomainViolation(f"{what} must be invertible")


@dataclass(frozen=True)
class Congruence:
    """A -> sign * T A T* + S, optionally transposing (conjugating) A first.

    ``sign = -1`` reverses the Loewner order, so it is rejected when the
    descriptor is declared for an order contract.
    """

    matrix: np.ndarray
    conjugates: bool = False
    shift: Optional[np.ndarray] = None
    sign: int = 1
    intended_contract: Optional[str] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        _require_invertible(m, "congruence matrix")
        object.__setattr__(self, "matrix", m)
        if self.sign not in (-1, 1):
            raise DomainViolation("sign must be +1 or -1")
        if self.sign == -1 and self.intended_contract in ORDER_CONTRACTS:
            raise DomainViolation("sign -1 reverses order; not admissible here")
        if self.shift is not None:
            object.__setattr__(self, "shift", as_hermitian(self.shift))

    def apply(self, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        a = as_hermitian(a, tol)
        core = np.conj(a) if self.conjugates else a
        out = self.sign * (self.matrix @ core @ self.matrix.conj().T)
        if self.shift is not None:
            out = out + self.shift
        return as_hermitian(out, tol)


@dataclass(frozen=True)
class UnitarySimilarity:
    """A -> U A U* for a unitary or antiunitary U."""

    operator: SemilinearOperator

    def __post_init__(self):
        if not self.operator.is_unitary():
            raise DomainViolation("similarity requires a unitary matrix part")

    def apply(self, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        return self.operator.apply_matrix(as_hermitian(a, tol))


@dataclass(frozen=True)
class Transpose:
    """A -> A^t, which is the entrywise conjugate for hermitian A."""

    def apply(self, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        return as_hermitian(np.conj(as_hermitian(a, tol)), tol)


@dataclass(frozen=True)
class SpectralReparam:
    """A -> f_A(A) for injective spectral functions f_A.

    Either a shared callable, or (with ``seed``) a per-input random strictly
    increasing table drawn deterministically from the input's spectrum, which
    models maps that pick a fresh injective function for every input.
    """

    func: Optional[Callable[[float], float]] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if (self.func is None) == (self.seed is None):
            raise DomainViolation("provide exactly one of func or seed")

    def _table_for(self, reps: np.ndarray) -> dict:
        keys = tuple(int(np.round(r * 1e6)) & 0xFFFFFFFF for r in reps)
        rng = np.random.default_rng(np.random.SeedSequence((self.seed,) + keys))
        start = float(rng.normal())
        steps = rng.uniform(0.1, 1.0, size=len(reps))
        return dict(zip(reps, start + np.cumsum(steps)))

    def apply(self, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        if self.func is not None:
            return spectral_apply(a, self.func, tol)
        reps = eig_hermitian(a, tol).cluster_values()
        return spectral_apply(a, self._table_for(reps), tol)


def tau_map(t, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """(I - T^2 + T (I + A)^-1 T)^-1 - I for an invertible effect T.

    Order isomorphism of the effect algebra onto [0, T^2 (2I - T^2)^-1].
    """
    t = _invertible_effect(t, tol)
    a = as_effect(a, tol)
    same_dimension(t, a)
    eye = identity(t.shape[0])
    inner = eye - t @ t + t @ inv_hermitian(eye + a, tol) @ t
    return as_hermitian(inv_hermitian(as_hermitian(inner, tol), tol) - eye, tol)


def _invertible_effect(t, tol: ToleranceContext) -> np.ndarray:
    t = as_hermitian(t, tol)
    w = np.linalg.eigvalsh(t)
    eff = tol.effective(t)
    if w[0] <= eff or w[-1] > 1.0 + eff:
        raise NotInvertibleEffect("parameter must be an effect with spectrum in (0, 1]")
    return t


def tau_range_endpoint(t, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """T^2 (2I - T^2)^-1, the image of I under the tau map."""
    t = _invertible_effect(t, tol)
    eye = identity(t.shape[0])
    return as_hermitian(t @ t @ inv_hermitian(2.0 * eye - t @ t, tol), tol)


def tau_automorphism(t, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """D^(-1/2) tau(A) D^(-1/2) with D = T^2 (2I - T^2)^-1: an order
    automorphism of the effect algebra fixing 0 and I."""
    d = tau_range_endpoint(t, tol)
    d_inv_sqrt = spectral_apply(d, lambda x: 1.0 / np.sqrt(x), tol)
    out = d_inv_sqrt @ tau_map(t, a, tol) @ d_inv_sqrt
    return as_effect(as_hermitian(out, tol), tol)


@dataclass(frozen=True)
class TauAutomorphism:
    """Order automorphism of the effect algebra built from an invertible effect."""

    parameter: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parameter", _invertible_effect(self.parameter, DEFAULT_TOL))

    def apply(self, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
        return tau_automorphism(self.parameter, a, tol)


@dataclass(frozen=True)
class IntervalShift:
    shift: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shift", as_hermitian(self.shift))


@dataclass(frozen=True)
class IntervalCongruence:
    matrix: np.ndarray
    conjugates: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        _require_invertible(m, "interval congruence matrix")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class IntervalInvert:
    pass


def interval_map(d, a, e, f, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Apply an interval (anti-)isomorphism to A within the declared [E, F].

    Shifts map [E, F] to [E+S, F+S], congruences to [SES*, SFS*], and the
    inverse (requiring 0 < E) reverses [E, F] onto [F^-1, E^-1].
    """
    a = as_hermitian(a, tol)
    e = as_hermitian(e, tol)
    f = as_hermitian(f, tol)
    same_dimension(a, e, f)
    if not (loewner_le(e, a, tol) and loewner_le(a, f, tol)):
        raise OutOfInterval("input does not lie in the declared order interval")
    if isinstance(d, IntervalShift):
        return as_hermitian(a + d.shift, tol)
    if isinstance(d, IntervalCongruence):
        core = np.conj(a) if d.conjugates else a
        return as_hermitian(d.matrix @ core @ d.matrix.conj().T, tol)
    if isinstance(d, IntervalInvert):
        if not is_pd(e, tol):
            raise NotPositiveDefinite("inversion needs a positive definite lower endpoint")
        return inv_hermitian(a, tol)
    raise ContractUnknown(f"unknown interval map {type(d).__name__}")


def tau_map_chain(t, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Evaluate the tau map as its chain of interval isomorphisms.

    shift by I, invert, congruence by T, shift by I - T^2, invert, shift by
    -I; interval endpoints are tracked and validated at every step.
    """
    t = _invertible_effect(t, tol)
    a = as_effect(a, tol)
    n = t.shape[0]
    eye = identity(n)
    t2 = as_hermitian(t @ t, tol)

    x, e, f = a, np.zeros_like(a), eye
    x = interval_map(IntervalShift(eye), x, e, f, tol)
    e, f = eye, 2.0 * eye
    x = interval_map(IntervalInvert(), x, e, f, tol)
    e, f = 0.5 * eye, eye
    x = interval_map(IntervalCongruence(t), x, e, f, tol)
    e, f = as_hermitian(0.5 * t2), t2
    x = interval_map(IntervalShift(eye - t2), x, e, f, tol)
    e, f = as_hermitian(eye - 0.5 * t2), eye
    x = interval_map(IntervalInvert(), x, e, f, tol)
    e, f = eye, inv_hermitian(as_hermitian(eye - 0.5 * t2), tol)
    x = interval_map(IntervalShift(-eye), x, e, f, tol)
    return x


def apply(descriptor, a, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Evaluate any non-interval symmetry descriptor on a hermitian matrix."""
    if isinstance(descriptor, (IntervalShift, IntervalCongruence, IntervalInvert)):
        raise DomainViolation("interval maps need explicit endpoints; use interval_map")
    return descriptor.apply(a, tol)


@dataclass(frozen=True)
class SymmetryReport:
    """Result of sampling a relation/operation contract against an oracle."""

    contract: str
    trials: int
    passed: bool
    worst_residual: float
    counterexample: Optional[Tuple[np.ndarray, np.ndarray]]
    failure_index: Optional[int] = None


def _relation_iff(rel):
    def check(a, b, fa, fb, tol, _):
        ok = (rel(a, b, tol) == rel(fa, fb, tol)) and (rel(b, a, tol) == rel(fb, fa, tol))
        return ok, 0.0 if ok else 1.0
    return check


def _morphism(op):
    def check(a, b, fa, fb, tol, oracle):
        lhs = oracle(op(a, b, tol))
        rhs = op(fa, fb, tol)
        res = spectral_norm(lhs - rhs)
        return res <= max(1e-7, 100.0 * tol.effective(lhs, rhs)), res
    return check


def _orthogonality_iff(a, b, fa, fb, tol, _):
    eff = tol.atol + tol.rtol
    ok = (abs(np.trace(a @ b).real) <= eff) == (abs(np.trace(fa @ fb).real) <= eff)
    return ok, 0.0 if ok else 1.0


def _commutativity_iff(a, b, fa, fb, tol, _):
    ok = commute(a, b, tol) == commute(fa, fb, tol)
    return ok, 0.0 if ok else 1.0


def _orthocomplement_compat(a, b, fa, fb, tol, oracle):
    eye = identity(a.shape[0])
    res = spectral_norm(oracle(eye - a) - (eye - fa))
    return res <= max(1e-7, 100.0 * tol.effective(fa)), res


def _transition_equal(a, b, fa, fb, tol, _):
    res = abs(float(np.trace(a @ b).real) - float(np.trace(fa @ fb).real))
    return res <= max(1e-9, 10.0 * tol.effective(a, b)), res


CONTRACTS = {
    "loewner_order_iff": _relation_iff(loewner_le),
    "adjacency_iff": _relation_iff(is_adjacent),
    "commutativity_iff": _commutativity_iff,
    "orthogonality_iff": _orthogonality_iff,
    "jordan_product_morphism": _morphism(jordan_product),
    "triple_product_morphism": _morphism(triple_product),
    "orthocomplement_compatibility": _orthocomplement_compat,
    "transition_probability_equal": _transition_equal,
}


def verify_symmetry(oracle: Callable[[np.ndarray], np.ndarray], contract: str,
                    sampler: Callable[[np.random.Generator], np.ndarray],
                    trials: int = 500, seed=0,
                    tol: ToleranceContext = DEFAULT_TOL) -> SymmetryReport:
    """Sample pairs from the domain and test a preservation contract.

    The per-trial generator is derived from (seed, trial index), so results
    do not depend on scheduling; the first failing pair is reported as the
    counterexample together with the worst residual seen.
    """
    if contract not in CONTRACTS:
        raise ContractUnknown(f"unknown contract {contract!r}")
    check = CONTRACTS[contract]
    worst = 0.0
    counterexample = None
    failure_index = None
    for k in range(trials):
        rng = rng_for(seed, k)
        a = as_hermitian(sampler(rng), tol)
        b = as_hermitian(sampler(rng), tol)
        fa = as_hermitian(oracle(a), tol)
        fb = as_hermitian(oracle(b), tol)
        ok, res = check(a, b, fa, fb, tol, oracle)
        worst = max(worst, res)
        if not ok and counterexample is None:
            counterexample = (a, b)
            failure_index = k
    return SymmetryReport(
        contract=contract,
        trials=trials,
        passed=counterexample is None,
        worst_residual=worst,
        counterexample=counterexample,
        failure_index=failure_index,
    )
