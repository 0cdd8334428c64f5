"""Dense hermitian matrix arithmetic, spectral calculus and random models.

Everything downstream works with plain ``numpy.ndarray`` values of dtype
complex128; a "hermitian matrix" is an array that went through
:func:`as_hermitian` (exact conjugate symmetry, real diagonal).  Tolerances
are carried explicitly through a :class:`ToleranceContext` so that every
module resolves "equal", "psd" or "same eigenvalue" the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    BadRank,
    DimensionMismatch,
    DimensionTooLarge,
    FunctionUndefinedOnSpectrum,
    NotPsd,
    NumericalFailure,
    SingularMatrix,
)

__all__ = [
    "ToleranceContext",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "as_hermitian",
    "is_hermitian",
    "identity",
    "spectral_norm",
    "eig_hermitian",
    "spectral_apply",
    "sqrt_psd",
    "inv_hermitian",
    "is_psd",
    "is_pd",
    "rank_tol",
    "is_projection_matrix",
    "rng_for",
    "random_hermitian",
    "random_effect",
    "random_projection",
    "random_unitary",
]

SpectralFunction = Union[
    Callable[[float], float],
    Mapping[float, float],
    Sequence[tuple],
]


@dataclass(frozen=True)
class ToleranceContext:
    """Global tolerance policy.

    atol
        absolute floor on every comparison.
    rtol
        relative part, scaled by the spectral norm of the operands.
    eig_cluster
        width below which two eigenvalues count as the same eigenvalue.
    max_dim
        guard against accidentally large inputs.
    """

    atol: float = 1e-9
    rtol: float = 1e-9
    eig_cluster: float = 1e-7
    max_dim: int = 64

    def __post_init__(self):
        if min(self.atol, self.rtol, self.eig_cluster) < 0 or self.max_dim < 1:
            raise ValueError("tolerance fields must be nonnegative, max_dim >= 1")
        if self.atol > 1e-3:
            raise ValueError("atol above 1e-3 is outside the sane range")

    def effective(self, *mats: np.ndarray) -> float:
        """Effective tolerance atol + rtol * max spectral norm of the operands."""
        scale = max((spectral_norm(m) for m in mats), default=0.0)
        return self.atol + self.rtol * scale


DEFAULT_TOL = ToleranceContext()


def as_hermitian(mat, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Return (M + M*)/2 as a complex128 array, checking shape and dimension.

    Averaging rather than rejecting keeps randomized pipelines total; the
    result has exact conjugate symmetry and a real diagonal.
    """
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > tol.max_dim:
        raise DimensionTooLarge(f"dimension {m.shape[0]} exceeds max_dim {tol.max_dim}")
    return (m + m.conj().T) / 2.0


def is_hermitian(mat, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    m = np.asarray(mat, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.all(np.abs(m - m.conj().T) <= tol.effective(m)))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def spectral_norm(mat) -> float:
    m = np.asarray(mat)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def same_dimension(*mats: np.ndarray) -> int:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"operands have mixed dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition with eigenvalues ascending and clustered.

    ``clusters`` is an ordered tuple of (start, stop) index ranges grouping
    eigenvalues that are closer than ``eig_cluster`` by chaining.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: tuple

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def cluster_values(self) -> np.ndarray:
        """One representative (mean) eigenvalue per cluster."""
        w = self.eigenvalues
        return np.array([w[a:b].mean() for a, b in self.clusters])

    def cluster_projector(self, k: int) -> np.ndarray:
        a, b = self.clusters[k]
        v = self.eigenvectors[:, a:b]
        return v @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return as_hermitian(v @ np.diag(self.eigenvalues) @ v.conj().T)


def _cluster_ascending(w: np.ndarray, width: float) -> tuple:
    clusters = []
    start = 0
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > width:
            clusters.append((start, i))
            start = i
    clusters.append((start, len(w)))
    return tuple(clusters)


def _phase_fix_columns(v: np.ndarray) -> np.ndarray:
    """Make the first component of modulus > 1e-8 of each column real positive."""
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        idx = np.flatnonzero(np.abs(col) > 1e-8)
        k = idx[0] if len(idx) else int(np.argmax(np.abs(col)))
        phase = col[k] / abs(col[k])
        v[:, j] = col * np.conj(phase)
    return v


def eig_hermitian(mat, tol: ToleranceContext = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a hermitian matrix.

    Eigenvalues come out ascending, eigenvector phases are fixed so repeated
    runs on the same input give the same matrix of eigenvectors.
    """
    a = as_hermitian(mat, tol)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - backend failure
        raise NumericalFailure(f"eigh did not converge: {exc}") from exc
    if not np.all(np.isfinite(w)):  # pragma: no cover - backend failure
        raise NumericalFailure("eigh returned non-finite eigenvalues")
    return SpectralDecomposition(
        eigenvalues=w.astype(float),
        eigenvectors=_phase_fix_columns(v),
        clusters=_cluster_ascending(w, tol.eig_cluster),
    )


def _table_lookup(table, value: float, width: float) -> float:
    best, best_dist = None, np.inf
    items = table.items() if isinstance(table, Mapping) else table
    for key, out in items:
        d = abs(float(key) - value)
        if d < best_dist:
            best, best_dist = out, d
    if best is None or best_dist > width:
        raise FunctionUndefinedOnSpectrum(
            f"no table entry within {width} of eigenvalue {value}")
    return float(best)


def spectral_apply(mat, f: SpectralFunction, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Apply a real function to a hermitian matrix through its spectrum.

    ``f`` is either a callable on the reals or a table (mapping / pair
    sequence) looked up per eigenvalue cluster within ``eig_cluster``.  The
    function is evaluated once per cluster at the cluster mean, which keeps
    the result well defined on near-degenerate spectra.
    """
    dec = eig_hermitian(mat, tol)
    out = np.empty_like(dec.eigenvalues)
    for (a, b), rep in zip(dec.clusters, dec.cluster_values()):
        if callable(f):
            val = f(float(rep))
        else:
            val = _table_lookup(f, float(rep), tol.eig_cluster)
        if not np.isfinite(val) or abs(np.imag(val)) > 0:
            raise FunctionUndefinedOnSpectrum(f"f({rep}) = {val} is not finite real")
        out[a:b] = float(val)
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(out) @ v.conj().T, tol)


def is_psd(mat, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    a = as_hermitian(mat, tol)
    w = np.linalg.eigvalsh(a)
    return bool(w[0] >= -tol.effective(a))


def is_pd(mat, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    a = as_hermitian(mat, tol)
    w = np.linalg.eigvalsh(a)
    return bool(w[0] > tol.effective(a))


def rank_tol(mat, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Number of eigenvalues of modulus above the effective tolerance."""
    a = as_hermitian(mat, tol)
    w = np.linalg.eigvalsh(a)
    return int(np.sum(np.abs(w) > tol.effective(a)))


def sqrt_psd(mat, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a psd matrix (negative noise clipped to 0)."""
    dec = eig_hermitian(mat, tol)
    if dec.eigenvalues[0] < -tol.effective(mat):
        raise NotPsd(f"min eigenvalue {dec.eigenvalues[0]} below psd tolerance")
    w = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(w) @ v.conj().T, tol)


def inv_hermitian(mat, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Inverse through the spectrum; rejects eigenvalues below tolerance."""
    dec = eig_hermitian(mat, tol)
    if np.min(np.abs(dec.eigenvalues)) <= tol.effective(mat):
        raise SingularMatrix("matrix has an eigenvalue within tolerance of zero")
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(1.0 / dec.eigenvalues) @ v.conj().T, tol)


def is_projection_matrix(mat, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    a = as_hermitian(mat, tol)
    return spectral_norm(a @ a - a) <= 10 * tol.effective(a, identity(a.shape[0]))


def _flatten_seed(seed) -> tuple:
    if isinstance(seed, (tuple, list)):
        out = ()
        for part in seed:
            out += _flatten_seed(part)
        return out
    return (int(seed) & 0xFFFFFFFFFFFFFFFF,)


def rng_for(seed, *indices: int) -> np.random.Generator:
    """Deterministic generator for (seed, index...) so trials are schedule-free."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = _flatten_seed(seed) + _flatten_seed(indices)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _complex_gaussian(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def random_hermitian(n: int, seed, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """(G + G*)/2 for G with independent standard complex gaussian entries."""
    g = _complex_gaussian(n, rng_for(seed))
    return as_hermitian(g, tol)


def random_unitary(n: int, seed, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Haar unitary via QR of a complex gaussian with phase-normalized R diagonal."""
    g = _complex_gaussian(n, rng_for(seed))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_effect(n: int, seed, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Random hermitian with eigenvalues clipped into [0, 1]."""
    dec = eig_hermitian(random_hermitian(n, seed, tol), tol)
    w = np.clip(dec.eigenvalues, 0.0, 1.0)
    v = dec.eigenvectors
    return as_hermitian(v @ np.diag(w) @ v.conj().T, tol)


def random_projection(n: int, rank: int, seed, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Projection onto the span of the first ``rank`` columns of a Haar unitary."""
    if not 1 <= rank <= n:
        raise BadRank(f"rank {rank} not in 1..{n}")
    u = random_unitary(n, seed, tol)[:, :rank]
    return as_hermitian(u @ u.conj().T, tol)
