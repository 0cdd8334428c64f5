"""Rank-one projections as projective rays, and reconstruction from ray maps.

A :class:`Ray` is a phase-fixed unit vector, the canonical representative of
a one-dimensional subspace.  :func:`semilinear_reconstruct` recovers the
invertible (conjugate-)linear map behind a black-box ray oracle from the
images of the basis rays, the pairwise sum rays and one imaginary-sum ray;
:func:`optimal_wigner_reconstruct` first forces such structure out of an
orthogonality-only oracle by fitting density matrices to its induced frame
functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    rank_tol,
    rng_for,
    spectral_norm,
)
from .errors import InconsistentSample, NotRankOneProjection, OracleNotInClass

__all__ = [
    "Ray",
    "random_ray",
    "same_ray",
    "projector_of",
    "transition_probability",
    "orthogonal",
    "collinear",
    "cosp_check",
    "SemilinearOperator",
    "RayMapFit",
    "tomography_family",
    "semilinear_reconstruct",
    "gleason_fit",
    "optimal_wigner_reconstruct",
]


class Ray:
    """Unit vector with the first component of modulus > 1e-8 made real positive."""

    __slots__ = ("vector",)

    def __init__(self, vector):
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0 or not np.all(np.isfinite(v)):
            raise ValueError("a ray needs a nonzero finite vector")
        v = v / norm
        idx = np.flatnonzero(np.abs(v) > 1e-8)
        k = idx[0] if len(idx) else int(np.argmax(np.abs(v)))
        v = v * np.conj(v[k] / abs(v[k]))
        object.__setattr__(self, "vector", v)

    def __setattr__(self, name, value):
        raise AttributeError("Ray is immutable")

    @property
    def n(self) -> int:
        return self.vector.shape[0]

    def projector(self) -> np.ndarray:
        v = self.vector.reshape(-1, 1)
        return v @ v.conj().T

    def overlap(self, other: "Ray") -> float:
        return float(np.abs(np.vdot(self.vector, other.vector)) ** 2)

    @classmethod
    def from_projector(cls, p, tol: ToleranceContext = DEFAULT_TOL) -> "Ray":
        p = as_hermitian(p, tol)
        if rank_tol(p, tol) != 1:
            raise NotRankOneProjection("matrix does not have rank one")
        dec = eig_hermitian(p, tol)
        return cls(dec.eigenvectors[:, -1])

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Ray({np.array2string(self.vector, precision=4)})"


def random_ray(n: int, seed) -> Ray:
    rng = rng_for(seed)
    return Ray(rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _as_ray(obj, tol: ToleranceContext) -> Ray:
    if isinstance(obj, Ray):
        return obj
    return Ray.from_projector(obj, tol)


def same_ray(p, q, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    return 1.0 - _as_ray(p, tol).overlap(_as_ray(q, tol)) <= tol.atol + tol.rtol


def projector_of(p, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    return _as_ray(p, tol).projector()


def transition_probability(p, q, tol: ToleranceContext = DEFAULT_TOL) -> float:
    """tr(PQ) for rank-one projections, i.e. |<p, q>|^2 on unit vectors."""
    return _as_ray(p, tol).overlap(_as_ray(q, tol))


def orthogonal(p, q, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    return transition_probability(p, q, tol) <= tol.atol + tol.rtol


def collinear(x, y, z, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """True when x lies in the span of y and z (least-squares residual test)."""
    vx = _as_ray(x, tol).vector
    span = np.stack([_as_ray(y, tol).vector, _as_ray(z, tol).vector], axis=1)
    q, _ = np.linalg.qr(span)
    resid = vx - q @ (q.conj().T @ vx)
    return float(np.linalg.norm(resid)) <= tol.atol + tol.rtol


def cosp_check(points: Sequence, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Complete orthogonal system: n pairwise orthogonal rays in dimension n."""
    rays = [_as_ray(p, tol) for p in points]
    if not rays:
        raise ValueError("need at least one point")
    n = rays[0].n
    if len(rays) != n:
        return False
    for i in range(n):
        for j in range(i + 1, n):
            if not orthogonal(rays[i], rays[j], tol):
                return False
    return True


@dataclass(frozen=True)
class SemilinearOperator:
    """Invertible matrix with a conjugation flag.

    Acts on vectors as ``M x`` (linear) or ``M conj(x)`` (conjugate-linear)
    and on hermitian matrices as the corresponding congruence.
    """

    matrix: np.ndarray
    conjugates: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if np.linalg.matrix_rank(m, tol=1e-10) < m.shape[0]:
            raise ValueError("operator matrix must be invertible")
        object.__setattr__(self, "matrix", m)

    def apply_vector(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        return self.matrix @ (np.conj(x) if self.conjugates else x)

    def apply_ray(self, p: Ray) -> Ray:
        return Ray(self.apply_vector(p.vector))

    def apply_matrix(self, a: np.ndarray) -> np.ndarray:
        a = np.conj(a) if self.conjugates else np.asarray(a, dtype=np.complex128)
        return as_hermitian(self.matrix @ a @ self.matrix.conj().T)

    def is_unitary(self, tol: ToleranceContext = DEFAULT_TOL) -> bool:
        m = self.matrix
        return spectral_norm(m.conj().T @ m - np.eye(m.shape[0])) <= 100 * tol.effective(m)

    def gauge_normalized(self) -> "SemilinearOperator":
        """Multiply by a unimodular scalar making the first sizable entry real positive."""
        flat = self.matrix.reshape(-1)
        idx = np.flatnonzero(np.abs(flat) > 1e-10)
        if len(idx) == 0:
            return self
        phase = flat[idx[0]] / abs(flat[idx[0]])
        return SemilinearOperator(self.matrix * np.conj(phase), self.conjugates)


@dataclass(frozen=True)
class RayMapFit:
    """Recovered semilinear operator plus verification data."""

    operator: SemilinearOperator
    residual: float
    probes: int
    gleason_min: Optional[float] = None


def _basis_ray(n: int, i: int) -> Ray:
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    return Ray(v)


def _sum_ray(n: int, i: int, j: int, coeff: complex) -> Ray:
    v = np.zeros(n, dtype=np.complex128)
    v[i] = 1.0
    v[j] = coeff
    return Ray(v)


def _solve_pair(u: np.ndarray, w: np.ndarray, target: np.ndarray, label: str) -> Tuple[complex, complex]:
    """Coefficients of target in span{u, w}; rejects ill-posed or off-span data."""
    basis = np.stack([u, w], axis=1)
    coeff, _, rank, sing = np.linalg.lstsq(basis, target, rcond=None)
    if rank < 2 or sing[-1] < 1e-8:
        raise OracleNotInClass(f"{label}: images of basis rays are numerically dependent")
    resid = float(np.linalg.norm(basis @ coeff - target))
    if resid > 1e-6:
        raise OracleNotInClass(f"{label}: image leaves the span of the basis images "
                               f"(residual {resid:.2e})")
    alpha, beta = complex(coeff[0]), complex(coeff[1])
    if abs(alpha) < 1e-8 or abs(beta) < 1e-8:
        raise OracleNotInClass(f"{label}: degenerate expansion coefficients")
    return alpha, beta


def semilinear_reconstruct(oracle: Callable[[Ray], Ray], n: int,
                           tol: ToleranceContext = DEFAULT_TOL,
                           seed=0, probes: int = 100,
                           residual_tol: float = 1e-7) -> RayMapFit:
    """Recover (U, conjugation flag) from a ray oracle induced by a semilinear map.

    Basis-ray images fix the columns up to scale, the images of the rays
    through e_1 + e_j fix the relative scales, and the image of the ray
    through e_1 + i e_2 decides linear versus conjugate-linear (coefficient
    ratio +i or -i).  The candidate is then verified on ``probes`` fresh
    random rays; any residual above ``residual_tol`` rejects the oracle.

    Only linear and conjugate-linear maps are representable; in dimension 2
    an oracle passes exactly when it preserves transition probabilities,
    while for n >= 3 preserving zero transition probability already forces
    this form.
    """
    if n < 2:
        raise ValueError("reconstruction needs dimension >= 2")
    u_vecs = [oracle(_basis_ray(n, i)).vector for i in range(n)]
    u_mat = np.stack(u_vecs, axis=1)
    if np.linalg.matrix_rank(u_mat, tol=1e-8) < n:
        raise OracleNotInClass("images of the basis rays do not span the space")

    cols = [u_vecs[0]]
    for j in range(1, n):
        w = oracle(_sum_ray(n, 0, j, 1.0)).vector
        alpha, beta = _solve_pair(u_vecs[0], u_vecs[j], w, f"sum ray 1+{j + 1}")
        cols.append((beta / alpha) * u_vecs[j])

    v = oracle(_sum_ray(n, 0, 1, 1.0j)).vector
    gamma, delta = _solve_pair(cols[0], cols[1], v, "imaginary sum ray")
    ratio = delta / gamma
    if abs(ratio - 1.0j) <= 1e-3:
        conjugates = False
    elif abs(ratio + 1.0j) <= 1e-3:
        conjugates = True
    else:
        raise OracleNotInClass(
            f"imaginary-sum coefficient ratio {ratio:.4f} is neither +i nor -i")

    op = SemilinearOperator(np.stack(cols, axis=1), conjugates).gauge_normalized()

    worst = 0.0
    worst_ray = None
    for k in range(probes):
        p = random_ray(n, rng_for(seed, k))
        dist = 1.0 - oracle(p).overlap(op.apply_ray(p))
        if dist > worst:
            worst, worst_ray = dist, p
    if worst > residual_tol:
        raise OracleNotInClass(
            f"verification failed: worst ray residual {worst:.3e} at {worst_ray!r}")
    return RayMapFit(operator=op, residual=worst, probes=probes)


def tomography_family(n: int) -> List[Ray]:
    """Basis rays plus all (e_i + e_j) and (e_i + i e_j) rays, n^2 points."""
    rays = [_basis_ray(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rays.append(_sum_ray(n, i, j, 1.0))
            rays.append(_sum_ray(n, i, j, 1.0j))
    return rays


def gleason_fit(sample: Iterable[Tuple[Ray, float]], n: int,
                tol: ToleranceContext = DEFAULT_TOL,
                fit_tol: float = 1e-7) -> np.ndarray:
    """Fit a density matrix D with tr(D P_k) = value_k by exact linear inversion.

    The sample must contain the standard tomography family; extra points are
    used as consistency checks.  Inconsistent values (fit residual, trace or
    negativity beyond ``fit_tol``) raise :class:`InconsistentSample`.
    """
    entries = [( _as_ray(p, tol), float(v)) for p, v in sample]

    def find(target: Ray) -> float:
        for ray, value in entries:
            if ray.overlap(target) >= 1.0 - 1e-9:
                return value
        raise ValueError("sample is missing a tomography family point")

    diag = np.array([find(_basis_ray(n, i)) for i in range(n)])
    d = np.zeros((n, n), dtype=np.complex128)
    np.fill_diagonal(d, diag)
    for i in range(n):
        for j in range(i + 1, n):
            avg = 0.5 * (diag[i] + diag[j])
            re = find(_sum_ray(n, i, j, 1.0)) - avg
            im = avg - find(_sum_ray(n, i, j, 1.0j))
            d[i, j] = re + 1j * im
            d[j, i] = re - 1j * im

    residual = max(abs(float(np.trace(d).real) - 1.0), 0.0)
    for ray, value in entries:
        v = ray.vector
        residual = max(residual, abs(float(np.real(np.vdot(v, d @ v))) - value))
    w = np.linalg.eigvalsh(d)
    residual = max(residual, max(0.0, -float(w[0])))
    if residual > fit_tol:
        raise InconsistentSample(
            f"sample is not a state frame function (residual {residual:.3e})")
    return d


def optimal_wigner_reconstruct(oracle: Callable[[Ray], Ray], n: int,
                               tol: ToleranceContext = DEFAULT_TOL,
                               seed=0, probes: int = 100,
                               residual_tol: float = 1e-7,
                               gleason_tol: float = 1e-8) -> RayMapFit:
    """Recover a unitary/antiunitary ray action assuming only that vanishing
    transition probability is never created (no bijectivity needed).

    For every probe ray Q the map P -> tr(image(Q) image(P)) is fitted to a
    density matrix E_Q over the tomography family; tr(E_Q Q) = 1 forces
    E_Q = Q, which shows all transition probabilities are preserved, and
    the rest is ordinary semilinear reconstruction.
    """
    if n < 3:
        raise ValueError("this reconstruction requires dimension >= 3")
    family = tomography_family(n)
    images = [oracle(p) for p in family]
    gleason_min = 1.0
    for q_ray, q_img in zip(family, images):
        values = [q_img.overlap(img) for img in images]
        try:
            e_q = gleason_fit(zip(family, values), n, tol)
        except InconsistentSample as exc:
            raise OracleNotInClass(
                f"induced frame function is not a state: {exc}") from exc
        v = q_ray.vector
        attained = float(np.real(np.vdot(v, e_q @ v)))
        gleason_min = min(gleason_min, attained)
        if attained < 1.0 - gleason_tol:
            raise OracleNotInClass(
                f"fitted state differs from the probe ray (tr(E_Q Q) = {attained:.12f})")
    fit = semilinear_reconstruct(oracle, n, tol, seed=seed, probes=probes,
                                 residual_tol=residual_tol)
    if not fit.operator.is_unitary(tol):
        raise OracleNotInClass("recovered map is not unitary")
    return RayMapFit(operator=fit.operator, residual=fit.residual,
                     probes=fit.probes, gleason_min=gleason_min)
