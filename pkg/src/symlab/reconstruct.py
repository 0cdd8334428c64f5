"""Estimators that recover canonical symmetry parameters from black-box oracles.

Each estimator follows the scikit-learn convention: constructor arguments are
plain configuration, ``fit(oracle)`` queries the black box on a deterministic
probe family plus seeded verification probes, and the recovered parameters
land in trailing-underscore attributes.  A probe failing any check required
by the declared oracle class raises :class:`OracleNotInClass`; a successful
fit certifies agreement on the probe set only, not a classification proof.

Gauge conventions: recovered operators are normalized to a real positive
first sizable entry, so congruence matrices are unique up to that unimodular
scalar only and shifts are unique outright.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from sklearn.base import BaseEstimator

from .commutant import bicommutant_rank_one_test, commutant_equal
from .core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    identity,
    is_projection_matrix,
    is_psd,
    random_effect,
    random_hermitian,
    random_projection,
    rank_tol,
    rng_for,
    spectral_apply,
    spectral_norm,
)
from .effects import is_scalar
from .errors import NonSeparableSpectrum, OracleNotInClass
from .projective import (
    Ray,
    SemilinearOperator,
    semilinear_reconstruct,
    tomography_family,
)
from .zoo import Congruence, UnitarySimilarity

__all__ = [
    "rank_one_direction",
    "ReconstructionResult",
    "OrderAutomorphismEstimator",
    "EffectSymmetryEstimator",
    "ProjectionSymmetryEstimator",
    "HermitianSymmetryEstimator",
]


def rank_one_direction(d, tol: ToleranceContext = DEFAULT_TOL) -> Optional[Ray]:
    """Direction y when D = t y y* for some t != 0, else None.

    Exactly then the zero set of x -> x* D x is the hyperplane orthogonal
    to y; any other nonzero hermitian D vanishes on a thinner or fatter set.
    """
    d = as_hermitian(d, tol)
    if rank_tol(d, tol) != 1:
        return None
    dec = eig_hermitian(d, tol)
    k = int(np.argmax(np.abs(dec.eigenvalues)))
    return Ray(dec.eigenvectors[:, k])


@dataclass(frozen=True)
class ReconstructionResult:
    """Recovered descriptor with verification metadata."""

    descriptor: object
    residual: float
    probes: int
    details: dict


def _pair_representative(p: np.ndarray, tol: ToleranceContext) -> np.ndarray:
    """Canonical element of {P, I - P}: smaller trace, ties lexicographic."""
    comp = identity(p.shape[0]) - p
    tr_p = float(np.trace(p).real)
    tr_c = float(np.trace(comp).real)
    if abs(tr_p - tr_c) > 0.5:
        return p if tr_p < tr_c else comp

    def key(m):
        return tuple(np.round(m.reshape(-1).view(float), 9))

    return p if key(p) <= key(comp) else comp


class OrderAutomorphismEstimator(BaseEstimator):
    """Recover T, S and the transpose flag from an order automorphism oracle.

    The oracle is declared to preserve the Loewner order in both directions
    on all hermitian matrices.  ``fit`` shifts by S = oracle(0), checks the
    order orientation on (0, I), reads the induced ray map off rank-one
    probes, rebuilds the congruence matrix from it plus one trace scale, and
    verifies the assembled map on fresh random hermitians.
    """

    def __init__(self, dim: int, seed: int = 0, tol: ToleranceContext = DEFAULT_TOL,
                 probes: int = 100, residual_tol: float = 1e-6):
        self.dim = dim
        self.seed = seed
        self.tol = tol
        self.probes = probes
        self.residual_tol = residual_tol

    def fit(self, oracle: Callable[[np.ndarray], np.ndarray], y=None):
        n, tol = self.dim, self.tol
        if n < 2:
            raise ValueError("dimension must be at least 2")
        shift = as_hermitian(oracle(np.zeros((n, n), dtype=np.complex128)), tol)

        def shifted(a):
            return as_hermitian(oracle(as_hermitian(a, tol)), tol) - shift

        image_of_eye = shifted(identity(n))
        if not is_psd(image_of_eye, tol):
            if is_psd(-image_of_eye, tol):
                raise OracleNotInClass("oracle reverses the order orientation on (0, I)")
            raise OracleNotInClass("images of 0 and I are not comparable")

        def ray_action(p: Ray) -> Ray:
            m = shifted(p.projector())
            if not is_psd(m, tol) or rank_tol(m, tol) != 1:
                raise OracleNotInClass(
                    "image of a rank-one psd probe is not rank-one psd")
            dec = eig_hermitian(m, tol)
            return Ray(dec.eigenvectors[:, -1])

        fit = semilinear_reconstruct(ray_action, n, tol, seed=(self.seed, 1),
                                     probes=self.probes, residual_tol=1e-7)

        e0 = np.zeros((n, n), dtype=np.complex128)
        e0[0, 0] = 1.0
        scale_num = float(np.trace(shifted(e0)).real)
        col = fit.operator.matrix[:, 0]
        scale = np.sqrt(scale_num / float(np.real(np.vdot(col, col))))
        op = SemilinearOperator(scale * fit.operator.matrix,
                                fit.operator.conjugates).gauge_normalized()
        descriptor = Congruence(matrix=op.matrix, conjugates=op.conjugates,
                                shift=shift, sign=1)

        worst = 0.0
        for k in range(self.probes):
            a = random_hermitian(n, rng_for((self.seed, 2), k), tol)
            worst = max(worst, spectral_norm(
                as_hermitian(oracle(a), tol) - descriptor.apply(a, tol)))
        if worst > self.residual_tol:
            raise OracleNotInClass(
                f"assembled congruence misses the oracle (residual {worst:.3e})")

        self.operator_ = op
        self.shift_ = shift
        self.conjugates_ = op.conjugates
        self.residual_ = worst
        self.descriptor_ = descriptor
        self.result_ = ReconstructionResult(descriptor, worst, self.probes,
                                            details={"ray_residual": fit.residual})
        return self

    def predict(self, a) -> np.ndarray:
        return self.descriptor_.apply(a, self.tol)


class EffectSymmetryEstimator(BaseEstimator):
    """Recover the unitary/antiunitary similarity behind an ortho-order
    automorphism of the effect algebra.

    Waypoints checked before reconstruction: 0, I and I/2 are fixed, and
    rank-one projections map to rank-one projections.  The induced ray map
    is then handed to the semilinear reconstruction, the result must be
    unitary, and the full map is verified on random effects.
    """

    def __init__(self, dim: int, seed: int = 0, tol: ToleranceContext = DEFAULT_TOL,
                 probes: int = 100, rank_one_checks: int = 50,
                 residual_tol: float = 1e-7):
        self.dim = dim
        self.seed = seed
        self.tol = tol
        self.probes = probes
        self.rank_one_checks = rank_one_checks
        self.residual_tol = residual_tol

    def fit(self, oracle: Callable[[np.ndarray], np.ndarray], y=None):
        n, tol = self.dim, self.tol
        if n < 3:
            raise ValueError("dimension must be at least 3")
        eye = identity(n)
        way_tol = max(1e-7, 100.0 * tol.effective(eye))
        for point, name in ((np.zeros((n, n), dtype=np.complex128), "0"),
                            (eye, "I"), (0.5 * eye, "I/2")):
            img = as_hermitian(oracle(point), tol)
            if spectral_norm(img - point) > way_tol:
                raise OracleNotInClass(f"oracle does not fix {name}")

        def checked_image(p_mat):
            m = as_hermitian(oracle(p_mat), tol)
            if rank_tol(m, tol) != 1 or not is_projection_matrix(m, tol):
                raise OracleNotInClass("a pure state maps outside the pure states")
            return m

        for k in range(self.rank_one_checks):
            checked_image(random_projection(n, 1, rng_for((self.seed, 3), k), tol))

        def ray_action(p: Ray) -> Ray:
            dec = eig_hermitian(checked_image(p.projector()), tol)
            return Ray(dec.eigenvectors[:, -1])

        fit = semilinear_reconstruct(ray_action, n, tol, seed=(self.seed, 4),
                                     probes=self.probes, residual_tol=1e-7)
        if not fit.operator.is_unitary(tol):
            raise OracleNotInClass("induced ray map is not unitary")
        op = fit.operator

        worst = 0.0
        for k in range(self.probes):
            a = random_effect(n, rng_for((self.seed, 5), k), tol)
            worst = max(worst, spectral_norm(
                as_hermitian(oracle(a), tol) - op.apply_matrix(a)))
        if worst > self.residual_tol:
            raise OracleNotInClass(
                f"similarity misses the oracle on effects (residual {worst:.3e})")

        self.operator_ = op
        self.conjugates_ = op.conjugates
        self.residual_ = worst
        self.descriptor_ = UnitarySimilarity(op)
        self.result_ = ReconstructionResult(self.descriptor_, worst, self.probes,
                                            details={"ray_residual": fit.residual})
        return self

    def predict(self, a) -> np.ndarray:
        return self.descriptor_.apply(a, self.tol)


class ProjectionSymmetryEstimator(BaseEstimator):
    """Recover the unitary behind a commutativity automorphism of the
    projection lattice, modulo the P ~ I - P pairing.

    Probes work in the quotient by complementation (trace <= n/2
    representative).  Trivial projections must stay trivial, rank-one images
    must pass the second-commutant size test, the commute/not-commute
    pattern must match on the deterministic probe family, and finally each
    random verification projection must land on the recovered image or its
    complement, which is reported per probe in ``pairings_``.
    """

    def __init__(self, dim: int, seed: int = 0, tol: ToleranceContext = DEFAULT_TOL,
                 probes: int = 100, residual_tol: float = 1e-7):
        self.dim = dim
        self.seed = seed
        self.tol = tol
        self.probes = probes
        self.residual_tol = residual_tol

    def fit(self, oracle: Callable[[np.ndarray], np.ndarray], y=None):
        n, tol = self.dim, self.tol
        if n < 3:
            raise ValueError("dimension must be at least 3")
        eye = identity(n)

        def image(p_mat):
            m = as_hermitian(oracle(p_mat), tol)
            if not is_projection_matrix(m, tol):
                raise OracleNotInClass("oracle left the projection lattice")
            return m

        for triv in (np.zeros((n, n), dtype=np.complex128), eye):
            m = image(triv)
            r = rank_tol(m, tol)
            if r not in (0, n):
                raise OracleNotInClass("a trivial projection maps to a nontrivial one")

        def quotient_ray(p: Ray) -> Ray:
            rep = _pair_representative(image(p.projector()), tol)
            if rank_tol(rep, tol) != 1:
                raise OracleNotInClass(
                    "a rank-one class maps outside the rank-one classes")
            dec = eig_hermitian(rep, tol)
            return Ray(dec.eigenvectors[:, -1])

        family = tomography_family(n)
        family_images = [quotient_ray(p) for p in family]

        for p, img in zip(family[: min(3, len(family))], family_images):
            if not bicommutant_rank_one_test(img.projector(), trials=6,
                                             seed=(self.seed, 6), tol=tol):
                raise OracleNotInClass(
                    "second-commutant size test fails on a rank-one image")

        def pattern(x: Ray, y: Ray) -> str:
            o = x.overlap(y)
            return "commuting" if (o <= 1e-8 or o >= 1.0 - 1e-8) else "generic"

        for i in range(len(family)):
            for j in range(i + 1, len(family)):
                if pattern(family[i], family[j]) != pattern(family_images[i],
                                                            family_images[j]):
                    raise OracleNotInClass(
                        "commutativity pattern broken on the probe family")

        fit = semilinear_reconstruct(quotient_ray, n, tol, seed=(self.seed, 7),
                                     probes=self.probes, residual_tol=1e-7)
        if not fit.operator.is_unitary(tol):
            raise OracleNotInClass("induced ray map is not unitary")
        op = fit.operator

        pairings = []
        worst = 0.0
        for k in range(self.probes):
            rng = rng_for((self.seed, 8), k)
            rank = int(rng.integers(1, n))
            q = random_projection(n, rank, rng, tol)
            img = image(q)
            direct = op.apply_matrix(q)
            d_direct = spectral_norm(img - direct)
            d_comp = spectral_norm(img - (eye - direct))
            if min(d_direct, d_comp) > self.residual_tol:
                raise OracleNotInClass(
                    f"verification probe missed both pairings (residuals "
                    f"{d_direct:.3e} / {d_comp:.3e})")
            worst = max(worst, min(d_direct, d_comp))
            pairings.append("direct" if d_direct <= d_comp else "complement")

        self.operator_ = op
        self.conjugates_ = op.conjugates
        self.residual_ = worst
        self.pairings_ = tuple(pairings)
        self.descriptor_ = UnitarySimilarity(op)
        self.result_ = ReconstructionResult(
            self.descriptor_, worst, self.probes,
            details={"pairings": self.pairings_, "ray_residual": fit.residual})
        return self

    def predict(self, a) -> np.ndarray:
        """Image in the direct branch; the oracle may complement per element."""
        return self.descriptor_.apply(a, self.tol)


class HermitianSymmetryEstimator(BaseEstimator):
    """Recover U plus per-input spectral tables from a commutativity
    automorphism of the hermitian matrices.

    Scalars must stay scalar and chosen symmetric-spectrum probes must stay
    nonscalar; two-eigenvalue probes induce a projection-lattice action that
    is reconstructed first; each verification probe A must then satisfy
    "U* oracle(A) U has the same commutant as A" (conjugated A on the
    transpose branch), and the certificate table of that equality is the
    recovered f_A.
    """

    def __init__(self, dim: int, seed: int = 0, tol: ToleranceContext = DEFAULT_TOL,
                 probes: int = 40, residual_tol: float = 1e-6,
                 resample_cap: int = 10):
        self.dim = dim
        self.seed = seed
        self.tol = tol
        self.probes = probes
        self.residual_tol = residual_tol
        self.resample_cap = resample_cap

    def fit(self, oracle: Callable[[np.ndarray], np.ndarray], y=None):
        n, tol = self.dim, self.tol
        if n < 3:
            raise ValueError("dimension must be at least 3")
        eye = identity(n)

        for t in (0.0, 1.0, -0.7):
            if not is_scalar(as_hermitian(oracle(t * eye), tol), tol):
                raise OracleNotInClass("a scalar matrix maps to a nonscalar one")

        e0 = np.zeros((n, n), dtype=np.complex128)
        e0[0, 0] = 1.0
        for probe in (e0, 2.0 * e0 - eye):
            if is_scalar(as_hermitian(oracle(probe), tol), tol):
                raise OracleNotInClass("a nonscalar matrix collapses to a scalar")

        def projection_action(p_mat):
            if is_scalar(p_mat, tol):
                m = as_hermitian(oracle(p_mat), tol)
                if not is_scalar(m, tol):
                    raise OracleNotInClass("a trivial projection class is not preserved")
                return np.zeros((n, n), dtype=np.complex128)
            m = as_hermitian(oracle(p_mat), tol)
            dec = eig_hermitian(m, tol)
            if len(dec.clusters) != 2:
                raise OracleNotInClass(
                    "a two-eigenvalue probe left the two-eigenvalue class")
            return _pair_representative(dec.cluster_projector(1), tol)

        proj = ProjectionSymmetryEstimator(n, seed=(self.seed, 9), tol=tol,
                                           probes=min(self.probes, 60),
                                           residual_tol=self.residual_tol)
        proj.fit(projection_action)
        op = proj.operator_
        undo = SemilinearOperator(op.matrix.conj().T, False)

        tables = []
        worst = 0.0
        for k in range(self.probes):
            a = self._separated_probe(k)
            base = as_hermitian(np.conj(a), tol) if op.conjugates else a
            mapped = undo.apply_matrix(as_hermitian(oracle(a), tol))
            try:
                equal, table = commutant_equal(base, mapped, tol)
            except NonSeparableSpectrum as exc:
                raise OracleNotInClass(
                    f"image spectrum is not separable at eig_cluster: {exc}") from exc
            if not equal:
                raise OracleNotInClass(
                    "oracle is not a spectral reparametrization over the "
                    "recovered unitary on some probe")
            tables.append(table)
            rebuilt = spectral_apply(base, dict(table), tol)
            worst = max(worst, spectral_norm(rebuilt - mapped))
        if worst > self.residual_tol:
            raise OracleNotInClass(
                f"certified tables miss the oracle (residual {worst:.3e})")

        self._oracle = oracle
        self.operator_ = op
        self.conjugates_ = op.conjugates
        self.tables_ = tuple(tables)
        self.residual_ = worst
        self.descriptor_ = UnitarySimilarity(op)
        self.result_ = ReconstructionResult(
            self.descriptor_, worst, self.probes,
            details={"tables": self.tables_, "pairings": proj.pairings_})
        return self

    def _separated_probe(self, index: int) -> np.ndarray:
        n, tol = self.dim, self.tol
        for attempt in range(self.resample_cap):
            a = random_hermitian(n, rng_for((self.seed, 10), index, attempt), tol)
            w = np.linalg.eigvalsh(a)
            if np.min(np.diff(w)) > 10.0 * tol.eig_cluster:
                return a
        raise OracleNotInClass("could not sample an eig_cluster-separated probe")

    def table_for(self, a) -> tuple:
        """Certificate table for a fresh input, queried through the oracle."""
        a = as_hermitian(a, self.tol)
        base = as_hermitian(np.conj(a), self.tol) if self.conjugates_ else a
        undo = SemilinearOperator(self.operator_.matrix.conj().T, False)
        mapped = undo.apply_matrix(as_hermitian(self._oracle(a), self.tol))
        equal, table = commutant_equal(base, mapped, self.tol)
        if not equal:
            raise OracleNotInClass("input has no spectral certificate under the oracle")
        return table

    def predict(self, a) -> np.ndarray:
        """Reproduce the oracle: U f_A(A~) U* with f_A extracted live."""
        a = as_hermitian(a, self.tol)
        base = as_hermitian(np.conj(a), self.tol) if self.conjugates_ else a
        mapped = spectral_apply(base, dict(self.table_for(a)), self.tol)
        u = self.operator_.matrix
        return as_hermitian(u @ mapped @ u.conj().T, self.tol)
