import numpy as np
import numpy.testing as npt
import pytest

from symlab.commutant import commute
from symlab.core import (
    DEFAULT_TOL,
    as_hermitian,
    identity,
    is_psd,
    random_effect,
    random_hermitian,
    random_projection,
    random_unitary,
    rng_for,
    spectral_norm,
    sqrt_psd,
)
from symlab.effects import (
    NO,
    UNKNOWN,
    YES,
    as_effect,
    coexistent,
    geometric_mean,
    is_scalar,
    jordan_product,
    orthocomplement,
    sequential_product,
    triple_product,
)
from symlab.errors import NotAnEffect, NotPositiveDefinite


def test_as_effect_clipping_and_rejection():
    near = np.diag([1.0 + 1e-12, -1e-12])
    e = as_effect(near)
    w = np.linalg.eigvalsh(e)
    assert w[0] >= 0.0 and w[-1] <= 1.0
    with pytest.raises(NotAnEffect):
        as_effect(np.diag([1.5, 0.0]))


def test_orthocomplement_examples():
    npt.assert_allclose(orthocomplement(np.zeros((2, 2))), np.eye(2), atol=1e-15)
    npt.assert_allclose(orthocomplement(0.5 * identity(2)), 0.5 * np.eye(2), atol=1e-15)
    npt.assert_allclose(orthocomplement(np.diag([0.3, 0.8])), np.diag([0.7, 0.2]),
                        atol=1e-15)
    a = random_effect(4, 1)
    npt.assert_allclose(orthocomplement(orthocomplement(a)), a, atol=1e-15)
    npt.assert_allclose(a + orthocomplement(a), np.eye(4), atol=1e-15)


def test_product_examples():
    p = np.diag([1.0, 0.0]).astype(complex)
    q = 0.5 * np.ones((2, 2), dtype=complex)
    npt.assert_allclose(sequential_product(p, q), [[0.5, 0.0], [0.0, 0.0]], atol=1e-12)
    a = random_hermitian(3, 2)
    npt.assert_allclose(jordan_product(a, identity(3)), a, atol=1e-12)
    proj = random_projection(3, 1, 3)
    npt.assert_allclose(sequential_product(proj, proj), proj, atol=1e-12)


def test_triple_product_orthogonality():
    # for rank-one P and psd B: P B P = 0 exactly when B kills the range of P
    p = np.diag([1.0, 0.0, 0.0]).astype(complex)
    b_orth = np.diag([0.0, 1.0, 2.0]).astype(complex)
    b_overlap = as_hermitian(np.ones((3, 3)))
    assert spectral_norm(triple_product(p, b_orth)) <= 1e-12
    assert spectral_norm(triple_product(p, b_overlap)) > 0.5


def test_sequential_product_stays_effect():
    for k in range(1000):
        n = 2 + k % 4
        a = random_effect(n, (4, k))
        b = random_effect(n, (5, k))
        c = sequential_product(a, b)
        w = np.linalg.eigvalsh(c)
        assert w[0] >= -1e-12 and w[-1] <= 1.0 + 1e-12


def test_geometric_mean_examples():
    a = as_hermitian(random_hermitian(3, 6) @ random_hermitian(3, 6) + 0.3 * np.eye(3))
    npt.assert_allclose(geometric_mean(a, a), a, atol=1e-10)
    b = as_hermitian(random_hermitian(3, 7) @ random_hermitian(3, 7) + 0.3 * np.eye(3))
    npt.assert_allclose(geometric_mean(identity(3), b), sqrt_psd(b), atol=1e-10)
    npt.assert_allclose(geometric_mean(np.diag([1.0, 4.0]), np.diag([4.0, 1.0])),
                        np.diag([2.0, 2.0]), atol=1e-12)
    with pytest.raises(NotPositiveDefinite):
        geometric_mean(np.diag([1.0, 0.0]), identity(2))


def _random_pd(n, seed):
    g = random_hermitian(n, seed)
    return as_hermitian(g @ g + 0.2 * identity(n))


def test_geometric_mean_symmetry_and_equivariance():
    for k in range(500):
        n = 2 + k % 5
        a = _random_pd(n, (8, k))
        b = _random_pd(n, (9, k))
        m = geometric_mean(a, b)
        assert spectral_norm(m - geometric_mean(b, a)) <= 100 * DEFAULT_TOL.effective(m)
        rng = rng_for((10, k))
        t = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) \
            + 1.5 * np.sqrt(n) * np.eye(n)
        lhs = as_hermitian(t @ m @ t.conj().T)
        rhs = geometric_mean(as_hermitian(t @ a @ t.conj().T),
                             as_hermitian(t @ b @ t.conj().T))
        assert spectral_norm(lhs - rhs) <= 1e-7 * max(1.0, spectral_norm(lhs))


def _witness_valid(decision, a, b):
    g, e, f = decision.witness
    eye = np.eye(a.shape[0])
    checks = [
        spectral_norm(a - (e + g)) <= 10 * DEFAULT_TOL.effective(a),
        spectral_norm(b - (f + g)) <= 10 * DEFAULT_TOL.effective(b),
        is_psd(g), is_psd(e), is_psd(f),
        is_psd(as_hermitian(eye - (e + f + g)) + 10 * DEFAULT_TOL.effective(a, b) * eye),
    ]
    return all(checks)


def test_coexistence_scalar_fast_path():
    b = random_effect(2, 11)
    d = coexistent(0.3 * identity(2), b)
    assert d.verdict == YES
    g, e, f = d.witness
    npt.assert_allclose(g, 0.3 * b, atol=1e-12)
    npt.assert_allclose(e, 0.3 * (np.eye(2) - b), atol=1e-12)
    npt.assert_allclose(f, 0.7 * b, atol=1e-12)
    assert _witness_valid(d, 0.3 * identity(2), b)


def test_coexistence_projection_pair():
    p = np.diag([1.0, 0.0]).astype(complex)
    q = 0.5 * np.ones((2, 2), dtype=complex)
    d = coexistent(p, q)
    assert d.verdict == NO
    assert d.witness is None and d.reason


def test_coexistence_orthocomplement_pair():
    a = random_effect(3, 12)
    d = coexistent(a, orthocomplement(a))
    assert d.verdict == YES and _witness_valid(d, a, orthocomplement(a))


def test_coexistence_commuting_pairs():
    for k in range(300):
        n = 2 + k % 3
        u = random_unitary(n, (13, k))
        rng = rng_for((14, k))
        a = as_effect(u @ np.diag(rng.uniform(0, 1, n)) @ u.conj().T)
        b = as_effect(u @ np.diag(rng.uniform(0, 1, n)) @ u.conj().T)
        d = coexistent(a, b)
        assert d.verdict == YES and _witness_valid(d, a, b)
        # orthocomplementing one argument keeps the decisive verdict
        d2 = coexistent(orthocomplement(a), b)
        assert d2.verdict == YES


def test_coexistence_dykstra_feasible_noncommuting():
    # built to be feasible: A = E + G, B = F + G with E + F + G <= 0.9 I
    hits = 0
    for k in range(20):
        rng = rng_for((15, k))
        parts = []
        for j in range(3):
            g = random_hermitian(2, (16, k, j))
            parts.append(g @ g)
        total = sum(spectral_norm(p) for p in parts)
        e, f, g = [as_hermitian(0.9 * p / total) for p in parts]
        a, b = as_effect(e + g), as_effect(f + g)
        if commute(a, b):
            continue
        hits += 1
        d = coexistent(a, b)
        assert d.verdict == YES, (k, d.reason)
        assert _witness_valid(d, a, b)
    assert hits > 10


def test_coexistence_certified_no_and_unknown():
    # frozen instances from the random-effect model: one grid-certifiable
    # non-coexistent pair and one too close to the boundary to certify
    a, b = random_effect(2, (1000, 20)), random_effect(2, (2000, 20))
    d = coexistent(a, b)
    assert d.verdict == NO and "certificate" in d.reason

    a, b = random_effect(2, (1000, 25)), random_effect(2, (2000, 25))
    d = coexistent(a, b)
    assert d.verdict == UNKNOWN and d.iterations > 0


def test_is_scalar():
    assert is_scalar(0.7 * identity(3))
    assert not is_scalar(np.diag([1.0, 0.0]))
    assert is_scalar(np.eye(2) + 1e-12 * np.diag([1.0, -1.0]))
