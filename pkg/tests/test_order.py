import numpy as np
import numpy.testing as npt
import pytest

from symlab.core import (
    DEFAULT_TOL,
    as_hermitian,
    identity,
    inv_hermitian,
    random_effect,
    random_hermitian,
    random_projection,
    rng_for,
    spectral_norm,
)
from symlab.errors import EqualInputs, NotAnEffect, NotRankOneProjection
from symlab.order import (
    comparability_cone_witness,
    comparable,
    interval_chain_check,
    is_adjacent,
    loewner_le,
    max_scalar_below,
)

INCOMPARABLE_A = np.diag([1.0, 0.0]).astype(complex)
INCOMPARABLE_B = 0.5 * np.ones((2, 2), dtype=complex)


def test_loewner_examples():
    assert loewner_le(np.diag([1.0, 2.0]), np.diag([2.0, 3.0]))
    a = random_hermitian(3, 1)
    assert loewner_le(a, a)
    # difference has eigenvalues +-sqrt(2)/2: incomparable both ways
    w = np.linalg.eigvalsh(INCOMPARABLE_B - INCOMPARABLE_A)
    npt.assert_allclose(np.abs(w), np.sqrt(2.0) / 2.0, atol=1e-12)
    assert not loewner_le(INCOMPARABLE_A, INCOMPARABLE_B)
    assert not loewner_le(INCOMPARABLE_B, INCOMPARABLE_A)


def test_adjacency_examples():
    a = random_hermitian(3, 2)
    y = rng_for(3).standard_normal(3) + 1j * rng_for(3).standard_normal(3)
    y = y / np.linalg.norm(y)
    assert is_adjacent(a, a + np.outer(y, y.conj()))
    assert not is_adjacent(np.zeros((3, 3)), np.diag([1.0, 1.0, 0.0]))
    assert not is_adjacent(a, a)


def test_chain_check_comparable_witness():
    verdict = interval_chain_check(np.zeros((2, 2)), np.diag([2.0, 1.0]))
    assert not verdict.adjacent and verdict.comparable
    c, d = verdict.witness
    npt.assert_allclose(c, np.diag([2.0, 0.0]), atol=1e-12)
    npt.assert_allclose(d, np.diag([0.0, 1.0]), atol=1e-12)
    assert not comparable(c, d)


def test_chain_check_adjacent_and_incomparable():
    y = np.array([1.0, 1j]) / np.sqrt(2.0)
    verdict = interval_chain_check(np.zeros((2, 2)), np.outer(y, y.conj()))
    assert verdict.adjacent and verdict.witness is None

    verdict = interval_chain_check(INCOMPARABLE_A, INCOMPARABLE_B)
    assert not verdict.adjacent and not verdict.comparable
    assert verdict.witness is None

    with pytest.raises(EqualInputs):
        interval_chain_check(INCOMPARABLE_A, INCOMPARABLE_A)


def test_chain_witness_soundness():
    # whenever a witness appears, direct order calls confirm betweenness
    # and incomparability
    for k in range(300):
        rng = rng_for((4, k))
        n = 2 + k % 3
        a = random_hermitian(n, rng)
        w = random_hermitian(n, (5, k))
        b = as_hermitian(a + w @ w + 0.05 * identity(n))
        verdict = interval_chain_check(a, b)
        assert verdict.comparable and not verdict.adjacent
        c, d = verdict.witness
        assert loewner_le(a, c) and loewner_le(c, b)
        assert loewner_le(a, d) and loewner_le(d, b)
        assert not loewner_le(c, d) and not loewner_le(d, c)


def test_adjacency_chain_equivalence():
    for k in range(1000):
        rng = rng_for((6, k))
        n = 2 + k % 3
        a = random_hermitian(n, rng)
        if k % 3 == 0:
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            t = float(rng.uniform(0.2, 2.0)) * (1 if rng.random() < 0.5 else -1)
            b = as_hermitian(a + t * np.outer(v, v.conj()) / np.vdot(v, v).real)
        elif k % 3 == 1:
            w = random_hermitian(n, (7, k))
            b = as_hermitian(a + w @ w + 0.05 * identity(n))
        else:
            b = random_hermitian(n, (8, k))
        if spectral_norm(a - b) <= DEFAULT_TOL.effective(a, b):
            continue
        verdict = interval_chain_check(a, b)
        chain_holds = verdict.comparable and verdict.witness is None
        assert is_adjacent(a, b) == chain_holds


def test_order_congruence_invariance():
    # T A T* preserves the order relation in both directions
    for k in range(1000):
        rng = rng_for((9, k))
        n = 2 + k % 3
        a = random_hermitian(n, rng)
        b = random_hermitian(n, (10, k))
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        t = g + 1.5 * np.sqrt(n) * np.eye(n)
        ta = as_hermitian(t @ a @ t.conj().T)
        tb = as_hermitian(t @ b @ t.conj().T)
        assert loewner_le(a, b) == loewner_le(ta, tb)


def test_inversion_antimonotone():
    for k in range(200):
        rng = rng_for((11, k))
        n = 2 + k % 4
        g = random_hermitian(n, rng)
        a = as_hermitian(g @ g + 0.3 * identity(n))
        w = random_hermitian(n, (12, k))
        b = as_hermitian(a + w @ w + 0.05 * identity(n))
        assert loewner_le(a, b)
        assert loewner_le(inv_hermitian(b), inv_hermitian(a))


def test_comparability_cone_witness():
    w = comparability_cone_witness(np.diag([1.0, 1.0, 0.0]))
    b, c = w
    npt.assert_allclose(b + c, np.diag([1.0, 1.0, 0.0]), atol=1e-9)
    assert not comparable(b, c)
    a = np.diag([1.0, 1.0, 0.0])
    assert loewner_le(b, a) and loewner_le(c, a)

    y = np.array([1.0, 1j]) / np.sqrt(2.0)
    assert comparability_cone_witness(0.5 * np.outer(y, y.conj())) is None
    assert comparability_cone_witness(np.zeros((2, 2))) is None
    with pytest.raises(NotAnEffect):
        comparability_cone_witness(np.diag([2.0, 0.0]))


def test_max_scalar_below_examples():
    p = random_projection(3, 1, 13)
    assert max_scalar_below(p, p) == 1.0
    q = random_projection(2, 1, 14)
    assert max_scalar_below(0.5 * identity(2), q) == pytest.approx(0.5, abs=1e-6)
    e2 = np.diag([0.0, 1.0]).astype(complex)
    assert max_scalar_below(np.diag([1.0, 0.0]), e2) == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(NotAnEffect):
        max_scalar_below(2.0 * identity(2), q)
    with pytest.raises(NotRankOneProjection):
        max_scalar_below(0.5 * identity(2), identity(2))


def test_effect_equality_by_scalar_functional():
    # equal effects give equal functionals; appreciably distinct effects are
    # separated by some rank-one direction
    a = as_hermitian(0.8 * random_effect(3, 15) + 0.1 * identity(3))
    b = as_hermitian(0.8 * random_effect(3, 16) + 0.1 * identity(3))
    assert spectral_norm(a - b) > 0.05
    max_gap = 0.0
    for k in range(200):
        p = random_projection(3, 1, (17, k))
        va, vb = max_scalar_below(a, p), max_scalar_below(b, p)
        max_gap = max(max_gap, abs(va - vb))
        assert max_scalar_below(a, p) == pytest.approx(va, abs=1e-8)
    assert max_gap > 1e-3
