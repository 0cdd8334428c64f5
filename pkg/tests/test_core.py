import numpy as np
import numpy.testing as npt
import pytest

from symlab.core import (
    DEFAULT_TOL,
    ToleranceContext,
    as_hermitian,
    eig_hermitian,
    inv_hermitian,
    is_pd,
    is_projection_matrix,
    is_psd,
    random_effect,
    random_hermitian,
    random_projection,
    random_unitary,
    rank_tol,
    rng_for,
    spectral_apply,
    spectral_norm,
    sqrt_psd,
)
from symlab.errors import (
    BadRank,
    DimensionMismatch,
    DimensionTooLarge,
    FunctionUndefinedOnSpectrum,
    NotPsd,
    SingularMatrix,
)


def test_tolerance_context_validation():
    with pytest.raises(ValueError):
        ToleranceContext(atol=-1.0)
    with pytest.raises(ValueError):
        ToleranceContext(atol=1e-2)
    with pytest.raises(ValueError):
        ToleranceContext(max_dim=0)
    t = ToleranceContext()
    assert t.effective(np.eye(3)) == pytest.approx(t.atol + t.rtol)


def test_as_hermitian_exact_symmetry():
    rng = rng_for(0)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = as_hermitian(m)
    assert np.array_equal(h, h.conj().T)
    assert np.all(h.diagonal().imag == 0.0)


def test_as_hermitian_guards():
    with pytest.raises(DimensionMismatch):
        as_hermitian(np.ones((2, 3)))
    with pytest.raises(DimensionTooLarge):
        as_hermitian(np.eye(5), ToleranceContext(max_dim=4))


def test_eig_diagonal_examples():
    dec = eig_hermitian(np.diag([2.0, 1.0]))
    npt.assert_allclose(dec.eigenvalues, [1.0, 2.0])
    npt.assert_allclose(np.abs(dec.eigenvectors), np.eye(2)[:, ::-1], atol=1e-14)

    dec = eig_hermitian(np.zeros((3, 3)))
    npt.assert_allclose(dec.eigenvalues, 0.0)
    assert len(dec.clusters) == 1

    # characteristic polynomial of [[0,1],[1,0]] is l^2 - 1
    dec = eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    npt.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)


def test_eig_roundtrip_and_unitarity():
    for k in range(1000):
        n = 2 + k % 7
        a = random_hermitian(n, (1, k))
        dec = eig_hermitian(a)
        eff = DEFAULT_TOL.effective(a)
        assert spectral_norm(dec.reconstruct() - a) <= 10 * max(eff, 1e-12)
        v = dec.eigenvectors
        assert spectral_norm(v.conj().T @ v - np.eye(n)) <= 10 * eff


def test_eig_deterministic_phase_fix():
    a = random_hermitian(5, 7)
    d1 = eig_hermitian(a)
    d2 = eig_hermitian(a.copy())
    npt.assert_array_equal(d1.eigenvectors, d2.eigenvectors)
    for j in range(5):
        col = d1.eigenvectors[:, j]
        k = np.flatnonzero(np.abs(col) > 1e-8)[0]
        assert col[k].real > 0 and abs(col[k].imag) < 1e-12


def test_spectral_apply_examples():
    npt.assert_allclose(spectral_apply(np.diag([1.0, 4.0]), np.sqrt),
                        np.diag([1.0, 2.0]), atol=1e-12)
    a = random_hermitian(4, 9)
    npt.assert_allclose(spectral_apply(a, lambda x: x), a, atol=1e-12)
    npt.assert_allclose(
        spectral_apply(np.diag([1.0, 2.0, 3.0]), {1.0: 3.0, 2.0: 1.0, 3.0: 2.0}),
        np.diag([3.0, 1.0, 2.0]), atol=1e-12)


def test_spectral_apply_composition():
    f = lambda x: x + 1.0
    g = lambda x: 2.0 * x
    for k in range(50):
        a = random_hermitian(4, (2, k))
        lhs = spectral_apply(spectral_apply(a, f), g)
        rhs = spectral_apply(a, lambda x: g(f(x)))
        assert spectral_norm(lhs - rhs) <= 1e-10


def test_spectral_apply_table_miss():
    with pytest.raises(FunctionUndefinedOnSpectrum):
        spectral_apply(np.diag([1.0, 5.0]), {1.0: 2.0})


def test_spectral_apply_commutes_with_input():
    a = random_hermitian(5, 11)
    fa = spectral_apply(a, lambda x: x ** 3 - x)
    assert spectral_norm(a @ fa - fa @ a) <= 1e-10


def test_sqrt_psd():
    b = random_hermitian(4, 13)
    a = as_hermitian(b @ b)
    r = sqrt_psd(a)
    assert spectral_norm(r @ r - a) <= 10 * DEFAULT_TOL.effective(a)
    with pytest.raises(NotPsd):
        sqrt_psd(np.diag([1.0, -1.0]))


def test_inv_hermitian():
    a = np.diag([1.0, 2.0, -3.0])
    npt.assert_allclose(inv_hermitian(a) @ a, np.eye(3), atol=1e-12)
    with pytest.raises(SingularMatrix):
        inv_hermitian(np.diag([1.0, 0.0]))


def test_psd_checks_examples():
    assert is_psd(np.diag([1.0, 0.0]))
    assert not is_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))  # eigenvalue -1
    assert is_pd(np.eye(2)) and not is_pd(np.diag([1.0, 0.0]))
    y = np.array([1.0, 2j, -1.0])
    y = y / np.linalg.norm(y)
    assert rank_tol(np.outer(y, y.conj())) == 1


def _psd_oracle_cholesky(a, tol):
    # independent psd route: Cholesky of the shifted matrix succeeds
    # exactly when the smallest eigenvalue is above -effective tolerance
    try:
        np.linalg.cholesky(a + tol.effective(a) * np.eye(a.shape[0]))
        return True
    except np.linalg.LinAlgError:
        return False


def _psd_oracle_minors_2x2(a, tol):
    eff = tol.effective(a)
    det = a[0, 0].real * a[1, 1].real - abs(a[0, 1]) ** 2
    return a[0, 0].real >= -eff and a[1, 1].real >= -eff and det >= -eff


def test_is_psd_oracle_agreement():
    for k in range(1000):
        n = 2 + k % 7
        rng = rng_for((3, k))
        kind = k % 3
        if kind == 0:
            a = random_hermitian(n, rng)
        elif kind == 1:
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            a = as_hermitian(g @ g.conj().T)
        else:
            a = random_effect(n, rng) - 0.05 * np.eye(n)
        assert is_psd(a) == _psd_oracle_cholesky(a, DEFAULT_TOL)
        if n == 2:
            assert is_psd(a) == _psd_oracle_minors_2x2(a, DEFAULT_TOL)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_random_models_contracts(n):
    p = random_projection(n, 1, 4)
    assert is_projection_matrix(p)
    assert np.trace(p).real == pytest.approx(1.0, abs=1e-9)

    e = random_effect(n, 5)
    w = np.linalg.eigvalsh(e)
    assert w[0] >= -1e-12 and w[-1] <= 1.0 + 1e-12

    u = random_unitary(n, 6)
    assert spectral_norm(u.conj().T @ u - np.eye(n)) <= 1e-12


def test_random_models_deterministic():
    npt.assert_array_equal(random_hermitian(4, 42), random_hermitian(4, 42))
    npt.assert_array_equal(random_unitary(3, 42), random_unitary(3, 42))
    assert not np.array_equal(random_hermitian(4, 42), random_hermitian(4, 43))


def test_random_projection_bad_rank():
    with pytest.raises(BadRank):
        random_projection(3, 0, 1)
    with pytest.raises(BadRank):
        random_projection(3, 4, 1)
