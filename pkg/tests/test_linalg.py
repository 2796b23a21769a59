import numpy as np
import pytest
from hypothesis import given

from aradius.errors import NonFiniteError, NotHermitianError, NotPSDError, NotSquareError
from aradius.linalg import Tolerances, eigvalsh_stack, hermitian_eig, operator_norm, operator_norms, psd_functions
from strategies import hermitian, psd


def test_default_tolerances():
    tol = Tolerances()
    assert (tol.rank_tol, tol.eig_tol, tol.chain_tol, tol.theta_tol) == (1e-12, 1e-12, 1e-7, 1e-10)


@pytest.mark.parametrize("kwargs", [{"rank_tol": 0.0}, {"eig_tol": -1.0}, {"rank_tol": 1e-3}, {"chain_tol": float("nan")}])
def test_tolerances_reject_bad_values(kwargs):
    with pytest.raises(ValueError):
        Tolerances(**kwargs)


def test_eig_diag_and_pauli_y():
    vals, _ = hermitian_eig(np.diag([2.0, 1.0]))
    assert np.allclose(vals, [1.0, 2.0], atol=1e-14)
    vals, vecs = hermitian_eig(np.array([[0, -1j], [1j, 0]]))
    assert np.allclose(vals, [-1.0, 1.0], atol=1e-14)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(2), atol=1e-13)


def test_eig_zero_matrix():
    vals, vecs = hermitian_eig(np.zeros((3, 3)))
    assert np.all(vals == 0)
    assert np.allclose(vecs, np.eye(3))


@given(hermitian())
def test_eig_reconstructs_and_matches_lapack(H):
    vals, vecs = hermitian_eig(H)
    scale = 1 + np.linalg.norm(H, 2)
    assert np.all(np.diff(vals) >= 0)
    assert np.linalg.norm(vecs.conj().T @ vecs - np.eye(len(H))) <= 1e-12
    assert np.linalg.norm(H - (vecs * vals) @ vecs.conj().T, 2) <= 1e-10 * scale
    assert np.allclose(vals, np.linalg.eigvalsh(H), atol=1e-10 * scale, rtol=0)


def test_eig_is_deterministic():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = g + g.conj().T
    a, b = hermitian_eig(H), hermitian_eig(H)
    assert np.array_equal(a.eigenvalues, b.eigenvalues) and np.array_equal(a.eigenvectors, b.eigenvectors)


def test_eig_input_errors():
    with pytest.raises(NotHermitianError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NotSquareError):
        hermitian_eig(np.ones((2, 3)))
    with pytest.raises(NonFiniteError):
        hermitian_eig(np.array([[np.nan, 0], [0, 1]]))


def test_stack_matches_single():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((50, 3, 3)) + 1j * rng.standard_normal((50, 3, 3))
    H = g + np.conj(np.swapaxes(g, 1, 2))
    assert np.allclose(eigvalsh_stack(H), np.linalg.eigvalsh(H), atol=1e-12)


def test_operator_norm_examples():
    assert operator_norm(np.array([[0, 1], [0, 0]])) == pytest.approx(1.0, abs=1e-15)
    assert operator_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0, abs=1e-14)
    rng = np.random.default_rng(1)
    M = rng.standard_normal((20, 4, 4)) + 1j * rng.standard_normal((20, 4, 4))
    assert np.allclose(operator_norms(M), np.linalg.norm(M, ord=2, axis=(1, 2)), rtol=1e-13)


@given(psd())
def test_psd_functions_identities(A):
    f = psd_functions(A)
    n = len(A)
    scale = 1 + np.linalg.norm(A, 2)
    assert f.rank == np.linalg.matrix_rank(A, tol=1e-9 * scale)
    assert np.linalg.norm(f.sqrt @ f.sqrt - A, 2) <= 1e-10 * scale
    P = f.range_proj
    assert np.linalg.norm(P @ P - P, 2) <= 1e-12
    assert np.linalg.norm(P - P.conj().T, 2) <= 1e-12
    assert np.linalg.norm(A @ f.pinv @ A - A, 2) <= 1e-9 * scale
    assert np.linalg.norm(f.sqrt @ f.sqrt_pinv - P, 2) <= 1e-9
    assert f.basis.shape == (n, f.rank) and f.kernel_basis.shape == (n, n - f.rank)


def test_rank_examples():
    assert psd_functions(np.diag([1.0, 0.0])).rank == 1
    assert psd_functions(np.eye(3)).rank == 3
    assert psd_functions(np.zeros((2, 2))).rank == 0
    # eigenvalue below rank_tol relative to the top one counts as zero
    assert psd_functions(np.diag([1.0, 1e-14])).rank == 1
    assert psd_functions(np.diag([1.0, 1e-11])).rank == 2


def test_negative_eigenvalue_rejected():
    with pytest.raises(NotPSDError):
        psd_functions(np.diag([1.0, -1e-3]))
