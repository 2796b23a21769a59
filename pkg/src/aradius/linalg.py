"""Dense linear algebra primitives: Hermitian eigensolver, operator norm and PSD functional calculus.

The Hermitian eigensolver is a cyclic complex Jacobi iteration. It is compiled with
numba and also has a batched form, which the angle optimizers use to evaluate a
whole grid of operator norms in one call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _jacobi
from .errors import NonFiniteError, NotHermitianError, NotPSDError, NotSquareError

MAX_SWEEPS = 60


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    rank_tol: relative eigenvalue cutoff used to decide the rank of a weight.
    eig_tol: Jacobi stopping threshold and Hermitian-input check.
    chain_tol: mixed tolerance for inequality chains, a <= b + chain_tol * (1 + |b|).
    theta_tol: target relative certified error of angle optimizers.
    """

    rank_tol: float = 1e-12
    eig_tol: float = 1e-12
    chain_tol: float = 1e-7
    theta_tol: float = 1e-10

    def __post_init__(self):
        for name in ("rank_tol", "eig_tol", "chain_tol", "theta_tol"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and np.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be a positive finite number, got {val!r}")
        if self.rank_tol >= 1e-6:
            raise ValueError("rank_tol must be below 1e-6")


DEFAULT_TOL = Tolerances()


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


class PSDFunctions(NamedTuple):
    sqrt: np.ndarray
    sqrt_pinv: np.ndarray
    pinv: np.ndarray
    range_proj: np.ndarray
    rank: int
    basis: np.ndarray  # orthonormal columns spanning the range, eigenvalue order
    spectrum: np.ndarray  # positive eigenvalues attached to `basis`
    kernel_basis: np.ndarray  # orthonormal columns spanning the kernel


def as_square(M, name: str = "matrix") -> np.ndarray:
    """Return `M` as a finite complex square array or raise."""
    arr = np.asarray(M)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotSquareError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return arr


def _hermitian_part_checked(M, tol: Tolerances) -> np.ndarray:
    arr = as_square(M)
    skew = np.linalg.norm(arr - arr.conj().T)
    if skew > tol.eig_tol * (1.0 + np.linalg.norm(arr)):
        raise NotHermitianError(f"matrix is not Hermitian (skew part {skew:.3e})")
    return 0.5 * (arr + arr.conj().T)


def hermitian_eig(M, tol: Tolerances = DEFAULT_TOL) -> HermitianEigen:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    H = _hermitian_part_checked(M, tol)
    vals, vecs = _jacobi.eigh_batch(H[None], tol.eig_tol, MAX_SWEEPS)
    return HermitianEigen(vals[0], vecs[0])


def eigvalsh_stack(stack: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Ascending eigenvalues of a stack (b, n, n) of Hermitian matrices.

    The stack is symmetrized and not validated; callers build it Hermitian by construction.
    """
    stack = np.asarray(stack, dtype=np.complex128)
    stack = 0.5 * (stack + np.conj(np.swapaxes(stack, -1, -2)))
    return _jacobi.eigvalsh_batch(np.ascontiguousarray(stack), tol.eig_tol, MAX_SWEEPS)


def eigh_stack(stack: np.ndarray, tol: Tolerances = DEFAULT_TOL):
    stack = np.asarray(stack, dtype=np.complex128)
    stack = 0.5 * (stack + np.conj(np.swapaxes(stack, -1, -2)))
    return _jacobi.eigh_batch(np.ascontiguousarray(stack), tol.eig_tol, MAX_SWEEPS)


def operator_norms(stack: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral norms of a stack (b, n, n), via the top eigenvalue of M^H M."""
    stack = np.asarray(stack, dtype=np.complex128)
    gram = np.conj(np.swapaxes(stack, -1, -2)) @ stack
    top = eigvalsh_stack(gram, tol)[:, -1]
    return np.sqrt(np.maximum(top, 0.0))


def operator_norm(M, tol: Tolerances = DEFAULT_TOL) -> float:
    """Spectral norm (largest singular value) of a square matrix."""
    arr = as_square(M)
    return float(operator_norms(arr[None], tol)[0])


def psd_functions(A, tol: Tolerances = DEFAULT_TOL) -> PSDFunctions:
    """Square root, pseudo-inverses and range projection of a PSD matrix.

    Eigenvalues at or below rank_tol * max eigenvalue count as zero.
    """
    vals, vecs = hermitian_eig(A, tol)
    top = max(float(vals[-1]), 0.0)
    cutoff = tol.rank_tol * top
    if vals[0] < -cutoff:
        raise NotPSDError(f"matrix has negative eigenvalue {vals[0]:.3e}")
    keep = vals > cutoff
    rank = int(np.count_nonzero(keep))
    Q = vecs[:, keep]
    K = vecs[:, ~keep]
    lam = vals[keep]
    root = np.sqrt(lam)
    sqrt = (Q * root) @ Q.conj().T
    sqrt_pinv = (Q / root) @ Q.conj().T
    pinv = (Q / lam) @ Q.conj().T
    proj = Q @ Q.conj().T
    return PSDFunctions(sqrt, sqrt_pinv, pinv, proj, rank, Q, lam, K)
