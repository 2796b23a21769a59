"""Weights, membership, the weighted seminorm, compression and the distinguished adjoint.

A weight is a positive semidefinite matrix A with range projection P. An operator x is
admissible when it maps the kernel of A into itself in the adjoint sense, that is
P x (I - P) = 0. For such x the seminorm is the spectral norm of the compression
A^{1/2} x (A^{1/2})^+, and the adjoint used throughout is A^+ x^* A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonMemberError
from .linalg import DEFAULT_TOL, Tolerances, as_square, eigvalsh_stack, operator_norm, psd_functions

# relative threshold for P x (I - P) = 0, in units of (1 + ||x||)
MEMBERSHIP_TOL = 1e-10
# relative threshold used by the Hermitian / PSD predicates on A x
PREDICATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Weight:
    A: np.ndarray
    sqrt: np.ndarray
    sqrt_pinv: np.ndarray
    pinv: np.ndarray
    range_proj: np.ndarray
    rank: int
    basis: np.ndarray
    spectrum: np.ndarray
    kernel_basis: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def is_invertible(self) -> bool:
        return self.rank == self.n

    @property
    def is_diagonal(self) -> bool:
        off = self.A - np.diag(np.diag(self.A))
        return bool(np.linalg.norm(off) <= self.tol.rank_tol * (1.0 + np.linalg.norm(self.A)))

    def reduce(self, x: np.ndarray) -> np.ndarray:
        """Compression of x restricted to the range of A, as an r x r matrix.

        Same norm, spectrum (up to zeros) and numerical radius as the full compression.
        No membership check.
        """
        root = np.sqrt(self.spectrum)
        Q = self.basis
        return (root[:, None] * (Q.conj().T @ x @ Q)) / root[None, :]

    def reduce_stack(self, xs: np.ndarray) -> np.ndarray:
        root = np.sqrt(self.spectrum)
        Q = self.basis
        inner = Q.conj().T @ xs @ Q
        return inner * (root[:, None] / root[None, :])

    def check_dim(self, x, name: str = "x") -> np.ndarray:
        arr = as_square(x, name)
        if arr.shape[0] != self.n:
            raise DimensionMismatchError(f"{name} is {arr.shape[0]}x{arr.shape[0]}, weight is {self.n}x{self.n}")
        return arr


def make_weight(A, tol: Tolerances = DEFAULT_TOL) -> Weight:
    """Validate a PSD matrix and precompute its square root, pseudo-inverses and range data."""
    arr = as_square(A, "weight")
    f = psd_functions(arr, tol)
    herm = 0.5 * (arr + arr.conj().T)
    return Weight(herm, f.sqrt, f.sqrt_pinv, f.pinv, f.range_proj, f.rank, f.basis, f.spectrum, f.kernel_basis, tol)


def membership_defect(W: Weight, x) -> float:
    x = W.check_dim(x)
    P = W.range_proj
    return operator_norm(P @ x @ (np.eye(W.n) - P), W.tol)


def is_member(W: Weight, x) -> bool:
    """True when P x (I - P) vanishes up to 1e-10 * (1 + ||x||)."""
    x = W.check_dim(x)
    return membership_defect(W, x) <= MEMBERSHIP_TOL * (1.0 + operator_norm(x, W.tol))


def require_member(W: Weight, x, name: str = "x") -> np.ndarray:
    x = W.check_dim(x, name)
    defect = membership_defect(W, x)
    if defect > MEMBERSHIP_TOL * (1.0 + operator_norm(x, W.tol)):
        raise NonMemberError(f"{name} is not admissible for this weight (defect {defect:.3e})")
    return x


@dataclass(frozen=True)
class SeminormValue:
    finite: bool
    value: float  # math.inf when not finite
    membership_defect: float


def a_seminorm(W: Weight, x) -> SeminormValue:
    """Weighted seminorm; reported as infinite for non-members instead of raising."""
    x = W.check_dim(x)
    defect = membership_defect(W, x)
    if defect > MEMBERSHIP_TOL * (1.0 + operator_norm(x, W.tol)):
        return SeminormValue(False, math.inf, defect)
    return SeminormValue(True, operator_norm(W.reduce(x), W.tol) if W.rank else 0.0, defect)


def seminorm(W: Weight, x) -> float:
    """Finite seminorm of a member; raises NonMemberError otherwise."""
    x = require_member(W, x)
    if W.rank == 0:
        return 0.0
    return operator_norm(W.reduce(x), W.tol)


def compress(W: Weight, x) -> np.ndarray:
    """A^{1/2} x (A^{1/2})^+ for a member x."""
    x = require_member(W, x)
    return W.sqrt @ x @ W.sqrt_pinv


def a_adjoint(W: Weight, x) -> np.ndarray:
    """Distinguished adjoint A^+ x^* A. It satisfies A y = x^* A and lies in the range of A^+."""
    x = require_member(W, x)
    return W.pinv @ x.conj().T @ W.A


def _scaled_defect(Ax: np.ndarray, W: Weight) -> tuple[float, float]:
    scale = 1.0 + operator_norm(Ax, W.tol)
    return operator_norm(Ax - Ax.conj().T, W.tol), scale


def is_a_self_adjoint(W: Weight, x, tol: float = PREDICATE_TOL) -> bool:
    """A x is Hermitian, up to tol * (1 + ||A x||)."""
    x = W.check_dim(x)
    Ax = W.A @ x
    skew, scale = _scaled_defect(Ax, W)
    return skew <= tol * scale


def is_a_positive(W: Weight, x, tol: float = PREDICATE_TOL) -> bool:
    """A x is Hermitian positive semidefinite, up to tol * (1 + ||A x||)."""
    x = W.check_dim(x)
    Ax = W.A @ x
    skew, scale = _scaled_defect(Ax, W)
    if skew > tol * scale:
        return False
    low = eigvalsh_stack(Ax[None], W.tol)[0, 0]
    return bool(low >= -tol * scale)


def a_real_part(W: Weight, x) -> np.ndarray:
    """(x + x#)/2, which is always A-self-adjoint."""
    return 0.5 * (x + a_adjoint(W, x))
