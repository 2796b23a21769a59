"""Weighted numerical radii, real/imaginary parts and the numerical range cloud."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .linalg import DEFAULT_TOL, Tolerances, as_square, eigh_stack, eigvalsh_stack, operator_norm, operator_norms
from .theta import ThetaOptimum, sup_over_theta
from .weighted import Weight, a_adjoint, require_member
from .ensembles import rng_for


@dataclass(frozen=True)
class WeightPair:
    """Coefficients (t, s) mixing an operator with its adjoint."""

    t: float
    s: float

    def __post_init__(self):
        for v in (self.t, self.s):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError("t and s must be finite and nonnegative")
        if self.t == 0 and self.s == 0:
            raise ValueError("t and s cannot both be zero")


HALF = WeightPair(0.5, 0.5)


def weighted_parts(W: Weight, x, p: WeightPair = HALF) -> tuple[np.ndarray, np.ndarray]:
    """Generalized real and imaginary parts t x + s x# and -i t x + i s x#."""
    x = require_member(W, x)
    xs = a_adjoint(W, x)
    return p.t * x + p.s * xs, -1j * p.t * x + 1j * p.s * xs


def pencil_norms(P0: np.ndarray, P1: np.ndarray, thetas, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral norms of e^{i theta} P0 + e^{-i theta} P1 for each theta."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    e = np.exp(1j * thetas)[:, None, None]
    return operator_norms(e * P0 + np.conj(e) * P1, tol)


def reduced_pair(W: Weight, x) -> tuple[np.ndarray, np.ndarray]:
    """Range-restricted compressions of x and of its adjoint."""
    x = require_member(W, x)
    return W.reduce(x), W.reduce(a_adjoint(W, x))


def weighted_radius(W: Weight, x, p: WeightPair = HALF) -> ThetaOptimum:
    """sup over theta of || t e^{i theta} x + s e^{-i theta} x# ||_A."""
    xr, xsr = reduced_pair(W, x)
    if W.rank == 0:
        return ThetaOptimum(0.0, 0.0, 0.0, 0)
    P0, P1 = p.t * xr, p.s * xsr
    amp = operator_norm(P0, W.tol) + operator_norm(P1, W.tol)
    if amp == 0.0:
        return ThetaOptimum(0.0, 0.0, 0.0, 0)
    # the objective repeats with period pi, and is a sup of |sinusoids| of amplitude <= amp
    return sup_over_theta(lambda th: pencil_norms(P0, P1, th, W.tol), amp, envelope=True, tol=W.tol.theta_tol)


def a_numerical_radius(W: Weight, x) -> ThetaOptimum:
    return weighted_radius(W, x, HALF)


def classical_numerical_radius(M, tol: Tolerances = DEFAULT_TOL) -> float:
    """max |<M u, u>| over unit u, as the sup over angles of the top eigenvalue of Re(e^{i theta} M).

    Uses only Hermitian eigenvalues of M itself. The angle is halved so the search runs
    over a pi-periodic function.
    """
    M = as_square(M)
    Mh = M.conj().T
    amp = float(np.linalg.norm(M))

    def top(phi):
        e = np.exp(2j * np.atleast_1d(phi))[:, None, None]
        return eigvalsh_stack(0.5 * (e * M + np.conj(e) * Mh), tol)[:, -1]

    if amp == 0.0:
        return 0.0
    # top(phi) = sup of amplitude <= amp sinusoids in 2 phi, hence curvature <= 4 amp
    return sup_over_theta(top, 4.0 * amp, envelope=True, tol=tol.theta_tol).value


def check_alt_formulas(W: Weight, x, p: WeightPair = HALF, grid: int = 256) -> tuple[float, float]:
    """Two alternative expressions of the weighted radius.

    first: sup over psi of || cos(psi) R + sin(psi) I ||_A with (R, I) the generalized parts.
    second: half the sup over (theta, phi) of || R_(t,s)((e^{i theta} - i e^{i phi}) x) ||_A,
    found on a grid x grid mesh and refined by Nelder-Mead.
    """
    R, I = weighted_parts(W, x, p)
    Rr, Ir = W.reduce(R), W.reduce(I)
    amp = operator_norm(Rr, W.tol) + operator_norm(Ir, W.tol)
    if amp == 0.0:
        return 0.0, 0.0

    def mix(psi):
        psi = np.atleast_1d(psi)
        return operator_norms(np.cos(psi)[:, None, None] * Rr + np.sin(psi)[:, None, None] * Ir, W.tol)

    first = sup_over_theta(mix, amp, envelope=True, tol=W.tol.theta_tol).value

    xr, xsr = W.reduce(x), W.reduce(a_adjoint(W, x))

    def half_norm(c: np.ndarray) -> np.ndarray:
        c = c[:, None, None]
        return 0.5 * operator_norms(p.t * c * xr + p.s * np.conj(c) * xsr, W.tol)

    ang = np.arange(grid) * (2 * math.pi / grid)
    th, ph = np.meshgrid(ang, ang, indexing="ij")
    coef = (np.exp(1j * th) - 1j * np.exp(1j * ph)).ravel()
    vals = half_norm(coef)
    k = int(np.argmax(vals))
    start = np.array([th.ravel()[k], ph.ravel()[k]])

    def neg(z):
        return -half_norm(np.array([np.exp(1j * z[0]) - 1j * np.exp(1j * z[1])]))[0]

    res = minimize(neg, start, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000,
                            "initial_simplex": [start, start + [2e-2, 0], start + [0, 2e-2]]})
    second = max(float(vals[k]), float(-res.fun))
    return first, second


@dataclass(frozen=True)
class RangeCloud:
    interior: np.ndarray  # complex points <x eta, eta>_A, ||eta||_A = 1
    boundary: np.ndarray  # support points, one per direction
    radius_estimate: float


def numerical_range_cloud(W: Weight, x, n_random: int = 2000, n_boundary: int = 360, seed: int = 0) -> RangeCloud:
    """Random and support-line points of the weighted numerical range."""
    xr = W.reduce(require_member(W, x))
    r = W.rank
    if r == 0:
        return RangeCloud(np.zeros(0, complex), np.zeros(0, complex), 0.0)
    rng = rng_for(seed, 0)
    eta = rng.standard_normal((n_random, r)) + 1j * rng.standard_normal((n_random, r))
    eta /= np.linalg.norm(eta, axis=1, keepdims=True)
    interior = np.einsum("ki,ij,kj->k", eta.conj(), xr, eta)
    theta = np.arange(n_boundary) * (2 * math.pi / max(n_boundary, 1))
    e = np.exp(1j * theta)[:, None, None]
    if n_boundary:
        _, vecs = eigh_stack(0.5 * (e * xr + np.conj(e) * xr.conj().T), W.tol)
        u = vecs[:, :, -1]
        boundary = np.einsum("ki,ij,kj->k", u.conj(), xr, u)
    else:
        boundary = np.zeros(0, complex)
    pts = np.concatenate([interior, boundary])
    return RangeCloud(interior, boundary, float(np.abs(pts).max()) if pts.size else 0.0)


def write_range_csv(cloud: RangeCloud, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im", "kind"])
        for kind, pts in (("interior", cloud.interior), ("boundary", cloud.boundary)):
            for z in pts:
                w.writerow([repr(float(z.real)), repr(float(z.imag)), kind])
