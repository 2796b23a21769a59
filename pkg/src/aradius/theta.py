"""Certified maximization of a periodic function of one angle on [0, pi).

Two kinds of a-priori bound are supported.

* Lipschitz: |g(a) - g(b)| <= L |a - b|, giving g <= (g_a + g_b)/2 + L w / 2 on a cell of width w.
* Envelope: g is a supremum of sinusoids c + r cos(theta - phi) whose amplitudes r are
  at most R. Each sinusoid has second derivative >= -R, so on a cell of width w
  g <= max(g_a, g_b) + R w^2 / 8. This is much sharper and covers every
  norm-of-rotated-pencil objective in this package, with R any upper bound on g.

The search evaluates a uniform grid, polishes the best cell with golden-section search, and
then bisects every cell whose upper bound still exceeds the best value found.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteError

PERIOD = math.pi
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ThetaOptimum:
    value: float
    theta_star: float
    certified_error: float
    evaluations: int = 0


def _evaluate(g: Callable, thetas: np.ndarray) -> np.ndarray:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", DeprecationWarning)
            out = np.asarray(g(thetas), dtype=float)
    except (TypeError, DeprecationWarning):
        out = None
    if out is None or out.shape != thetas.shape:
        out = np.array([float(g(float(t))) for t in thetas])
    if not np.all(np.isfinite(out)):
        raise NonFiniteError("objective returned a non-finite value")
    return out


def _golden_max(g, lo: float, hi: float, xtol: float):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = _evaluate(g, np.array([c, d]))
    evals = 2
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = _evaluate(g, np.array([c]))[0]
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = _evaluate(g, np.array([d]))[0]
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def sup_over_theta(
    g: Callable,
    bound: float,
    *,
    envelope: bool = False,
    tol: float = 1e-10,
    grid: int = 1024,
    max_evals: int = 200_000,
) -> ThetaOptimum:
    """Maximize a pi-periodic g over [0, pi) with a certified error bound.

    g should accept an array of angles and return an array of values; scalar functions
    are also accepted and evaluated point by point.
    `bound` is the Lipschitz constant of g, or with envelope=True the amplitude bound R.
    certified_error bounds sup g - value whenever the a-priori bound is valid.
    """
    if not (np.isfinite(bound) and bound >= 0):
        raise ValueError("bound must be a finite nonnegative number")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    width = PERIOD / grid
    left = np.arange(grid) * width
    vals = _evaluate(g, left)
    evals = grid
    k = int(np.argmax(vals))
    best, best_theta = float(vals[k]), float(left[k])

    if bound > 0:
        theta, val, used = _golden_max(g, best_theta - width, best_theta + width, 1e-8)
        evals += used
        if val > best:
            best, best_theta = float(val), float(theta)

    def upper(ga, gb, w):
        if envelope:
            return np.maximum(ga, gb) + bound * w * w / 8.0
        return 0.5 * (ga + gb) + 0.5 * bound * w

    a = left
    ga = vals
    gb = np.roll(vals, -1)
    w = np.full(grid, width)
    settled = -math.inf
    while a.size:
        ub = upper(ga, gb, w)
        slack = tol * (1.0 + abs(best))
        live = ub > best + slack
        if np.any(~live):
            settled = max(settled, float(ub[~live].max()))
        if not np.any(live) or evals + int(live.sum()) > max_evals:
            if np.any(live):
                settled = max(settled, float(ub[live].max()))
            break
        a, ga, gb, w = a[live], ga[live], gb[live], w[live] / 2.0
        mid = a + w
        gm = _evaluate(g, mid)
        evals += mid.size
        j = int(np.argmax(gm))
        if gm[j] > best:
            best, best_theta = float(gm[j]), float(mid[j])
        a = np.concatenate([a, mid])
        ga, gb = np.concatenate([ga, gm]), np.concatenate([gm, gb])
        w = np.concatenate([w, w])
    err = max(0.0, settled - best) if math.isfinite(settled) else 0.0
    return ThetaOptimum(best, float(best_theta % PERIOD), err, evals)
