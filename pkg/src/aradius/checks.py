"""Inequalities as machine-checkable value chains.

A chain is a list of values that should be nondecreasing, compared with the mixed
tolerance values[i] <= values[i+1] + tol * (1 + |values[i+1]|). Equalities are
written as cyclic chains such as [a, b, a].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ensembles import KINDS
from .errors import UnknownCheckerError
from .linalg import DEFAULT_TOL, Tolerances, operator_norm
from .radius import HALF, WeightPair, check_alt_formulas, pencil_norms, weighted_radius
from .spectral import a_spectral_radius, distance_to_scalars
from .theta import sup_over_theta
from .weighted import Weight, a_adjoint, is_a_self_adjoint, make_weight, require_member

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class ValueChain:
    checker_id: str
    labels: tuple
    values: tuple
    tol: float
    status: str
    slack: float | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def ratio(self, i: int) -> float | None:
        """values[i] / values[i+1], or None for a vanishing denominator."""
        num, den = self.values[i], self.values[i + 1]
        if abs(den) <= 1e-12:
            return None
        return num / den

    def to_dict(self) -> dict:
        return {
            "checker_id": self.checker_id,
            "labels": list(self.labels),
            "values": [float(v) for v in self.values],
            "tol": self.tol,
            "status": self.status,
            "slack": self.slack,
            "note": self.note,
        }


def make_chain(checker_id: str, labels, values, tol: float) -> ValueChain:
    values = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in values):
        return ValueChain(checker_id, tuple(labels), values, tol, FAIL, None, "non-finite value")
    ok = all(a <= b + tol * (1.0 + abs(b)) for a, b in zip(values, values[1:]))
    slack = min(b - a for a, b in zip(values, values[1:])) if len(values) > 1 else 0.0
    return ValueChain(checker_id, tuple(labels), values, tol, PASS if ok else FAIL, slack)


def skipped(checker_id: str, reason: str, tol: float) -> ValueChain:
    return ValueChain(checker_id, (), (), tol, SKIP, None, reason)


@dataclass
class Inputs:
    x: np.ndarray
    y: np.ndarray | None = None
    t: float = 0.5
    s: float = 0.5

    @property
    def pair(self) -> WeightPair:
        return WeightPair(self.t, self.s)


class Skip(Exception):
    pass


class _Ctx:
    """Evaluation helpers on the range-restricted compressions."""

    def __init__(self, W: Weight, inp: Inputs, tol: Tolerances):
        self.W, self.tol = W, tol
        self.t, self.s = inp.t, inp.s
        self.x, self.y = inp.x, inp.y
        self._xs = None

    def norm(self, m) -> float:
        return operator_norm(self.W.reduce(m), self.W.tol) if self.W.rank else 0.0

    def v(self, m, p: WeightPair = HALF) -> float:
        return weighted_radius(self.W, m, p).value

    @property
    def xs(self):
        if self._xs is None:
            self._xs = a_adjoint(self.W, self.x)
        return self._xs

    @property
    def M(self):
        return self.x @ self.xs + self.xs @ self.x

    def d(self, m) -> float:
        return distance_to_scalars(self.W, m).value

    def hyp_tol(self) -> float:
        return 1e-3 * self.tol.chain_tol

    def square_zero(self, m) -> bool:
        A = self.W.A
        scale = 1.0 + operator_norm(A) * operator_norm(m) ** 2
        return operator_norm(A @ m @ m) <= self.hyp_tol() * scale

    def kills(self, m) -> bool:
        A = self.W.A
        return operator_norm(A @ m) <= self.tol.chain_tol * (1.0 + operator_norm(A) * operator_norm(m))

    def sup_gap(self, P0, P1, Q0, Q1, bound: float) -> float:
        """sup over theta of | ||e^{it}P0 + e^{-it}P1||^2 - ||e^{it}Q0 + e^{-it}Q1||^2 |."""
        if bound == 0.0:
            return 0.0

        def g(th):
            return np.abs(pencil_norms(P0, P1, th) ** 2 - pencil_norms(Q0, Q1, th) ** 2)

        return sup_over_theta(g, bound, tol=self.tol.theta_tol, max_evals=16384).value


# individual checkers return (labels, values) or raise Skip


def _eq_1_2(c: _Ctx):
    n = c.norm(c.x)
    return ("half_norm", "v_a", "norm"), (n / 2, c.v(c.x), n)


def _thm_2_6(c: _Ctx):
    n = c.norm(c.x)
    return ("max(t,s)*norm", "v_ts", "(t+s)*norm"), (max(c.t, c.s) * n, c.v(c.x, WeightPair(c.t, c.s)), (c.t + c.s) * n)


def _thm_2_9(c: _Ctx):
    t, s = c.t, c.s
    n = c.norm(c.x)
    vts = c.v(c.x, WeightPair(t, s))
    mid = (t * t + s * s) * n * n + 2 * t * s * c.v(c.x @ c.x)
    return ("v_ts^2", "(t^2+s^2)norm^2+2ts*v_a(x^2)", "(t+s)^2*norm^2"), (vts ** 2, mid, (t + s) ** 2 * n * n)


def _cor_2_10(c: _Ctx):
    t, s = c.t, c.s
    if t * s == 0:
        raise Skip("needs t*s > 0")
    n = c.norm(c.x)
    vts = c.v(c.x, WeightPair(t, s))
    # slack in the hypothesis is scaled so the implied gap in ||x^2|| stays below chain_tol
    if vts ** 2 < (t + s) ** 2 * n * n - t * s * c.tol.chain_tol * (1 + n * n):
        raise Skip("v_ts(x) < (t+s)||x||")
    n2 = c.norm(c.x @ c.x)
    return ("norm(x^2)", "norm^2", "norm(x^2)"), (n2, n * n, n2)


def _thm_2_11(c: _Ctx):
    t, s = c.t, c.s
    xr, xsr = c.W.reduce(c.x), c.W.reduce(c.xs)
    vts = c.v(c.x, WeightPair(t, s))
    amp = (t + s) * operator_norm(xr)
    gap = c.sup_gap(t * xr, s * xsr, -1j * t * xr, 1j * s * xsr, 4 * amp * amp)
    left = t * s * c.norm(c.M) + 0.5 * gap
    return ("ts*norm(M)+sup|Re^2-Im^2|/2", "v_ts^2"), (left, vts ** 2)


def _thm_3_1_rhs(c: _Ctx):
    x2 = c.x @ c.x
    M = c.M
    return 0.25 * c.v(x2) ** 2 + 0.125 * c.v(x2 @ M + M @ x2) + c.norm(M @ M) / 16


def _thm_3_1(c: _Ctx):
    return ("v_a^4", "bound"), (c.v(c.x) ** 4, _thm_3_1_rhs(c))


def _rem_3_2(c: _Ctx):
    x, xs, M = c.x, c.xs, c.M
    x2 = x @ x
    n = c.norm(x)
    nx2, nM = c.norm(x2), c.norm(M)
    nxxs, nxsx = c.norm(x @ xs), c.norm(xs @ x)
    vals = (
        c.v(x) ** 4,
        _thm_3_1_rhs(c),
        0.25 * nx2 ** 2 + 0.125 * c.norm(x2 @ M + M @ x2) + nM ** 2 / 16,
        0.25 * n ** 4 + 0.125 * (nx2 * nM + nM * nx2) + (nxxs + nxsx) ** 2 / 16,
        0.25 * n ** 4 + 0.125 * (n * n * (nxxs + nxsx) + (nxxs + nxsx) * n * n) + (2 * n * n) ** 2 / 16,
        n ** 4,
    )
    return ("v_a^4", "bound_1", "bound_2", "bound_3", "bound_4", "norm^4"), vals


def _thm_3_3(c: _Ctx):
    return ("v_a^2", "v_a(x^2)/2+norm(M)/4"), (c.v(c.x) ** 2, 0.5 * c.v(c.x @ c.x) + 0.25 * c.norm(c.M))


def _power(c: _Ctx):
    return ("v_a(x^2)", "v_a^2"), (c.v(c.x @ c.x), c.v(c.x) ** 2)


def _cor_3_5(c: _Ctx):
    nM = c.norm(c.M)
    return ("norm(M)/4", "v_a^2", "norm(M)/2"), (nM / 4, c.v(c.x) ** 2, nM / 2)


def _rem_3_7(c: _Ctx):
    xr, xsr = c.W.reduce(c.x), c.W.reduce(c.xs)
    n = operator_norm(xr)
    amp = 2 * n
    gap = c.sup_gap(xr, xsr, xr, -xsr, 4 * amp * amp)
    return ("norm^2/4", "norm(M)/4+sup|..|/8", "v_a^2"), (n * n / 4, c.norm(c.M) / 4 + gap / 8, c.v(c.x) ** 2)


def _cor_3_8(c: _Ctx):
    if not c.square_zero(c.x):
        raise Skip("A x^2 != 0")
    v2, q = c.v(c.x) ** 2, c.norm(c.M) / 4
    return ("v_a^2", "norm(M)/4", "v_a^2"), (v2, q, v2)


def _rem_3_9(c: _Ctx):
    if c.kills(c.x):
        raise Skip("A x = 0")
    if not c.square_zero(c.x):
        raise Skip("A x^2 != 0")
    h = c.norm(c.x) / 2
    return ("half_norm", "v_a", "half_norm"), (h, c.v(c.x), h)


def _thm_3_10(c: _Ctx):
    x, xs = c.x, c.xs
    low = 0.5 * c.norm(x) + 0.25 * abs(c.norm(x + 1j * xs) - c.norm(x - 1j * xs))
    return ("half_norm+|..|/4", "v_a"), (low, c.v(x))


def _thm_3_11(c: _Ctx):
    v, d = c.v(c.x), c.d(c.x)
    return ("norm(M)/4", "(v_a^2+d_a^2)/2", "v_a^2"), (c.norm(c.M) / 4, 0.5 * (v * v + d * d), v * v)


def _thm_3_12(c: _Ctx):
    x, y = c.x, c.y
    xy = x @ y
    vx, vy = c.v(x), c.v(y)
    dx, dy = c.d(x), c.d(y)
    k1 = c.norm(x) * (vy + dy)
    k2 = c.norm(y) * (vx + dx)
    k3 = (vx + dx) * (vy + dy)
    return ("v_a(xy)", "norm(xy)", "min(K1,K2,K3)", "4 v_a(x) v_a(y)"), (c.v(xy), c.norm(xy), min(k1, k2, k3), 4 * vx * vy)


def _self_adjoint_pair(c: _Ctx):
    if not (is_a_self_adjoint(c.W, c.x) and is_a_self_adjoint(c.W, c.y)):
        raise Skip("inputs are not A-self-adjoint")
    nx, ny = c.norm(c.x), c.norm(c.y)
    if ny > nx:
        raise Skip("||y|| > ||x||")
    return nx


def _thm_4_3(c: _Ctx):
    nx = _self_adjoint_pair(c)
    if nx > 1:
        raise Skip("||x|| > 1")
    return ("norm(x+y)", "1+2 norm(xy)"), (c.norm(c.x + c.y), 1 + 2 * c.norm(c.x @ c.y))


def _cor_4_4(c: _Ctx):
    nx = _self_adjoint_pair(c)
    if nx == 0:
        raise Skip("||x|| = 0")
    return ("norm(x+y)", "norm(x)+2 norm(xy)/norm(x)"), (c.norm(c.x + c.y), nx + 2 * c.norm(c.x @ c.y) / nx)


def _diagonal_inputs(c: _Ctx, *ms):
    if not c.W.is_diagonal:
        raise Skip("weight is not diagonal")
    for m in ms:
        if np.linalg.norm(m - np.diag(np.diag(m))) > 1e-12 * (1 + np.linalg.norm(m)):
            raise Skip("input is not diagonal")


def _thm_4_6(c: _Ctx):
    _diagonal_inputs(c, c.x, c.y)
    nx = _self_adjoint_pair(c)
    if nx == 0:
        raise Skip("||x|| = 0")
    return ("norm(x+y)", "norm(x)+norm(xy)/norm(x)"), (c.norm(c.x + c.y), nx + c.norm(c.x @ c.y) / nx)


def _lem_4_1(c: _Ctx):
    _diagonal_inputs(c, c.x)
    n = c.norm(c.x)
    half = make_weight(c.W.sqrt, c.W.tol)
    n_half = operator_norm(half.reduce(c.x)) if half.rank else 0.0
    r = a_spectral_radius(c.W, c.x).r_eig
    return ("norm", "v_a", "r_a", "norm_sqrtA", "norm"), (n, c.v(c.x), r, n_half, n)


def _lem_4_2(c: _Ctx):
    a = a_spectral_radius(c.W, c.x @ c.y).r_eig
    b = a_spectral_radius(c.W, c.y @ c.x).r_eig
    return ("r_a(xy)", "r_a(yx)", "r_a(xy)"), (a, b, a)


def _thm_2_5(c: _Ctx):
    p = WeightPair(c.t, c.s)
    v = c.v(c.x, p)
    f1, f2 = check_alt_formulas(c.W, c.x, p)
    return ("v_ts", "rotated_parts", "v_ts", "two_angle", "v_ts"), (v, f1, v, f2, v)


def _thm_2_8(c: _Ctx):
    t, s = c.t, c.s
    m = max(t, s) * c.norm(c.x)
    vts = c.v(c.x, WeightPair(t, s))
    xr, xsr = c.W.reduce(c.x), c.W.reduce(c.xs)
    prof = pencil_norms(t * xr, s * xsr, np.arange(64) * (math.pi / 64))
    lo, hi = float(prof.min()), float(prof.max())
    if vts - m <= 0.25 * c.tol.chain_tol * (1 + m):
        # radius at its lower bound: the whole profile must sit at that value
        return ("max(t,s)*norm", "min profile", "max profile", "max(t,s)*norm"), (m, lo, hi, m)
    if hi - lo <= c.hyp_tol() * (1 + m) and abs(hi - m) <= c.hyp_tol() * (1 + m):
        # profile flat at the lower bound: the radius must equal it
        return ("v_ts", "max(t,s)*norm"), (vts, m)
    raise Skip("neither the profile nor the radius sits at max(t,s)||x||")


@dataclass(frozen=True)
class Checker:
    id: str
    fn: Callable = field(repr=False)
    arity: int = 1
    kinds: tuple = KINDS
    uses_distance: bool = False
    tol_factor: float = 1.0
    conditional: bool = False


_SA = ("a-self-adjoint", "a-positive")

CHECKERS = {
    c.id: c
    for c in (
        Checker("eq-1-2", _eq_1_2),
        Checker("thm-2-5", _thm_2_5, tol_factor=10.0),
        Checker("thm-2-6", _thm_2_6),
        Checker("thm-2-8", _thm_2_8, conditional=True),
        Checker("thm-2-9", _thm_2_9),
        Checker("cor-2-10", _cor_2_10, conditional=True),
        Checker("thm-2-11", _thm_2_11),
        Checker("thm-3-1", _thm_3_1),
        Checker("rem-3-2", _rem_3_2),
        Checker("thm-3-3", _thm_3_3),
        Checker("power", _power),
        Checker("cor-3-5", _cor_3_5),
        Checker("rem-3-7", _rem_3_7),
        Checker("cor-3-8", _cor_3_8, conditional=True),
        Checker("rem-3-9", _rem_3_9, conditional=True),
        Checker("thm-3-10", _thm_3_10),
        Checker("thm-3-11", _thm_3_11, uses_distance=True),
        Checker("thm-3-12", _thm_3_12, arity=2, uses_distance=True),
        Checker("thm-4-3", _thm_4_3, arity=2, kinds=_SA, conditional=True),
        Checker("cor-4-4", _cor_4_4, arity=2, kinds=_SA, conditional=True),
        Checker("thm-4-6", _thm_4_6, arity=2, kinds=("commutative-diagonal",), conditional=True),
        Checker("lem-4-1", _lem_4_1, kinds=("commutative-diagonal",), conditional=True),
        Checker("lem-4-2", _lem_4_2, arity=2),
    )
}


def get_checker(checker_id: str) -> Checker:
    try:
        return CHECKERS[checker_id]
    except KeyError:
        raise UnknownCheckerError(f"unknown checker {checker_id!r}") from None


def check(checker_id: str, W: Weight, inputs: Inputs, tol: Tolerances = DEFAULT_TOL) -> ValueChain:
    """Evaluate one checker; conditional checkers return a skip chain when their hypothesis fails."""
    chk = get_checker(checker_id)
    inputs.x = require_member(W, inputs.x, "x")
    if chk.arity == 2:
        if inputs.y is None:
            raise ValueError(f"{checker_id} needs two inputs")
        inputs.y = require_member(W, inputs.y, "y")
    WeightPair(inputs.t, inputs.s)
    ctol = tol.chain_tol * chk.tol_factor
    try:
        labels, values = chk.fn(_Ctx(W, inputs, tol))
    except Skip as why:
        return skipped(checker_id, str(why), ctol)
    return make_chain(checker_id, labels, values, ctol)
