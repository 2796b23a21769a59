import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aradius.errors import NonFiniteError
from aradius.theta import sup_over_theta


def test_constant():
    res = sup_over_theta(lambda t: 3.0, 0.0)
    assert res.value == 3.0 and res.certified_error == 0.0


def test_abs_cos_lipschitz_and_envelope():
    for envelope in (False, True):
        res = sup_over_theta(lambda t: np.abs(np.cos(t)), 1.0, envelope=envelope)
        assert res.value == pytest.approx(1.0, abs=1e-12)
        assert min(res.theta_star, math.pi - res.theta_star) <= 1e-5
        assert res.certified_error <= 1e-9


def test_interior_peak_is_polished():
    res = sup_over_theta(lambda t: np.cos(2 * (t - 1.2345)), 4.0, envelope=True)
    assert res.value == pytest.approx(1.0, abs=1e-13)
    assert res.theta_star == pytest.approx(1.2345, abs=1e-6)


def test_rejects_bad_inputs():
    with pytest.raises(NonFiniteError):
        sup_over_theta(lambda t: np.full_like(t, np.nan), 1.0)
    with pytest.raises(ValueError):
        sup_over_theta(lambda t: np.zeros_like(t), -1.0)


def _sinusoid_max(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 6))
    c = rng.normal(size=k)
    r = np.abs(rng.normal(size=k))
    p = rng.uniform(0, 2 * np.pi, k)

    def g(t):
        t = np.atleast_1d(t)
        return np.max(c[:, None] + r[:, None] * np.cos(2 * t[None, :] - p[:, None]), axis=0)

    return g, float(r.max())


@given(st.integers(0, 2**31 - 1))
def test_certificate_covers_dense_grid(seed):
    g, amp = _sinusoid_max(seed)
    res = sup_over_theta(g, 4 * amp, envelope=True)
    dense = g(np.linspace(0, np.pi, 200_001)).max()
    assert res.value <= dense + 1e-12 or res.value <= g(np.array([res.theta_star]))[0] + 1e-15
    assert dense <= res.value + res.certified_error + 1e-12
    assert res.certified_error <= 1e-10 * (1 + abs(res.value)) + 1e-15


@given(st.integers(0, 2**31 - 1))
def test_lipschitz_mode_with_budget_still_certifies(seed):
    g, amp = _sinusoid_max(seed)
    res = sup_over_theta(g, 2 * amp, max_evals=5000)
    dense = g(np.linspace(0, np.pi, 200_001)).max()
    assert dense <= res.value + res.certified_error + 1e-12
    assert res.value <= dense + 1e-6


def test_scalar_callable_is_accepted():
    res = sup_over_theta(lambda t: math.sin(t) ** 2, 1.0, envelope=True, grid=64)
    assert res.value == pytest.approx(1.0, abs=1e-12)


def test_hermitian_pencil_matches_dense_grid():
    rng = np.random.default_rng(17)
    for _ in range(3):
        B, C = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2))
        B, C = B + B.conj().T, C + C.conj().T

        def g(t):
            t = np.atleast_1d(t)
            return np.linalg.norm(np.cos(t)[:, None, None] * B + np.sin(t)[:, None, None] * C, 2, axis=(1, 2))

        res = sup_over_theta(g, np.linalg.norm(B, 2) + np.linalg.norm(C, 2), envelope=True)
        dense = max(g(chunk).max() for chunk in np.array_split(np.linspace(0, np.pi, 10**6, endpoint=False), 20))
        assert abs(res.value - dense) <= 1e-8
