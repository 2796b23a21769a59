import numpy as np
import pytest
from hypothesis import given

import oracles
from aradius.ensembles import sample
from aradius.errors import NonMemberError
from aradius.radius import a_numerical_radius
from aradius.spectral import (
    SUBALGEBRAS,
    a_spectral_radius,
    character_values,
    distance_to_scalars,
    enclosing_circle,
    numerical_index,
)
from aradius.weighted import make_weight, seminorm
from strategies import ensemble_case

I2 = make_weight(np.eye(2))
J = np.array([[0, 1], [0, 0]], dtype=complex)
A1 = make_weight(np.array([[2, 1j], [-1j, 1]]))
X1 = np.array([[1, 2], [0.5j, 0]])
A3 = make_weight(np.diag([1.0, 4.0, 0.0]))
X3 = np.array([[1, 1j, 0], [2, 3, 0], [1, 1, 5]])


def test_spectral_radius_examples():
    r = a_spectral_radius(I2, J)
    assert r.r_eig == 0.0 and r.r_limit <= 0.05
    r = a_spectral_radius(I2, np.diag([2.0, -3.0]))
    assert r.r_eig == pytest.approx(3.0) and r.r_limit == pytest.approx(3.0, rel=1e-12)
    # kernel block of the weight is invisible
    assert a_spectral_radius(A3, X3).r_eig == pytest.approx(3.365136932660552, rel=1e-12)
    assert a_spectral_radius(A1, X1).r_eig == pytest.approx(1.4425737404460597, rel=1e-12)


def test_spectral_radius_non_member():
    with pytest.raises(NonMemberError):
        a_spectral_radius(make_weight(np.diag([1.0, 0.0])), J)


@given(ensemble_case())
def test_spectral_radius_properties(case):
    cfg, W, x = case
    r = a_spectral_radius(W, x)
    # eigenvalues of nilpotent blocks are only accurate to about sqrt(eps)
    n = seminorm(W, x)
    assert abs(r.r_eig - oracles.spectral_radius(W.A, x)) <= 1e-9 * n + 1e-7 * (1 + n)
    assert r.r_eig <= a_numerical_radius(W, x).value + 1e-9
    y = sample(cfg, W, 2)
    assert a_spectral_radius(W, x @ y).r_eig == pytest.approx(a_spectral_radius(W, y @ x).r_eig, rel=1e-6, abs=1e-8)


def test_enclosing_circle():
    c, r = enclosing_circle([0, 2, 1 + 1j, 1 + 0.2j])
    assert c == pytest.approx(1.0) and r == pytest.approx(1.0)
    c, r = enclosing_circle([0, 1, 1j])
    assert c == pytest.approx(0.5 + 0.5j) and r == pytest.approx(np.sqrt(0.5))
    c, r = enclosing_circle([3 + 1j])
    assert c == 3 + 1j and r == 0.0
    pts = np.exp(2j * np.pi * np.arange(7) / 7) * 2 + (1 - 1j)
    c, r = enclosing_circle(pts)
    assert c == pytest.approx(1 - 1j, abs=1e-12) and r == pytest.approx(2.0, abs=1e-12)


def _ellipse_distance(M):
    lam = np.linalg.eigvals(M)
    fro2 = np.sum(np.abs(M) ** 2)
    return 0.5 * np.sqrt(abs(lam[0] - lam[1]) ** 2 + fro2 - abs(lam[0]) ** 2 - abs(lam[1]) ** 2), np.trace(M) / 2


def test_distance_examples():
    d = distance_to_scalars(I2, J)
    assert d.value == pytest.approx(0.5, abs=1e-12) and abs(d.zeta_star) <= 1e-9
    d = distance_to_scalars(I2, np.diag([1.0, 3.0]))
    assert d.value == pytest.approx(1.0, abs=1e-12) and d.zeta_star == pytest.approx(2.0, abs=1e-9)
    d = distance_to_scalars(I2, 5 * np.eye(2))
    assert d.value == pytest.approx(0.0, abs=1e-12)


def test_distance_frozen():
    # frozen from the ellipse semi-axis formula for the 2x2 reduced blocks
    d = distance_to_scalars(A1, X1)
    assert d.value == pytest.approx(2.1686143509628906, rel=1e-11)
    assert d.zeta_star == pytest.approx(0.5, abs=1e-8)
    d = distance_to_scalars(A3, X3)
    assert d.value == pytest.approx(2.383387083280828, rel=1e-11)
    assert d.zeta_star == pytest.approx(2.0, abs=1e-8)


@given(ensemble_case(dims=(2, 3)))
def test_distance_properties(case):
    cfg, W, x = case
    d = distance_to_scalars(W, x)
    v = a_numerical_radius(W, x).value
    assert d.lower_bound <= d.value + 1e-15
    assert d.value - d.lower_bound <= 1e-9 * (1 + d.value)
    assert d.value <= v + 1e-9 * (1 + v)
    zeta = 0.7 - 1.3j
    shifted = distance_to_scalars(W, x + zeta * W.range_proj)
    assert shifted.value == pytest.approx(d.value, rel=1e-8, abs=1e-10)
    assert abs(shifted.zeta_star - d.zeta_star - zeta) <= 1e-5 * (1 + abs(zeta))
    if W.rank == 2:
        ref, centre = _ellipse_distance(W.reduce(x))
        assert d.value == pytest.approx(ref, rel=1e-9, abs=1e-11)
        if ref > 1e-6:
            assert abs(d.zeta_star - centre) <= 1e-5 * (1 + abs(centre))
    else:
        # no scalar beats the reported value
        for z in (0, d.zeta_star + 1e-3, d.zeta_star - 1e-3j):
            assert a_numerical_radius(W, x - z * W.range_proj).value >= d.value - 1e-9 * (1 + d.value)


def test_distance_matches_grid_oracle_on_2x2():
    M = oracles.compress(A1.A, X1)
    grid_val, _ = oracles.distance_grid_2x2(M, center=0.5 + 0j, half_width=0.05)
    d = distance_to_scalars(A1, X1).value
    assert d <= grid_val + 1e-9
    assert grid_val - d <= 1e-3


def test_index_identity_is_half():
    est = numerical_index(I2)
    assert est.verdict == "half"
    assert est.upper == pytest.approx(0.5, abs=1e-8)
    assert est.witness is not None


def test_index_singular_full_algebra_is_half():
    est = numerical_index(make_weight(np.diag([1.0, 2.0, 0.0])))
    assert est.verdict == "half" and est.upper == pytest.approx(0.5, abs=1e-8)


def test_index_lower_triangular_rank_one_weight():
    est = numerical_index(make_weight(np.diag([1.0, 0.0])), "lower-triangular", budget=50)
    assert est.verdict == "one"
    assert all(r == pytest.approx(1.0, abs=1e-9) for r in est.ratios)


def test_index_diagonal_subalgebra():
    est = numerical_index(make_weight(np.eye(3)), "diagonal", budget=50)
    assert est.verdict == "one"
    assert est.lower == pytest.approx(1.0, abs=1e-9)
    assert SUBALGEBRAS["diagonal"].commutative


def test_index_bounds_are_ordered():
    est = numerical_index(make_weight(np.diag([1.0, 2.0])), "lower-triangular", budget=40)
    assert est.verdict in ("one", "half", "unresolved")
    assert 0.5 - 1e-9 <= est.upper <= 1.0 + 1e-9
    assert est.lower <= est.upper + 1e-12


def test_unknown_subalgebra():
    with pytest.raises(KeyError):
        numerical_index(I2, "upper-hessenberg")


def test_character_values():
    W = make_weight(np.diag([1.0, 2.0, 0.0]))
    x = np.diag([3.0, -1j, 7.0])
    vals = character_values(W, x)
    assert sorted(vals, key=lambda z: z.real) == pytest.approx([-1j, 3.0])
    assert max(abs(v) for v in vals) <= seminorm(W, x) + 1e-12
