from __future__ import annotations

import itertools

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_vec
from zdmult.algebra import PROVEN_FREE, WITNESS, check_associative, left_rep, multiply, right_rep
from zdmult.catalog import (
    MonicPoly,
    catalog_pairs,
    from_polynomial,
    irreducibility,
    poly_divmod_monic,
    poly_mul,
    quadratic,
    quadratic_catalog,
    quaternion,
    scaled_z,
    shipped_catalog,
)
from zdmult.linalg import RatMatrix


def test_gaussian_left_rep():
    g = quadratic(0, -1)
    assert left_rep(g, (0, 1)) == RatMatrix([[0, -1], [1, 0]])
    assert g.zero_divisor_status.kind == PROVEN_FREE


def test_golden_square():
    assert multiply(quadratic(1, 1), (0, 1), (0, 1)) == (1, 1)


def test_reducible_quadratic_has_witness():
    m = from_polynomial([-4, 0, 1])
    assert m.zero_divisor_status.kind == WITNESS


@given(st.integers(0, 1), st.integers(-8, 8), st.integers(-9, 9), st.integers(-9, 9))
def test_quadratic_left_rep_formula(b, c, x1, x2):
    m = quadratic(b, c)
    assert left_rep(m, (x1, x2)) == RatMatrix([[x1, c * x2], [x2, x1 + b * x2]])
    # norm form
    assert left_rep(m, (x1, x2)).det() == x1 * x1 + b * x1 * x2 - c * x2 * x2


def test_quaternion_relations():
    H = quaternion()
    one, i, j, k = (H.basis(t) for t in range(4))
    neg = lambda v: tuple(-t for t in v)  # noqa: E731
    assert multiply(H, i, j) == k and multiply(H, j, k) == i and multiply(H, k, i) == j
    assert multiply(H, j, i) == neg(k)
    for u in (i, j, k):
        assert multiply(H, u, u) == neg(one)
    x = (3, -1, 4, 1)
    assert left_rep(H, x).column(0) == x
    assert check_associative(H)


def test_quaternion_left_right_commute(rng):
    H = quaternion()
    for _ in range(100):
        x, y = rand_vec(rng, 4), rand_vec(rng, 4)
        assert left_rep(H, x) @ right_rep(H, y) == right_rep(H, y) @ left_rep(H, x)


def test_scaled_z():
    assert multiply(scaled_z(1), (6,), (7,)) == (42,)
    assert multiply(scaled_z(2), (3,), (5,)) == (30,)
    assert multiply(scaled_z(-3), (2,), (2,)) == (-12,)
    assert scaled_z(5).zero_divisor_status.kind == PROVEN_FREE
    with pytest.raises(ValueError):
        scaled_z(0)


def test_quadratic_catalog():
    g, r2 = quadratic_catalog([-1, 2], b_values=(0,))
    assert g == quadratic(0, -1) and r2 == quadratic(0, 2)
    with pytest.raises(ValueError, match="perfect square"):
        quadratic_catalog([4])
    assert len(catalog_pairs()) == 18


def test_catalog_rings_unital_and_associative():
    for name, m in shipped_catalog().items():
        assert check_associative(m), name
        if not name.startswith("scaled"):
            assert left_rep(m, m.basis(0)) == RatMatrix.identity(m.dim)


def test_poly_helpers():
    assert poly_mul((1, 1), (-1, 1)) == (-1, 0, 1)
    q, r = poly_divmod_monic((-1, 0, 1), (1, 1))
    assert q == (-1, 1) and r == (0,)
    p = MonicPoly.from_coefficients([-4, 0, 1])
    assert str(p) == "x^2-4" and p.degree == 2 and p.coefficients == (-4, 0, 1)


@pytest.mark.parametrize(
    "coeffs",
    [
        [1, 0, 1],
        [-2, 0, 0, 1],
        [2, -3, 0, 1],
        [4, 0, 0, 0, 1],  # x^4 + 4 factors without a rational root
        [1, 0, 0, 0, 1],
        [-1, -1, 0, 0, 1],
        [6, 5, 0, 0, 1],
        [1, 1, 1, 1, 1],
        [2, 0, 0, 0, 0, 1],
    ],
)
def test_irreducibility_against_sympy(coeffs):
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    truth = poly.is_irreducible
    cert = irreducibility(MonicPoly.from_coefficients(coeffs))
    assert cert.verdict == ("irreducible" if truth else "reducible")
    if cert.factors:
        prod = (1,)
        for f in cert.factors:
            prod = poly_mul(prod, f)
        assert prod == tuple(coeffs)


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=4))
def test_irreducibility_random(low):
    coeffs = low + [1]
    x = sympy.symbols("x")
    truth = sympy.Poly(list(reversed(coeffs)), x).is_irreducible
    cert = irreducibility(MonicPoly.from_coefficients(coeffs))
    assert cert.verdict == ("irreducible" if truth else "reducible")
    m = from_polynomial(coeffs)
    assert (m.zero_divisor_status.kind == PROVEN_FREE) == truth


def test_cubic_ring_structure():
    m = from_polynomial([-2, 0, 0, 1])  # Z[2^(1/3)]
    t = (0, 1, 0)
    assert multiply(m, t, multiply(m, t, t)) == (2, 0, 0)
    for a, b in itertools.product(range(3), repeat=2):
        assert multiply(m, m.basis(a), m.basis(b)) == multiply(m, m.basis(b), m.basis(a))
