from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from conftest import rand_vec
from zdmult.algebra import act, central_scalar, multiply, opposite, right_rep
from zdmult.catalog import catalog_pairs, from_polynomial, quadratic, quaternion, scaled_z, shipped_catalog
from zdmult.errors import DimensionMismatch, HypothesisViolation, NotProper
from zdmult.linalg import RatMatrix
from zdmult.structure import (
    are_aligned,
    decompose_normalizer,
    enumerate_integral_automorphisms,
    enumerate_integral_iso_to_opposite,
    in_centralizer,
    in_normalizer,
    is_automorphism,
    is_group,
    is_homomorphism,
    is_iso_to_opposite,
    parse_class,
    preserves_class,
    representation_intersection,
)

SWAP = RatMatrix([[0, 1], [1, 0]])
CONJ = RatMatrix([[1, 0], [0, -1]])
QNEG = RatMatrix.diag([1, -1, -1, -1])


def _span_intersection_dim(m1, m2) -> int:
    """Rational dimension of span(psi) & span(phi) via rank of the stacked images."""
    d = m1.dim
    rows = [list(m.sc[i][k][r] for k in range(d) for r in range(d)) for m in (m1, m2) for i in range(d)]
    return 2 * d - sympy.Matrix(rows).rank()


# --- alignment --------------------------------------------------------------


def test_scaled_alignment_example():
    c = are_aligned(scaled_z(2), scaled_z(3))
    assert c.aligned and c.v == (9,) and c.w == (4,)
    assert multiply(scaled_z(2), multiply(scaled_z(2), (5,), (9,)), (7,)) == (36 * 35,)


def test_sqrt2_sqrt3_not_aligned():
    c = are_aligned(quadratic(0, 2), quadratic(0, 3))
    assert not c.aligned and c.intersection_rank == 1
    assert c.intersection_basis == ((1, 0, 0, 1),)
    assert c.check(quadratic(0, 2), quadratic(0, 3))


def test_reflexive_alignment_uses_central_scalar():
    for m in shipped_catalog().values():
        c = are_aligned(m, m)
        assert c.aligned
        _, w = central_scalar(m)
        assert c.v == c.w == w
        assert multiply(m, multiply(m, (1,) * m.dim, c.v), (2,) * m.dim) == multiply(
            m, multiply(m, (1,) * m.dim, c.w), (2,) * m.dim
        )


def test_alignment_errors():
    with pytest.raises(DimensionMismatch):
        are_aligned(quadratic(0, -1), quaternion())
    with pytest.raises(NotProper):
        are_aligned(from_polynomial([-4, 0, 1]), quadratic(0, -1))


def test_quadratic_family_rank_against_oracle():
    rings = [quadratic(b, c) for b, c in catalog_pairs()]
    for m1, m2 in itertools.combinations(rings, 2):
        rank, _, _ = representation_intersection(m1, m2)
        assert rank == _span_intersection_dim(m1, m2)


def _catalog_for_equivalence():
    rings = [quadratic(0, c) for c in (-1, 2, -2, 3, 5)] + [quadratic(1, 1), quadratic(1, -1)]
    return rings, [scaled_z(n) for n in (1, 2, 3, -2)]


def test_alignment_is_equivalence():
    quad, scal = _catalog_for_equivalence()
    for family in (quad, scal):
        rel = {}
        for a, b in itertools.product(family, repeat=2):
            rel[(a, b)] = are_aligned(a, b, require_properness=False).aligned
        for a in family:
            assert rel[(a, a)]
        for a, b in itertools.product(family, repeat=2):
            assert rel[(a, b)] == rel[(b, a)]
        for a, b, c in itertools.product(family, repeat=3):
            if rel[(a, b)] and rel[(b, c)]:
                assert rel[(a, c)]


def test_alignment_witness_identity_and_opposites():
    H = quaternion()
    T = RatMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]])
    HT = act(H, T)
    pairs = [(scaled_z(a), scaled_z(b)) for a, b in [(1, 2), (2, 5), (3, -7)]] + [(H, H), (quadratic(0, 2), act(quadratic(0, 2), RatMatrix([[2, 0], [0, 2]])))]
    r = random.Random(9)
    for m1, m2 in pairs:
        c = are_aligned(m1, m2, require_properness=False)
        assert c.aligned
        for _ in range(500):
            x, y = rand_vec(r, m1.dim), rand_vec(r, m1.dim)
            assert multiply(m1, multiply(m1, x, c.v), y) == multiply(m2, multiply(m2, x, c.w), y)
        assert are_aligned(opposite(m1), opposite(m2), require_properness=False).aligned
    # the quaternions and a non-normalizing conjugate are not aligned
    assert not are_aligned(H, HT, require_properness=False).aligned
    assert not are_aligned(opposite(H), opposite(HT), require_properness=False).aligned


def test_quaternion_not_aligned_with_opposite():
    H = quaternion()
    c = are_aligned(H, opposite(H))
    assert not c.aligned and c.intersection_rank < 4


# --- centralizer, normalizer ------------------------------------------------


def test_centralizer():
    g = quadratic(0, -1)
    assert in_centralizer(g, right_rep(g, (2, 3))) == (2, 3)
    assert in_centralizer(g, CONJ) is None
    H = quaternion()
    y = (1, 2, -1, 3)
    assert in_centralizer(H, right_rep(H, y)) == y
    assert in_centralizer(H, RatMatrix.scalar(4, 3)) == (3, 0, 0, 0)
    with pytest.raises(ZeroDivisionError):
        in_centralizer(g, RatMatrix.zeros(2, 2))


def test_normalizer_dichotomy_examples():
    assert in_normalizer(quadratic(0, -1), SWAP)
    for c in (2, -2, 3, -3, 5):
        assert not in_normalizer(quadratic(0, c), SWAP)
    g = quadratic(0, 3)
    assert in_normalizer(g, right_rep(g, (1, 4)))


def test_normalizer_decomposition_examples():
    g = quadratic(0, -1)
    A, v = decompose_normalizer(g, right_rep(g, (3, 1)))
    assert A == RatMatrix.identity(2) and v == (3, 1)
    A, v = decompose_normalizer(g, CONJ)
    assert A == CONJ and v == (1, 0)
    T = CONJ @ right_rep(g, (1, 1))
    A, v = decompose_normalizer(g, T)
    assert A @ right_rep(g, v) == T and is_automorphism(g, A)
    with pytest.raises(HypothesisViolation):
        decompose_normalizer(quadratic(0, 2), SWAP)


def test_normalizer_decomposition_random():
    r = random.Random(4)
    for m in (quadratic(0, -1), quaternion(), quadratic(1, -1)):
        auts = list(enumerate_integral_automorphisms(m, 1))
        for _ in range(10):
            A0 = r.choice(auts)
            v0 = rand_vec(r, m.dim, r=5, nonzero=True)
            T = A0 @ right_rep(m, v0)
            assert in_normalizer(m, T)
            A, v = decompose_normalizer(m, T)
            assert A @ right_rep(m, v) == T
            assert is_homomorphism(A, m, m)
            assert in_centralizer(m, right_rep(m, v)) is not None


# --- homomorphisms and enumeration ------------------------------------------


def test_homomorphism_examples():
    H = quaternion()
    assert is_homomorphism(RatMatrix.identity(4), H, H)
    assert is_iso_to_opposite(H, QNEG) and not is_automorphism(H, QNEG)
    assert not is_automorphism(quadratic(0, -1), SWAP)


def _signed_permutations_of_ijk(sign: int) -> set:
    """Integral automorphisms (sign +1) or anti-automorphisms (sign -1) of the
    Lipschitz quaternions: signed permutations of i, j, k with det = sign."""
    out = set()
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            rows = [[0] * 4 for _ in range(4)]
            rows[0][0] = 1
            for col, (p, s) in enumerate(zip(perm, signs)):
                rows[p + 1][col + 1] = s
            M = RatMatrix(rows)
            if M.det() == sign:
                out.add(M)
    return out


def test_gaussian_automorphisms():
    res = enumerate_integral_automorphisms(quadratic(0, -1), 1)
    assert set(res) == {RatMatrix.identity(2), CONJ}


def test_quaternion_enumerations_against_oracle():
    H = quaternion()
    auts = enumerate_integral_automorphisms(H, 1)
    isos = enumerate_integral_iso_to_opposite(H, 1)
    assert set(auts) == _signed_permutations_of_ijk(1)
    assert set(isos) == _signed_permutations_of_ijk(-1)
    assert len(auts) == len(isos) == 24
    assert is_group(list(auts))
    assert not is_group(list(isos))
    for M in list(auts) + list(isos):
        assert abs(M.det()) == 1
    assert auts.complete_within_bound and "beyond the bound" in auts.note


def test_enumeration_is_sorted_and_deterministic():
    H = quaternion()
    a = [M.vectorize() for M in enumerate_integral_automorphisms(H, 1)]
    assert a == sorted(a)


# --- class preservation -----------------------------------------------------


def test_preserves_examples():
    ok, reason = preserves_class(quadratic(0, -1), SWAP, "PS*")
    assert ok and "normalizer" in reason
    assert not preserves_class(quadratic(0, 2), SWAP, "PS*")[0]
    H = quaternion()
    assert preserves_class(H, QNEG, "IP_2*")[0]
    assert not preserves_class(H, QNEG, "IP*")[0]
    ok, reason = preserves_class(H, RatMatrix.identity(4), "D")
    assert ok and "not left amenable" in reason


def test_preserves_errors():
    with pytest.raises(ValueError):
        preserves_class(quadratic(0, -1), RatMatrix([[1, 0], [0, 2]]) * Fraction(1, 2), "S")
    with pytest.raises(ZeroDivisionError):
        preserves_class(quadratic(0, -1), RatMatrix([[1, 1], [1, 1]]), "S")
    with pytest.raises(ValueError):
        parse_class("IP_1")
    with pytest.raises(ValueError):
        parse_class("XYZ")


def test_parse_class_names():
    assert parse_class("IP3*") == ("IP_3*", "automorphism-or-iso-to-opposite")
    assert parse_class("IP_0") == ("IP_0", "automorphism-or-iso-to-opposite")
    assert parse_class("PS*") == ("PS*", "normalizer")
    assert parse_class("IP") == ("IP", "automorphism")
