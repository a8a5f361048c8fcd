from __future__ import annotations

import itertools
import random

import pytest

from zdmult import constructions as C
from zdmult.algebra import left_rep, multiply, opposite
from zdmult.catalog import quadratic, quaternion, scaled_z
from zdmult.errors import HypothesisViolation, SearchExhausted
from zdmult.largeness import FiniteSet, cube
from zdmult.linalg import RatMatrix, norm2_sq

G = quadratic(0, -1)
R2 = quadratic(0, 2)
R3 = quadratic(0, 3)
H = quaternion()


# --- verify_avoiding --------------------------------------------------------


def _sweep_oracle(A, Gs, other, R) -> bool:
    """Avoiding iff no z in the box has d independent f in G with f (.) z in A."""
    d = other.dim
    aset = set(map(tuple, A))
    for z in itertools.product(range(-R, R + 1), repeat=d):
        if not any(z):
            continue
        hits = [f for f in Gs if multiply(other, f, z) in aset]
        if len(hits) >= d and RatMatrix(hits).rank() == d:
            return False
    return True


def test_verify_avoiding_agrees_with_sweep():
    r = random.Random(2024)
    disagreements = 0
    for trial in range(50):
        other = r.choice([G, R2, R3, quadratic(1, 1)])
        Gs = [v for v in cube(1, 2)]
        r.shuffle(Gs)
        Gs = Gs[: r.randint(2, 5)]
        if r.random() < 0.5:
            z0 = (r.randint(-3, 3), r.randint(-3, 3))
            A = [multiply(other, f, z0) for f in Gs[:2]] + [(r.randint(-5, 5), r.randint(-5, 5))]
        else:
            A = [(r.randint(-5, 5), r.randint(-5, 5)) for _ in range(r.randint(1, 6))]
        A = [a for a in A if any(a)]
        R = 3 * max((max(map(abs, a)) for a in A), default=1)
        rep = C.verify_avoiding(A, Gs, other)
        disagreements += rep.ok != _sweep_oracle(A, Gs, other, R)
    assert disagreements == 0


def test_verify_avoiding_examples():
    assert C.verify_avoiding([], cube(1, 2), R2).ok
    z0 = (2, -1)
    A = [multiply(R2, (1, 0), z0), multiply(R2, (0, 1), z0)]
    rep = C.verify_avoiding(A, [(1, 0), (0, 1)], R2)
    assert not rep.ok and rep.max_incidence == 2
    assert rep.violation["z"] == list(z0)


def test_verify_avoiding_dependent_hits_are_fine():
    # two parallel f give two hits but no admissible F
    z0 = (1, 1)
    A = [multiply(R2, (1, 0), z0), multiply(R2, (2, 0), z0)]
    assert C.verify_avoiding(A, [(1, 0), (2, 0)], R2).ok


# --- avoiding dilators ------------------------------------------------------


def test_find_avoiding_dilator_examples():
    Gs = [(1, 0), (0, 1), (1, 1)]
    x = C.find_avoiding_dilator(G, [R2], Gs)
    assert C.verify_avoiding([multiply(G, g, x) for g in Gs], Gs, R2).ok
    assert C.find_avoiding_dilator(G, [], Gs) == (-1, -1)
    with pytest.raises(HypothesisViolation, match="aligned"):
        C.find_avoiding_dilator(scaled_z(1), [scaled_z(2)], [(1,), (2,)])
    with pytest.raises(ValueError):
        C.find_avoiding_dilator(G, [R2], [])


def test_find_avoiding_dilator_is_first_valid():
    Gs = cube(1, 2)
    x = C.find_avoiding_dilator(G, [R2], Gs)
    for v in itertools.product(range(-max(map(abs, x)), max(map(abs, x)) + 1), repeat=2):
        if not any(v) or (max(map(abs, v)), v) >= (max(map(abs, x)), x):
            continue
        A = [multiply(G, g, v) for g in Gs]
        assert not C.verify_avoiding(A, Gs, R2).ok or len(set(A)) < len(Gs)


def test_search_exhaustion_reports_stage(monkeypatch):
    monkeypatch.setenv("ZDMULT_SEARCH_RADIUS", "1")
    assert C.search_radius() == 1
    with pytest.raises(SearchExhausted) as exc:
        C.build_thick_avoiding([G], [R2], 3)
    assert exc.value.stage is not None and exc.value.stage >= 1
    assert C.search_radius(7) == 7


# --- staged sets ------------------------------------------------------------


@pytest.fixture(scope="module")
def thick3():
    return C.build_thick_avoiding([G], [R2], 3)


def test_thick_stages(thick3):
    assert [s.n for s in thick3.stages] == [1, 2, 3]
    assert thick3.check_norms()
    prev = 0
    for s in thick3.stages:
        assert s.H.as_set() == {multiply(G, g, s.x) for g in cube(s.n, 2)}
        assert s.min_sq > s.n ** 2 * prev
        prev = s.max_sq
        assert C.verify_avoiding(s.H, cube(s.n, 2), R2).ok
    U = thick3.union()
    for s in thick3.stages:
        assert s.H.as_set() <= U.as_set()


def test_thick_single_stage_no_avoid():
    S = C.build_thick_avoiding([G], [], 1)
    assert S.stages[0].x == (-1, -1)


def test_thick_rejects_aligned():
    with pytest.raises(HypothesisViolation):
        C.build_thick_avoiding([scaled_z(1)], [scaled_z(2)], 2)


def test_thick_check_norms_detects_tampering(thick3):
    s = thick3.stages[1]
    bad = C.StagedSet(thick3.kind, [thick3.stages[0], C.Stage(s.n, s.mult, s.x, s.H, s.min_sq - 1, s.max_sq)], thick3.avoid)
    assert not bad.check_norms()


def test_ipstar_single_stage():
    S = C.build_ipstar_nonsyndetic([G], 1)
    assert len(S.stages) == 1 and S.check_norms()


def test_difference_cutoff():
    S = C.build_ipstar_nonsyndetic([G, R2], 3)
    assert C.difference_cutoff(S, (1, 0)) == 1
    big = (10 ** 6, 0)
    assert C.difference_cutoff(S, big) is None
    rep = C.verify_difference_bound(S, window=4)
    assert rep.cutoff_respected
    assert rep.shifts_checked == 80
    d = rep.to_dict()
    assert d["incidences"] == rep.incidences


# --- IP-separating sequences ------------------------------------------------


def test_ip_separating_known_candidate():
    rep = C.verify_ip_separating(scaled_z(1), scaled_z(2), [(3,), (5,), (7,)])
    assert rep.ok and rep.triples == 7 ** 3


def test_ip_separating_detects_solution():
    rep = C.verify_ip_separating(scaled_z(1), scaled_z(2), [(1,), (2,)])
    assert not rep.ok and rep.solutions


def test_ip_separating_small():
    seq = C.build_ip_separating(scaled_z(1), scaled_z(2), 1)
    (x,) = seq.generators
    assert multiply(scaled_z(2), x, x) != x


def test_ip_separating_hypothesis():
    with pytest.raises(HypothesisViolation):
        C.build_ip_separating(G, G, 2)
    with pytest.raises(HypothesisViolation):
        C.build_ip_separating(H, opposite(H), 2)


def test_ip_separating_gauss_sqrt3():
    seq = C.build_ip_separating(G, R3, 3)
    assert C.verify_ip_separating(G, R3, seq.generators).ok
    assert all(any(g) for g in seq.generators)


def test_ip_order():
    with pytest.raises(HypothesisViolation, match="commutative"):
        C.build_ip_order_separating(G, 2)
    seq = C.build_ip_order_separating(H, 2)
    rep = C.verify_ip_order(H, seq.generators)
    assert rep.ok
    assert [(s["alpha"], s["beta"], s["gamma"]) for s in rep.solutions] == [([0], [1], [0, 1])]


# --- norms and the 2-adic example -------------------------------------------


def test_norm_constant_examples():
    assert C.norm_constant(G, (1, 0)) == 1
    assert C.norm_constant(scaled_z(2), (3,)) == 6
    with pytest.raises(ValueError):
        C.norm_constant(G, (0, 0))


@pytest.mark.parametrize("m,y", [(G, (0, 1)), (G, (2, 3)), (R2, (1, 1)), (H, (1, 2, 0, -1)), (scaled_z(-3), (4,))])
def test_norm_constant_samples(m, y):
    K = C.norm_constant(m, y)
    r = random.Random(str(y))
    for _ in range(100):
        x = tuple(r.randint(-50, 50) for _ in range(m.dim))
        nx, a, b = norm2_sq(x), norm2_sq(multiply(m, x, y)), norm2_sq(multiply(m, y, x))
        # squared forms of K^-1 max(|xy|, |yx|) <= |x| <= K min(|xy|, |yx|)
        assert max(a, b) <= K * K * nx
        assert nx <= K * K * min(a, b)


def test_v2_example_small():
    rep = C.v2_example(6)
    assert rep["ok"] and rep["pairs"] == (2 * 64) ** 2


def test_transition_matrices_integral():
    mats = C._transition_matrices(G, R2, [(1, 0), (0, 1)])
    assert all(isinstance(t, int) for M in mats for row in M for t in row)
    assert left_rep(G, (1, 0)) == RatMatrix.identity(2)
