"""Acceptance criteria, one test each.

Every test prints a single ``[ACC nn] PASS|FAIL  title  (time)`` line to the
terminal, timed against the stated runtime limit where one exists.
"""
from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager

import mpmath
import pytest

from zdmult import constructions as C
from zdmult.algebra import (
    central_scalar,
    is_commutative,
    is_left_amenable,
    left_rep,
    multiply,
    opposite,
    reaches_identity,
    right_rep,
)
from zdmult.catalog import quadratic, quaternion, scaled_z, shipped_catalog
from zdmult.genpoly import return_set_scan
from zdmult.largeness import WITNESSED, cube, fp_set, thick_witness
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
)

G = quadratic(0, -1)
R2 = quadratic(0, 2)
H = quaternion()
SWAP = RatMatrix([[0, 1], [1, 0]])
CATALOG = shipped_catalog()


@pytest.fixture
def criterion(capsys):
    """Run a block as criterion ``num``; print PASS/FAIL with the elapsed time
    and fail when the block raises or exceeds ``limit`` seconds."""

    @contextmanager
    def run(num: int, title: str, limit: float | None = None):
        t0 = time.perf_counter()
        ok, note = True, ""
        try:
            yield
        except AssertionError as exc:
            ok, note = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
            raise
        finally:
            dt = time.perf_counter() - t0
            if ok and limit is not None and dt >= limit:
                ok, note = False, f"runtime {dt:.2f}s over the {limit:g}s limit"
            budget = f" / {limit:g}s" if limit is not None else ""
            with capsys.disabled():
                print(f"\n[ACC {num:02d}] {'PASS' if ok else 'FAIL'}  {title}  ({dt:.2f}s{budget})"
                      + (f"  -- {note}" if note else ""))
        assert limit is None or dt < limit, f"runtime {dt:.2f}s over the {limit:g}s limit"

    return run


def _rv(r: random.Random, d: int, R: int = 30, nonzero: bool = False) -> tuple[int, ...]:
    while True:
        v = tuple(r.randint(-R, R) for _ in range(d))
        if any(v) or not nonzero:
            return v


def test_acc01_scaled_z_alignment(criterion):
    with criterion(1, "scaled-Z alignment for 1 <= n < m <= 10", limit=1.0):
        r = random.Random(1)
        for n, m in itertools.combinations(range(1, 11), 2):
            A, B = scaled_z(n), scaled_z(m)
            c = are_aligned(A, B)
            assert c.aligned, (n, m)
            for _ in range(100):
                x, y = _rv(r, 1), _rv(r, 1)
                assert multiply(A, multiply(A, x, c.v), y) == multiply(B, multiply(B, x, c.w), y)


def test_acc02_quadratic_catalog_separation(criterion):
    with criterion(2, "quadratic catalog pairwise not aligned, rank 1", limit=2.0):
        cs = (-1, 2, -2, 3, -3, 5, -5, 6, 7)
        rings = [quadratic(b, c) for b in (0, 1) for c in cs]
        for m1, m2 in itertools.combinations(rings, 2):
            c = are_aligned(m1, m2, require_properness=False)
            assert not c.aligned and c.intersection_rank == 1, (m1.label, m2.label)


def test_acc03_quaternion_automorphisms(criterion):
    with criterion(3, "24 quaternion automorphisms (a group) and 24 isos to the opposite", limit=30.0):
        auts = list(enumerate_integral_automorphisms(H, 1))
        isos = list(enumerate_integral_iso_to_opposite(H, 1))
        assert len(auts) == 24 and len(isos) == 24
        assert is_group(auts)
        S = set(auts)
        assert all(A @ B in S for A in auts for B in auts)
        assert all(A.inverse() in S for A in auts)


def test_acc04_normalizer_dichotomy(criterion):
    with criterion(4, "swap normalizes the Gaussian product only"):
        assert in_normalizer(G, SWAP)
        for c in (2, -2, 3, -3, 5):
            assert not in_normalizer(quadratic(0, c), SWAP), c


def test_acc05_representation_laws(criterion):
    with criterion(5, "representation laws, 1000 triples per catalog ring"):
        r = random.Random(5)
        for name, m in CATALOG.items():
            for _ in range(1000):
                x, y = _rv(r, m.dim), _rv(r, m.dim)
                xy = multiply(m, x, y)
                assert left_rep(m, xy) == left_rep(m, x) @ left_rep(m, y), name
                assert right_rep(m, xy) == right_rep(m, y) @ right_rep(m, x), name
                assert xy == left_rep(m, x) @ y == right_rep(m, y) @ x, name


def test_acc06_identity_round_trips(criterion):
    with criterion(6, "reaches_identity and central_scalar round trips, 100 x per ring"):
        r = random.Random(6)
        for name, m in CATALOG.items():
            c, w = central_scalar(m)
            assert left_rep(m, w) == right_rep(m, w) == RatMatrix.scalar(m.dim, c), name
            for _ in range(100):
                x = _rv(r, m.dim, nonzero=True)
                b, z = reaches_identity(m, x)
                assert left_rep(m, x).inverse() * b == left_rep(m, z), name
                assert multiply(m, x, w) == multiply(m, w, x) == tuple(c * t for t in x), name


def test_acc07_ip_separation(criterion):
    with criterion(7, "IP-separating sequences, n = 4: Gaussian vs sqrt(2), scaled 1 vs 2", limit=20.0):
        for mA, mB in ((G, R2), (scaled_z(1), scaled_z(2))):
            t0 = time.perf_counter()
            seq = C.build_ip_separating(mA, mB, 4)
            rep = C.verify_ip_separating(mA, mB, seq.generators)
            assert rep.triples == 15 ** 3
            assert rep.ok, rep.solutions[:3]
            assert time.perf_counter() - t0 < 10.0, "one pair took over 10s"


def test_acc08_order_separation(criterion):
    with criterion(8, "quaternion order-separating sequence, n = 3", limit=10.0):
        seq = C.build_ip_order_separating(H, 3)
        rep = C.verify_ip_order(H, seq.generators)
        assert rep.triples == 7 ** 3
        assert rep.ok
        for s in rep.solutions:
            assert s["ordered"] and max(s["alpha"]) < min(s["beta"])


def test_acc09_thick_avoiding(criterion):
    with criterion(9, "thick-avoiding stages N = 3: norms, avoidance, thickness", limit=60.0):
        S = C.build_thick_avoiding([G], [R2], 3)
        assert [s.n for s in S.stages] == [1, 2, 3]
        assert S.check_norms()
        prev_max = 0
        for s in S.stages:
            assert s.min_sq > s.n ** 2 * prev_max
            prev_max = s.max_sq
            assert C.verify_avoiding(s.H, cube(s.n, 2), R2).ok
            rep = thick_witness(s.H, G, cube(s.n, 2))
            assert rep.verdict == WITNESSED and tuple(rep.witness["x"]) == s.x


@pytest.mark.xfail(strict=True, reason="cross-stage incidences exist in cube(20); see the decisions ledger")
def test_acc10_ipstar_truncation(criterion, capsys):
    with criterion(10, "IP*-nonsyndetic N = 4 over cube(20): incidences in a single stage", limit=60.0):
        S = C.build_ipstar_nonsyndetic([G, R2], 4)
        assert S.check_norms()
        rep = C.verify_difference_bound(S, window=20)
        with capsys.disabled():
            print(f"[ACC 10] detail: {rep.incidences} incidences, max |B & (B-x)| = {rep.max_count}, "
                  f"{len(rep.cross_stage)} cross-stage, cutoff N(x) respected: {rep.cutoff_respected}")
        assert rep.shifts_checked == 41 ** 2 - 1
        assert rep.cutoff_respected
        assert rep.single_stage, f"{len(rep.cross_stage)} incidences join two different stages"


def test_acc11_two_adic(criterion):
    with criterion(11, "2-adic example on [-2^12, 2^12]", limit=10.0):
        rep = C.v2_example(12)
        assert rep["pairs"] == (2 * 2 ** 12) ** 2
        assert rep["ok"]


def test_acc12_normalizer_decomposition(criterion):
    with criterion(12, "50 random normalizer decompositions"):
        r = random.Random(12)
        for m in (G, H):
            auts = list(enumerate_integral_automorphisms(m, 1))
            for _ in range(25):
                A0 = r.choice(auts)
                v0 = _rv(r, m.dim, R=9, nonzero=True)
                T = A0 @ right_rep(m, v0)
                A, v = decompose_normalizer(m, T)
                assert A @ right_rep(m, v) == T
                assert is_automorphism(m, A)
                assert in_centralizer(m, right_rep(m, v)) is not None


def test_acc13_reversal_identity(criterion):
    with criterion(13, "FP reversal identity, 100 quaternion tuples"):
        r = random.Random(13)
        Hop = opposite(H)
        for _ in range(100):
            gens = [_rv(r, 4, R=5, nonzero=True) for _ in range(5)]
            assert fp_set(Hop, gens).as_set() == fp_set(H, gens[::-1]).as_set()


def test_acc14_genpoly_scan(criterion):
    with mpmath.workprec(200):
        s2 = mpmath.sqrt(2)
        eps = mpmath.mpf(1) / 100
        oracle = [n for n in range(1, 10 ** 4 + 1) if abs(s2 * n - mpmath.nint(s2 * n)) < eps]
    with criterion(14, "sqrt(2)*n scan on [1, 10^4] against a 200-bit oracle", limit=5.0):
        res = return_set_scan("sqrt(2)*n", 0.01, (1, 10 ** 4))
        assert res.straddles == []
        got = sorted(v[0] for v in res.members)
        assert got == oracle
        assert 169 in got


def test_acc15_amenability(criterion):
    with criterion(15, "left amenable exactly when commutative"):
        for name, m in CATALOG.items():
            assert is_left_amenable(m) == is_commutative(m), name
            assert is_left_amenable(m) == (name != "quaternion"), name
