"""Explicit set constructions with exact finite verifiers.

* avoiding dilators: ``G * x`` meets every admissible dilate ``F (.) z`` in
  fewer than d points;
* staged unions of dilated cubes (thick for some multiplications, avoiding
  others; or sparse enough that no difference repeats across stages);
* generator sequences whose FP sets separate two multiplications, or a
  multiplication from its opposite.

All "infinite" objects are emitted truncated, with per-stage certificates.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, lcm
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .algebra import (
    Multiplication,
    is_commutative,
    left_rep,
    multiply,
    opposite,
    require_proper,
    right_rep,
    shell_vectors,
    vectors_by_norm,
)
from .errors import DimensionMismatch, HypothesisViolation, SearchExhausted
from .largeness import FiniteSet, cube
from .linalg import RatMatrix, norm2_sq
from .structure import are_aligned

DEFAULT_RADIUS = 10 ** 4


def search_radius(explicit: int | None = None) -> int:
    """Sup-norm bound for candidate searches (``ZDMULT_SEARCH_RADIUS`` overrides the default)."""
    if explicit is not None:
        return explicit
    env = os.environ.get("ZDMULT_SEARCH_RADIUS")
    return int(env) if env else DEFAULT_RADIUS


def _label(m: Multiplication) -> str:
    return m.label or str(m.provenance[0])


# ---------------------------------------------------------------------------
# avoiding sets


@dataclass
class AvoidingReport:
    ok: bool
    max_incidence: int
    candidates: int
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_incidence": self.max_incidence,
            "candidates": self.candidates,
            "violation": self.violation,
        }


def _adjugate_det(M: RatMatrix) -> tuple[RatMatrix, int]:
    """Integer ``(adj(M), det(M))`` for an integral matrix."""
    det = M.det()
    inv = M.inverse()
    return inv * det, det


def verify_avoiding(A, G: Sequence[Sequence[int]], other: Multiplication) -> AvoidingReport:
    """Exact decision of the avoiding property of A with respect to (G, other).

    A violation needs some nonzero z whose incidence set
    ``I(z) = {f in G : f (.) z in A}`` contains d linearly independent vectors
    (any such d vectors form an admissible F with d hits).  Every z with a
    nonempty incidence set solves ``phi(f) z = a`` for some f in G and a in A,
    so the finitely many solutions of these systems are all the candidates.
    """
    d = other.dim
    G = [tuple(g) for g in G]
    elems = [tuple(a) for a in A]
    inc: dict[tuple, set] = {}
    for f in G:
        adj, det = _adjugate_det(left_rep(other, f))
        for a in elems:
            num = adj @ a
            if all(isinstance(t, int) and t % det == 0 for t in num):
                z = tuple(t // det for t in num)
                if any(z):
                    inc.setdefault(z, set()).add(f)
    best = 0
    for z in sorted(inc, key=lambda v: (max(map(abs, v)), v)):
        I = sorted(inc[z])
        best = max(best, len(I))
        if len(I) >= d and RatMatrix(I).rank() == d:
            basis = _independent_subset(I, d)
            return AvoidingReport(
                False,
                best,
                len(inc),
                {"z": list(z), "F": [list(f) for f in basis], "hits": [list(multiply(other, f, z)) for f in basis]},
            )
    return AvoidingReport(True, best, len(inc))


def _independent_subset(vectors: list, d: int) -> list:
    chosen: list = []
    for v in vectors:
        if RatMatrix(chosen + [v]).rank() == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == d:
                break
    return chosen


def _transition_matrices(base: Multiplication, other: Multiplication, G: list) -> list:
    """Distinct ``phi(f)^-1 psi(g)`` over f, g in G, scaled by one common
    integer so that all are integral (scaling preserves the distinctness of
    images)."""
    invs = [left_rep(other, f).inverse() for f in G]
    psis = [left_rep(base, g) for g in G]
    mats = {Fi @ P for Fi in invs for P in psis}
    den = 1
    for M in mats:
        for row in M.rows:
            for t in row:
                if not isinstance(t, int):
                    den = lcm(den, t.denominator)
    return sorted({tuple(tuple(int(t * den) for t in row) for row in M.rows) for M in mats})


def _check_not_aligned(base: Multiplication, others: Sequence[Multiplication]) -> None:
    for o in others:
        if o.dim != base.dim:
            raise DimensionMismatch("all multiplications must share one dimension")
        cert = are_aligned(base, o)
        if cert.aligned:
            raise HypothesisViolation(
                f"{_label(base)} and {_label(o)} are aligned (v={list(cert.v)}, w={list(cert.w)}); "
                "avoiding dilators exist only for non-aligned pairs"
            )


def find_avoiding_dilator(
    base: Multiplication,
    others: Sequence[Multiplication],
    G: Sequence[Sequence[int]],
    *,
    radius: int | None = None,
    start: int = 1,
    prefilter: Callable[[np.ndarray], np.ndarray] | None = None,
    check_alignment: bool = True,
) -> tuple[int, ...]:
    """Smallest x (sup-norm, then lexicographic) with ``G * x`` avoiding for
    every multiplication in ``others``.

    x qualifies when it lies outside all kernels ``Null(T - T')`` of distinct
    transition matrices ``T = phi(f)^-1 psi(g)``, i.e. when the images ``T x``
    are pairwise distinct.  ``prefilter`` maps a shell of candidates (an
    integer array) to a boolean mask; the staged builders use it for their
    norm growth conditions."""
    G = [tuple(g) for g in G]
    if not G:
        raise ValueError("G must be nonempty")
    if any(not any(g) for g in G):
        raise ValueError("G must not contain 0")
    require_proper(base, "find_avoiding_dilator")
    for o in others:
        require_proper(o, "find_avoiding_dilator")
    if check_alignment:
        _check_not_aligned(base, others)
    d = base.dim
    trans = [[list(map(list, T)) for T in _transition_matrices(base, o, G)] for o in others]
    for x in _filtered_candidates(d, start, search_radius(radius), prefilter):
        if all(kernels.images_distinct(Ts, x) for Ts in trans):
            A = [multiply(base, g, x) for g in G]
            for o in others:
                rep = verify_avoiding(A, G, o)
                if not rep.ok:
                    raise AssertionError(f"avoiding post-check failed: {rep.violation}")
            return x
    raise SearchExhausted(
        f"no avoiding dilator with sup-norm <= {search_radius(radius)}", constraint="outside all transition kernels"
    )


def _filtered_candidates(d: int, start: int, limit: int, prefilter=None):
    """Nonzero vectors by sup-norm then lexicographically, from shell ``start``
    up to ``limit``, restricted by a vectorized shell mask."""
    for r in range(max(start, 1), limit + 1):
        shell = list(shell_vectors(d, r))
        if prefilter is None:
            yield from shell
            continue
        mask = prefilter(shell)
        for v, ok in zip(shell, mask):
            if ok:
                yield v


def _min_norm_filter(m: Multiplication, G: list, threshold: int):
    """Shell mask for ``min_{g in G} |g * x|^2 > threshold``.

    ``|g * x|^2`` is the quadratic form of the Gram matrix of ``psi(g)``."""
    grams = []
    for g in G:
        P = left_rep(m, g)
        grams.append([[int(t) for t in row] for row in (P.T @ P).rows])
    big = max(abs(t) for Gm in grams for row in Gm for t in row)
    d = m.dim
    garr = np.array(grams, dtype=np.int64)

    def mask(shell: list) -> list:
        r = max(abs(t) for t in shell[0])
        if big * d * d * r * r < 2 ** 62 and threshold < 2 ** 62:
            X = np.array(shell, dtype=np.int64)
            Q = np.einsum("si,kij,sj->sk", X, garr, X)
            return (Q.min(axis=1) > threshold).tolist()
        return [
            min(sum(v[i] * Gm[i][j] * v[j] for i in range(d) for j in range(d)) for Gm in grams) > threshold
            for v in shell
        ]

    return mask


# ---------------------------------------------------------------------------
# staged sets


@dataclass
class Stage:
    n: int
    mult: Multiplication
    x: tuple[int, ...]
    H: FiniteSet
    min_sq: int
    max_sq: int
    certificates: dict = field(default_factory=dict)

    def to_dict(self, ref: Callable[[Multiplication], str] = _label) -> dict:
        return {
            "n": self.n,
            "mult": ref(self.mult),
            "x": list(self.x),
            "size": len(self.H),
            "min_norm_sq": self.min_sq,
            "max_norm_sq": self.max_sq,
            "certificates": self.certificates,
        }


@dataclass
class StagedSet:
    kind: str  # "thick-avoiding" | "ipstar-nonsyndetic"
    stages: list[Stage]
    avoid: list[Multiplication] = field(default_factory=list)

    @property
    def norm_log(self) -> list[tuple[int, int]]:
        """Per-stage (min, max) of squared Euclidean norms."""
        return [(s.min_sq, s.max_sq) for s in self.stages]

    def union(self) -> FiniteSet:
        d = self.stages[0].H.dim
        return FiniteSet(d, (e for s in self.stages for e in s.H))

    def stage_of(self) -> dict[tuple, int]:
        out: dict[tuple, int] = {}
        for s in self.stages:
            for e in s.H:
                out.setdefault(e, s.n)
        return out

    def check_norms(self) -> bool:
        """Re-check the growth conditions from the raw sets."""
        prev_max = None
        for s in self.stages:
            d = s.H.dim
            expect = FiniteSet(d, (multiply(s.mult, g, s.x) for g in cube(s.n, d)))
            if expect != s.H:
                return False
            sq = s.H.norms_sq()
            mn, mx = min(sq), max(sq)
            if (mn, mx) != (s.min_sq, s.max_sq):
                return False
            if self.kind == "thick-avoiding":
                if prev_max is not None and not mn > s.n * s.n * prev_max:
                    return False
            else:
                big = min(norm2_sq(multiply(s.mult, g, s.x)) for g in cube(2 * s.n, d))
                if not big > s.n * s.n:
                    return False
                if prev_max is not None and not mn > 4 * prev_max:
                    return False
            prev_max = mx
        return True

    def to_dict(self, ref: Callable[[Multiplication], str] = _label) -> dict:
        return {
            "kind": self.kind,
            "stages": [s.to_dict(ref) for s in self.stages],
            "avoid": [ref(m) for m in self.avoid],
        }


def _cube_image(m: Multiplication, n: int, x) -> list[tuple]:
    return [multiply(m, g, x) for g in cube(n, m.dim)]


def _min_frob_sq(m: Multiplication, G: list) -> int:
    best = None
    for g in G:
        M = left_rep(m, g)
        f = sum(t * t for row in M.rows for t in row)
        best = f if best is None else min(best, f)
    return best


def _start_radius(m: Multiplication, G: list, threshold_sq) -> int:
    """First sup-norm shell where ``min_g |g * x|^2 > threshold_sq`` is possible.

    For x of sup-norm r, ``|g * x|^2 <= |psi(g)|_F^2 * d * r^2``."""
    if threshold_sq <= 0:
        return 1
    f2 = _min_frob_sq(m, G) * m.dim
    r0 = isqrt(int(threshold_sq // f2))
    return max(1, r0)


def build_thick_avoiding(
    thick_for: Sequence[Multiplication],
    avoid: Sequence[Multiplication],
    stages: int,
    *,
    radius: int | None = None,
) -> StagedSet:
    """Stages ``H_n = cube(n) *_n x_n`` with the multiplications of
    ``thick_for`` used in turn, each H_n avoiding (cube(n), avoid) and
    ``min |H_n| > n max |H_{n-1}|`` in the Euclidean norm."""
    if stages < 1:
        raise ValueError("stages must be at least 1")
    if not thick_for:
        raise ValueError("thick_for must be nonempty")
    for t in thick_for:
        _check_not_aligned(t, avoid)
    out: list[Stage] = []
    prev_max = 0
    for n in range(1, stages + 1):
        m = thick_for[(n - 1) % len(thick_for)]
        G = cube(n, m.dim)
        threshold = n * n * prev_max
        try:
            x = find_avoiding_dilator(
                m, avoid, G, radius=radius, start=_start_radius(m, G, threshold),
                prefilter=_min_norm_filter(m, G, threshold), check_alignment=False,
            )
        except SearchExhausted as exc:
            raise SearchExhausted(
                f"stage {n}: {exc}", stage=n, constraint="avoiding and norm growth"
            ) from None
        H = FiniteSet(m.dim, _cube_image(m, n, x))
        sq = H.norms_sq()
        certs = {}
        for o in avoid:
            rep = verify_avoiding(H, G, o)
            certs[f"avoids:{_label(o)}"] = rep.to_dict()
        out.append(Stage(n, m, x, H, min(sq), max(sq), certs))
        prev_max = max(sq)
    return StagedSet("thick-avoiding", out, list(avoid))


def build_ipstar_nonsyndetic(mults: Sequence[Multiplication], stages: int, *, radius: int | None = None) -> StagedSet:
    """Stages ``H_n = cube(n) *_n x_n`` (multiplications used in turn) with
    ``min |cube(2n) *_n x_n| > n`` and ``min |H_n| > 2 max |H_{n-1}|``."""
    if stages < 1:
        raise ValueError("stages must be at least 1")
    if not mults:
        raise ValueError("mults must be nonempty")
    limit = search_radius(radius)
    out: list[Stage] = []
    prev_max = 0
    for n in range(1, stages + 1):
        m = mults[(n - 1) % len(mults)]
        require_proper(m, "build_ipstar_nonsyndetic")
        d = m.dim
        G = cube(n, d)
        G2 = cube(2 * n, d)
        threshold = 4 * prev_max
        start = max(_start_radius(m, G, threshold), _start_radius(m, G2, n * n))
        grow, spread = _min_norm_filter(m, G, threshold), _min_norm_filter(m, G2, n * n)

        def both(shell, grow=grow, spread=spread):
            return [a and b for a, b in zip(grow(shell), spread(shell))]

        chosen = next(iter(_filtered_candidates(d, start, limit, both)), None)
        if chosen is None:
            raise SearchExhausted(f"stage {n}: no dilator with sup-norm <= {limit}", stage=n, constraint="norm growth")
        H = FiniteSet(d, _cube_image(m, n, chosen))
        sq = H.norms_sq()
        out.append(Stage(n, m, chosen, H, min(sq), max(sq)))
        prev_max = max(sq)
    return StagedSet("ipstar-nonsyndetic", out)


@dataclass
class DifferenceReport:
    """Incidences ``b, b + x in B`` for all nonzero x in a cube window.

    ``cutoff`` follows the finiteness argument: N(x) is the least stage index
    with ``N >= |x|`` and ``min |H_N| > |x|`` (None when no built stage
    qualifies).  ``past_cutoff`` lists incidences touching a stage >= N(x);
    ``cross_stage`` lists incidences between two different stages, and
    ``cross_unexplained`` those violating the necessary condition
    ``min |H_max(n,m)| < 2 |x|`` that any cross-stage incidence must meet.
    """

    window: int
    shifts_checked: int
    max_count: int
    incidences: int
    cross_stage: list
    past_cutoff: list
    cross_unexplained: list
    per_stage: dict

    @property
    def single_stage(self) -> bool:
        return not self.cross_stage

    @property
    def cutoff_respected(self) -> bool:
        return not self.past_cutoff and not self.cross_unexplained

    def to_dict(self) -> dict:
        return {
            "window": self.window,
            "shifts_checked": self.shifts_checked,
            "max_count": self.max_count,
            "incidences": self.incidences,
            "single_stage": self.single_stage,
            "cutoff_respected": self.cutoff_respected,
            "cross_stage_total": len(self.cross_stage),
            "cross_stage": self.cross_stage[:20],
            "past_cutoff": self.past_cutoff[:20],
            "cross_unexplained": self.cross_unexplained[:20],
            "per_stage_pairs": {f"{a}-{b}": v for (a, b), v in sorted(self.per_stage.items())},
        }


def difference_cutoff(staged: StagedSet, x: Sequence[int]) -> int | None:
    """Least built stage N with ``N^2 >= |x|^2`` and ``min |H_N|^2 > |x|^2``."""
    x2 = norm2_sq(x)
    for s in staged.stages:
        if s.n * s.n >= x2 and s.min_sq > x2:
            return s.n
    return None


def verify_difference_bound(staged: StagedSet, window: int = 20) -> DifferenceReport:
    """For every nonzero x in cube(window), list all b in B with b + x in B
    (B the union of the stages) and classify each incidence by its pair of
    stages."""
    B = staged.union()
    stage = staged.stage_of()
    mins = {s.n: s.min_sq for s in staged.stages}
    xs = cube(window, B.dim)
    elems = list(B.elements)
    counts = kernels.shift_counts(elems, xs, elems)
    cross, past, unexplained = [], [], []
    per_pair: dict[tuple, int] = {}
    total = 0
    for x, c in zip(xs, counts):
        if not c:
            continue
        x2 = norm2_sq(x)
        cut = difference_cutoff(staged, x)
        for b in elems:
            bx = tuple(p + q for p, q in zip(b, x))
            if bx not in B:
                continue
            total += 1
            n, m = stage[b], stage[bx]
            per_pair[(n, m)] = per_pair.get((n, m), 0) + 1
            rec = {"x": list(x), "b": list(b), "stages": [n, m]}
            if n != m:
                cross.append(rec)
                if not mins[max(n, m)] < 4 * x2:
                    unexplained.append(rec)
            if cut is not None and max(n, m) >= cut:
                past.append(rec)
    return DifferenceReport(window, len(xs), max(counts, default=0), total, cross, past, unexplained, per_pair)


# ---------------------------------------------------------------------------
# IP separating sequences


@dataclass
class IpSequence:
    generators: list[tuple[int, ...]]
    scale_log: list[int]
    candidates: list[tuple[int, ...]]
    kind: str
    mults: tuple

    def to_dict(self, ref: Callable[[Multiplication], str] = _label) -> dict:
        return {
            "kind": self.kind,
            "generators": [list(g) for g in self.generators],
            "scale_log": self.scale_log,
            "candidates": [list(c) for c in self.candidates],
            "mults": [ref(m) for m in self.mults],
        }


def _subsets(k: int) -> list[tuple[int, ...]]:
    """All subsets of range(k) (including the empty one) as increasing tuples."""
    return [c for r in range(k + 1) for c in itertools.combinations(range(k), r)]


def _products(m: Multiplication, gens: list) -> dict:
    out: dict = {}
    for alpha in _subsets(len(gens)):
        if not alpha:
            continue
        out[alpha] = gens[alpha[0]] if len(alpha) == 1 else multiply(m, out[alpha[:-1]], gens[alpha[-1]])
    return out


class _SepTables:
    """Representation tables for increasing-index products of a generator list."""

    def __init__(self, mA: Multiplication, mB: Multiplication | None, gens: list):
        d = mA.dim
        self.d = d
        self.idn = RatMatrix.identity(d)
        self.subsets = _subsets(len(gens))
        self.x = _products(mA, gens)
        self.P = {a: (left_rep(mA, self.x[a]) if a else self.idn) for a in self.subsets}
        self.PR = {a: (right_rep(mA, self.x[a]) if a else self.idn) for a in self.subsets}
        if mB is not None:
            self.Phi = {a: left_rep(mB, self.x[a]) for a in self.subsets if a}
            self.PhiR = {a: right_rep(mB, self.x[a]) for a in self.subsets if a}


def _sep_equations_false(mA: Multiplication, mB: Multiplication, gens: list) -> bool:
    """True iff every E, F, F_r, G, G_r equation is false for ``gens``."""
    t = _SepTables(mA, mB, gens)
    nonempty = [a for a in t.subsets if a]
    xs = set(t.x.values())
    for a in nonempty:
        for b in nonempty:
            if multiply(mB, t.x[a], t.x[b]) in xs:
                return False
    Ps = set(t.P.values())
    for a in nonempty:
        for b in t.subsets:
            if t.Phi[a] @ t.P[b] in Ps or t.PhiR[a] @ t.P[b] in Ps:
                return False
    d = t.d
    basis = [mA.basis(i) for i in range(d)]
    phis = [left_rep(mB, e) for e in basis]
    phirs = [right_rep(mB, e) for e in basis]
    psis = [left_rep(mA, e) for e in basis]
    for a in t.subsets:
        composed = [t.P[a] @ p for p in psis]
        if composed == phis or composed == phirs:
            return False
    return True


def _outside_sep_nulls(mA: Multiplication, mB: Multiplication, t: _SepTables, z) -> bool:
    nonempty = [a for a in t.subsets if a]
    # N1: phi(x_a) psi(x_b) z == psi(x_c) z (and the right-rep variant), a nonempty
    s1 = {t.P[c] @ z for c in t.subsets}
    for a in nonempty:
        for b in t.subsets:
            pz = t.P[b] @ z
            if t.Phi[a] @ pz in s1 or t.PhiR[a] @ pz in s1:
                return False
    # N2: phi(psi(x_a) z) psi(x_b) == psi(x_c) psi(z) (and the right-rep variant)
    pz = left_rep(mA, z)
    s2 = {t.P[c] @ pz for c in t.subsets}
    for a in t.subsets:
        u = t.P[a] @ z
        L, R = left_rep(mB, u), right_rep(mB, u)
        for b in t.subsets:
            if L @ t.P[b] in s2 or R @ t.P[b] in s2:
                return False
    return True


def _scale_search(z, ok: Callable[[tuple], bool], max_scale: int, stage: int) -> tuple[tuple, int]:
    for c in range(1, max_scale + 1):
        x = tuple(c * t for t in z)
        if ok(x):
            return x, c
    raise SearchExhausted(
        f"step {stage}: no scale c <= {max_scale} falsifies the remaining equations", stage=stage, constraint="scaling"
    )


def build_ip_separating(
    mA: Multiplication, mB: Multiplication, n: int, *, radius: int | None = None, max_scale: int = 10 ** 4
) -> IpSequence:
    """Generators x_1..x_n with ``x_a (.) x_b != x_c`` for all nonempty a, b, c.

    Each step takes the first candidate z outside the finitely many kernels of
    the separating linear maps, then the least c >= 1 for which every tracked
    equation is false at ``x_n = c z``."""
    if mA.dim != mB.dim:
        raise DimensionMismatch("dimensions differ")
    if mB == mA or mB == opposite(mA):
        raise HypothesisViolation("the second multiplication equals the first or its opposite")
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = search_radius(radius)
    gens: list = []
    scales, cands = [], []
    for k in range(1, n + 1):
        t = _SepTables(mA, mB, gens)
        z = None
        for v in vectors_by_norm(mA.dim):
            if max(map(abs, v)) > limit:
                break
            if _outside_sep_nulls(mA, mB, t, v):
                z = v
                break
        if z is None:
            raise SearchExhausted(f"step {k}: no candidate with sup-norm <= {limit}", stage=k, constraint="null sets")
        x, c = _scale_search(z, lambda x: _sep_equations_false(mA, mB, gens + [x]), max_scale, k)
        gens.append(x)
        scales.append(c)
        cands.append(z)
    return IpSequence(gens, scales, cands, "ip-separating", (mA, mB))


@dataclass
class IpVerification:
    ok: bool
    triples: int
    solutions: list

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "triples": self.triples, "solutions": self.solutions[:50]}


def verify_ip_separating(mA: Multiplication, mB: Multiplication, gens: Sequence[Sequence[int]]) -> IpVerification:
    """Exhaustive check that ``x_a (.) x_b = x_c`` has no solution in
    nonempty index sets (products ``x_a`` taken under mA)."""
    gens = [tuple(g) for g in gens]
    x = _products(mA, gens)
    idx: dict = {}
    for c, v in x.items():
        idx.setdefault(v, []).append(c)
    sols = []
    for a in x:
        for b in x:
            for c in idx.get(multiply(mB, x[a], x[b]), ()):
                sols.append([list(a), list(b), list(c)])
    n = len(x)
    return IpVerification(not sols, n ** 3, sols)


def _order_state_ok(m: Multiplication, gens: list) -> bool:
    t = _SepTables(m, None, gens)
    nonempty = [a for a in t.subsets if a]
    idx: dict = {}
    for c in nonempty:
        idx.setdefault(t.x[c], []).append(c)
    for a in nonempty:
        for b in nonempty:
            if multiply(m, t.x[a], t.x[b]) in idx and not max(a) < min(b):
                return False
    Ps = set(t.P.values())
    for a in t.subsets:
        for b in nonempty:
            if t.P[a] @ t.PR[b] in Ps:
                return False
    for a in nonempty:
        for b in nonempty:
            if t.P[a] @ t.P[b] == t.idn:
                return False
    return True


def _outside_order_nulls(m: Multiplication, t: _SepTables, z) -> bool:
    nonempty = [a for a in t.subsets if a]
    s1 = {t.P[c] @ z for c in t.subsets}
    for a in t.subsets:
        for b in nonempty:
            if t.P[a] @ (t.PR[b] @ z) in s1:
                return False
    pz, prz = left_rep(m, z), right_rep(m, z)
    s2 = {t.P[c] @ pz for c in t.subsets}
    for a in t.subsets:
        left = t.P[a] @ prz
        for b in t.subsets:
            if left @ t.PR[b] in s2:
                return False
    zt = tuple(z)
    for a in nonempty:
        for b in nonempty:
            if t.P[a] @ (t.P[b] @ z) == zt:
                return False
    return True


def build_ip_order_separating(
    m: Multiplication, n: int, *, radius: int | None = None, max_scale: int = 10 ** 4
) -> IpSequence:
    """Generators such that ``x_a * x_b = x_c`` forces ``max a < min b``."""
    if is_commutative(m):
        raise HypothesisViolation("the multiplication is commutative, so it equals its opposite")
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = search_radius(radius)
    gens: list = []
    scales, cands = [], []
    for k in range(1, n + 1):
        t = _SepTables(m, None, gens)
        z = None
        for v in vectors_by_norm(m.dim):
            if max(map(abs, v)) > limit:
                break
            if _outside_order_nulls(m, t, v):
                z = v
                break
        if z is None:
            raise SearchExhausted(f"step {k}: no candidate with sup-norm <= {limit}", stage=k, constraint="null sets")
        x, c = _scale_search(z, lambda x: _order_state_ok(m, gens + [x]), max_scale, k)
        gens.append(x)
        scales.append(c)
        cands.append(z)
    return IpSequence(gens, scales, cands, "ip-order", (m,))


def verify_ip_order(m: Multiplication, gens: Sequence[Sequence[int]]) -> IpVerification:
    """Every solution of ``x_a * x_b = x_c`` (nonempty a, b, c) has ``max a < min b``;
    ``solutions`` lists all solutions found, ``ok`` reports the ordering."""
    gens = [tuple(g) for g in gens]
    x = _products(m, gens)
    idx: dict = {}
    for c, v in x.items():
        idx.setdefault(v, []).append(c)
    sols = []
    ok = True
    for a in x:
        for b in x:
            for c in idx.get(multiply(m, x[a], x[b]), ()):
                ordered = max(a) < min(b)
                ok = ok and ordered
                sols.append({"alpha": list(a), "beta": list(b), "gamma": list(c), "ordered": ordered})
    return IpVerification(ok, len(x) ** 3, sols)


# ---------------------------------------------------------------------------
# norms and the 2-adic example


def _op_bound(M: RatMatrix) -> Fraction:
    rows = max(sum(abs(t) for t in r) for r in M.rows)
    cols = max(sum(abs(M.rows[i][j]) for i in range(M.nrows)) for j in range(M.ncols))
    return Fraction(max(rows, cols))


def norm_constant(m: Multiplication, y: Sequence[int]):
    """A constant K with ``K^-1 max(|x*y|, |y*x|) <= |x| <= K min(|x*y|, |y*x|)``.

    Uses ``|M|_2 <= max(|M|_1, |M|_inf)`` for the two representations of y
    and their inverses."""
    y = tuple(y)
    if not any(y):
        raise ValueError("y must be nonzero")
    require_proper(m, "norm_constant")
    L, R = left_rep(m, y), right_rep(m, y)
    K = max(_op_bound(L), _op_bound(R), _op_bound(L.inverse()), _op_bound(R.inverse()))
    return int(K) if K.denominator == 1 else K


def v2_example(exponent: int = 12) -> dict:
    """Exhaustive 2-adic sweep over nonzero x, y in ``[-2^e, 2^e]``."""
    lo, hi = -(2 ** exponent), 2 ** exponent
    bad_even, bad_odd, pairs = kernels.v2_pair_sweep(lo, hi)
    return {
        "window": [lo, hi],
        "pairs": pairs,
        "even_even_with_even_2xy": bad_even,
        "odd_odd_with_odd_xy": bad_odd,
        "ok": bad_even == 0 and bad_odd == 0,
        "backend": kernels.BACKEND,
    }
