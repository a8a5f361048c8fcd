"""Finite-window largeness checks: FP/FS sets, syndetic/thick/PS* witnesses,
IP_r containment and a density lower bound.

Every search reports one of three verdicts.  ``witnessed`` means the
returned data re-verifies by direct evaluation.  ``refuted-on-window`` means
the search was exhaustive over the stated window.  ``inconclusive`` means the
answer hinged on points whose membership is unknown (they fall outside the
window on which a finite set faithfully represents the ambient set).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from . import kernels
from .algebra import Multiplication, box_vectors, left_rep, multiply, product
from .errors import DimensionMismatch
from .linalg import solve_rational

WITNESSED = "witnessed"
REFUTED = "refuted-on-window"
INCONCLUSIVE = "inconclusive"

ADDITIVE = "additive"
Operation = Union[Multiplication, str]

Vec = tuple[int, ...]


def _vkey(v: Sequence[int]):
    return (max((abs(x) for x in v), default=0), tuple(v))


@dataclass(frozen=True)
class Box:
    """Integer box ``prod_k [lo_k, hi_k]``."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("box bounds differ in length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @classmethod
    def cube(cls, radius: int, dim: int) -> Box:
        return cls((-radius,) * dim, (radius,) * dim)

    @classmethod
    def interval(cls, lo: int, hi: int) -> Box:
        return cls((lo,), (hi,))

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __contains__(self, v) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, v, self.hi))

    def size(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= b - a + 1
        return n

    def points(self, exclude_zero: bool = False) -> list[Vec]:
        """Lexicographically ordered lattice points."""
        pts = itertools.product(*[range(a, b + 1) for a, b in zip(self.lo, self.hi)])
        if exclude_zero:
            return [p for p in pts if any(p)]
        return list(pts)

    def describe(self) -> str:
        return " x ".join(f"[{a},{b}]" for a, b in zip(self.lo, self.hi))

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}


def cube(n: int, dim: int) -> list[Vec]:
    """``{-n..n}^d`` without 0, ordered by sup-norm then lexicographically."""
    return list(box_vectors(dim, n))


class FiniteSet:
    """An explicit finite subset of Z^d, optionally tagged with a window on
    which it is a faithful restriction of some ambient set."""

    __slots__ = ("dim", "elements", "window", "_set")

    def __init__(self, dim: int, elements: Iterable[Sequence[int]] = (), window: Box | None = None):
        self.dim = dim
        uniq = {tuple(int(x) for x in e) for e in elements}
        for e in uniq:
            if len(e) != dim:
                raise DimensionMismatch(f"element {e} has wrong length for dimension {dim}")
        self.elements: tuple[Vec, ...] = tuple(sorted(uniq))
        self._set = frozenset(uniq)
        if window is not None and window.dim != dim:
            raise DimensionMismatch("window dimension mismatch")
        self.window = window

    def __contains__(self, v) -> bool:
        return tuple(v) in self._set

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Vec]:
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if isinstance(other, FiniteSet):
            return self._set == other._set and self.dim == other.dim
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"FiniteSet(dim={self.dim}, size={len(self)})"

    def as_set(self) -> frozenset:
        return self._set

    def knows(self, v) -> bool:
        """Whether membership of v is faithful (v lies in the window, or there is no window)."""
        return self.window is None or tuple(v) in self.window

    def status(self, v) -> int:
        """1 = member, 0 = not a member, -1 = unknown (outside the window)."""
        if tuple(v) in self._set:
            return 1
        return 0 if self.knows(v) else -1

    def without_zero(self) -> FiniteSet:
        return FiniteSet(self.dim, (e for e in self.elements if any(e)), self.window)

    def union(self, other: FiniteSet) -> FiniteSet:
        return FiniteSet(self.dim, self._set | other.as_set())

    def norms_sq(self) -> list[int]:
        return [sum(x * x for x in e) for e in self.elements]

    # text format -------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"# dim: {self.dim}"]
        if self.window is not None:
            lines.append("# window: " + " ".join(f"{a}..{b}" for a, b in zip(self.window.lo, self.window.hi)))
        lines.extend(" ".join(str(x) for x in e) for e in self.elements)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, dim: int | None = None) -> FiniteSet:
        rows = []
        window_spec = None
        declared = None
        for raw in text.splitlines():
            line = raw.strip()
            if line.startswith("#"):
                body = line[1:].strip()
                if body.lower().startswith("window:"):
                    window_spec = body.split(":", 1)[1].split()
                elif body.lower().startswith("dim:"):
                    declared = int(body.split(":", 1)[1])
                continue
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append(tuple(int(t) for t in line.replace(",", " ").split()))
        d = dim or declared or (len(rows[0]) if rows else None)
        if d is None:
            raise ValueError("cannot infer dimension of an empty set; add a '# dim:' line")
        window = None
        if window_spec:
            if len(window_spec) == 1 and ".." not in window_spec[0]:
                window = Box.cube(int(window_spec[0]), d)
            else:
                lo, hi = [], []
                for part in window_spec:
                    a, b = part.split("..")
                    lo.append(int(a))
                    hi.append(int(b))
                window = Box(tuple(lo), tuple(hi))
        return cls(d, rows, window)

    @classmethod
    def read(cls, path: str, dim: int | None = None) -> FiniteSet:
        with open(path) as fh:
            return cls.from_text(fh.read(), dim)


class PredicateSet:
    """A subset of Z^d given by an exact membership test.

    ``mask`` may supply a vectorized test on an ``(n, d)`` int64 array."""

    def __init__(
        self,
        dim: int,
        contains: Callable[[Vec], bool],
        description: str = "",
        mask: Callable[[np.ndarray], np.ndarray] | None = None,
    ):
        self.dim = dim
        self._contains = contains
        self._mask = mask
        self.description = description
        self.window = None

    def __contains__(self, v) -> bool:
        return bool(self._contains(tuple(v)))

    def knows(self, v) -> bool:
        return True

    def status(self, v) -> int:
        return 1 if v in self else 0

    def mask(self, points: np.ndarray) -> np.ndarray:
        if self._mask is not None:
            return np.asarray(self._mask(points), dtype=bool)
        return np.array([self._contains(tuple(p)) for p in points.tolist()], dtype=bool)

    def __repr__(self) -> str:
        return f"PredicateSet({self.description or 'predicate'}, dim={self.dim})"


AnySet = Union[FiniteSet, PredicateSet]


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    return (n & -n).bit_length() - 1


def v2_parity_set(parity: int) -> PredicateSet:
    """Nonzero integers whose 2-adic valuation has the given parity (0 even, 1 odd)."""

    def contains(v):
        return v[0] != 0 and two_adic_valuation(v[0]) % 2 == parity

    def mask(P):
        a = np.abs(P[:, 0])
        low = a & -a
        nz = a != 0
        val = np.zeros(len(a), dtype=np.int64)
        val[nz] = np.log2(low[nz].astype(np.float64)).astype(np.int64)
        return nz & ((val & 1) == parity)

    name = "even" if parity == 0 else "odd"
    return PredicateSet(1, contains, f"nonzero n with {name} 2-adic valuation", mask)


@dataclass
class WitnessReport:
    property: str
    verdict: str
    witness: dict = field(default_factory=dict)
    window: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "verdict": self.verdict,
            "witness": self.witness,
            "window": self.window,
            "details": self.details,
        }

    @property
    def witnessed(self) -> bool:
        return self.verdict == WITNESSED


# ---------------------------------------------------------------------------
# FP / FS sets


def _op_apply(op: Operation, a: Sequence, b: Sequence) -> Vec:
    if op == ADDITIVE:
        return tuple(x + y for x, y in zip(a, b))
    return multiply(op, a, b)


def fp_set(m: Multiplication, gens: Sequence[Sequence[int]]) -> FiniteSet:
    """All increasing-index products ``s_i1 * ... * s_ik`` (k >= 1)."""
    gens = [tuple(g) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    for g in gens:
        if not any(g):
            raise ValueError("generators must be nonzero")
    elems: list[Vec] = []
    for k in range(1, len(gens) + 1):
        for idx in itertools.combinations(range(len(gens)), k):
            elems.append(tuple(product(m, [gens[i] for i in idx])))
    return FiniteSet(m.dim, elems)


def fs_set(gens: Sequence[Sequence[int]]) -> FiniteSet:
    """All sums over nonempty index sets."""
    gens = [tuple(g) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    d = len(gens[0])
    elems = []
    for k in range(1, len(gens) + 1):
        for idx in itertools.combinations(range(len(gens)), k):
            elems.append(tuple(sum(gens[i][c] for i in idx) for c in range(d)))
    return FiniteSet(d, elems)


def fp_products_by_subset(op: Operation, gens: Sequence[Sequence[int]]) -> dict[tuple[int, ...], Vec]:
    """Map each nonempty increasing index tuple to its product (or sum)."""
    gens = [tuple(g) for g in gens]
    out: dict[tuple[int, ...], Vec] = {}
    for k in range(1, len(gens) + 1):
        for idx in itertools.combinations(range(len(gens)), k):
            if k == 1:
                out[idx] = gens[idx[0]]
            else:
                out[idx] = _op_apply(op, out[idx[:-1]], gens[idx[-1]])
    return out


# ---------------------------------------------------------------------------
# membership helpers


def _status_many(A: AnySet, points: list[Vec]) -> list[int]:
    if not points:
        return []
    if isinstance(A, PredicateSet):
        return [1 if b else 0 for b in A.mask(np.array(points, dtype=np.int64))]
    hits = kernels.member_mask(points, list(A.elements)) if len(A) else [False] * len(points)
    if A.window is None:
        return [1 if h else 0 for h in hits]
    return [1 if h else (0 if p in A.window else -1) for h, p in zip(hits, points)]


def _dim_of(A: AnySet) -> int:
    return A.dim


def _check_op(op: Operation, d: int) -> None:
    if op != ADDITIVE and op.dim != d:
        raise DimensionMismatch(f"multiplication has dimension {op.dim}, set has {d}")


# ---------------------------------------------------------------------------
# syndetic


def syndetic_witness(
    A: AnySet,
    op: Operation,
    shift_candidates: Sequence[Sequence[int]],
    window: Box,
    kmax: int = 3,
) -> WitnessReport:
    """Search ``{s_1..s_k}`` (k <= kmax) among the candidates such that every
    window point w has ``s_i * w`` (or ``s_i + w``) in A for some i.

    Multiplicative mode skips 0, which is not in the semigroup."""
    d = _dim_of(A)
    _check_op(op, d)
    pts = window.points(exclude_zero=op != ADDITIVE)
    cands = [tuple(s) for s in shift_candidates]
    covered, unknown = [], []
    for s in cands:
        imgs = [_op_apply(op, s, w) for w in pts]
        st = _status_many(A, imgs)
        covered.append({i for i, t in enumerate(st) if t == 1})
        unknown.append({i for i, t in enumerate(st) if t == -1})
    full = set(range(len(pts)))
    possible = False
    for k in range(1, min(kmax, len(cands)) + 1):
        for combo in itertools.combinations(range(len(cands)), k):
            cov = set().union(*(covered[i] for i in combo))
            if cov == full:
                shifts = [list(cands[i]) for i in combo]
                # independent re-check
                for w in pts:
                    if not any(A.status(_op_apply(op, cands[i], w)) == 1 for i in combo):
                        raise AssertionError("syndetic witness failed re-verification")
                return WitnessReport(
                    "syndetic", WITNESSED, {"shifts": shifts}, window.describe(), {"k": k, "window_points": len(pts)}
                )
            if not possible and cov.union(*(unknown[i] for i in combo)) == full:
                possible = True
    verdict = INCONCLUSIVE if possible else REFUTED
    best = max(range(len(cands)), key=lambda i: len(covered[i]), default=None)
    details = {"kmax": kmax, "candidates": len(cands), "window_points": len(pts)}
    if best is not None:
        details["best_single_shift"] = list(cands[best])
        details["best_single_coverage"] = len(covered[best])
    return WitnessReport("syndetic", verdict, {}, window.describe(), details)


# ---------------------------------------------------------------------------
# thick


def _solve_left(m: Multiplication, f: Sequence[int], a: Sequence[int]) -> Vec | None:
    """Integral x with ``f * x = a``, if any."""
    x = solve_rational(left_rep(m, f), a)
    if x is None or not all(isinstance(t, int) for t in x):
        return None
    return tuple(x)


def thick_witness(A: AnySet, op: Operation, F: Sequence[Sequence[int]], search_box: Box | None = None) -> WitnessReport:
    """Find x with ``F * x`` (or ``F + x``) contained in A.

    Candidates come from exact division: x must solve ``f0 * x = a`` for the
    first f0 in F and some a in A, so the search is complete for a finite A.
    """
    if isinstance(A, PredicateSet):
        raise TypeError("thick_witness needs an explicit finite set")
    d = A.dim
    _check_op(op, d)
    F = [tuple(f) for f in F]
    window = search_box.describe() if search_box else "all of Z^d (exact division candidates)"
    if not F:
        x = next(box_vectors(d, 1))
        return WitnessReport("thick", WITNESSED, {"x": list(x)}, window, {"note": "F is empty"})
    f0 = F[0]
    cands = set()
    for a in A:
        if op == ADDITIVE:
            x = tuple(ai - fi for ai, fi in zip(a, f0))
        else:
            x = _solve_left(op, f0, a)
            if x is None or not any(x):
                continue
        if search_box is not None and x not in search_box:
            continue
        cands.add(x)
    unknown = False
    for x in sorted(cands, key=_vkey):
        st = [A.status(_op_apply(op, f, x)) for f in F]
        if all(t == 1 for t in st):
            return WitnessReport("thick", WITNESSED, {"x": list(x)}, window, {"candidates": len(cands)})
        if all(t != 0 for t in st):
            unknown = True
    return WitnessReport("thick", INCONCLUSIVE if unknown else REFUTED, {}, window, {"candidates": len(cands)})


# ---------------------------------------------------------------------------
# PS* via the combinatorial characterization


def psstar_window_check(
    A: AnySet, m: Multiplication, F: Sequence[Sequence[int]], N: int, x_samples: Sequence[Sequence[int]]
) -> WitnessReport:
    """For each sample x search z in cube(N) with ``F * z * x`` inside A."""
    d = A.dim
    _check_op(m, d)
    F = [tuple(f) for f in F]
    zs = cube(N, d)
    if not F:
        return WitnessReport("psstar", WITNESSED, {"per_sample": {}}, f"cube({N})", {"note": "F is empty"})
    mats = [left_rep(m, f) for f in F]
    found: dict[str, list[int]] = {}
    failed: list[list[int]] = []
    unknown: list[list[int]] = []
    for x in x_samples:
        x = tuple(x)
        shifts = [multiply(m, z, x) for z in zs]
        hit = None
        if isinstance(A, FiniteSet) and A.window is None and m.integral:
            counts = kernels.dilate_counts([M.tolist() for M in mats], shifts, list(A.elements))
            for z, c in zip(zs, counts):
                if c == len(F):
                    hit = z
                    break
            maybe = False
        else:
            maybe = False
            for z, s in zip(zs, shifts):
                st = _status_many(A, [tuple(M @ s) for M in mats])
                if all(t == 1 for t in st):
                    hit = z
                    break
                if all(t != 0 for t in st):
                    maybe = True
        if hit is not None:
            found[str(list(x))] = list(hit)
        elif maybe:
            unknown.append(list(x))
        else:
            failed.append(list(x))
    if failed:
        verdict = REFUTED
    elif unknown:
        verdict = INCONCLUSIVE
    else:
        verdict = WITNESSED
    return WitnessReport(
        "psstar",
        verdict,
        {"per_sample": found},
        f"cube({N})",
        {"failed_samples": failed, "unknown_samples": unknown, "samples": len(x_samples)},
    )


# ---------------------------------------------------------------------------
# IP_r containment


def _images_under(op: Operation, p: Vec, C: np.ndarray) -> np.ndarray | None:
    """Rows ``p * c`` for c in C as int64, or None if overflow is possible."""
    if op == ADDITIVE:
        if int(np.abs(C).max(initial=0)) + max(abs(x) for x in p) >= 2 ** 62:
            return None
        return C + np.array(p, dtype=np.int64)
    M = left_rep(op, p)
    if not M.is_integral():
        return None
    Ml = np.array(M.tolist(), dtype=object)
    bound = int(np.abs(Ml).max()) * int(np.abs(C).max(initial=0)) * len(p)
    if bound >= 2 ** 62:
        return None
    return C @ np.array(M.tolist(), dtype=np.int64).T


def _status_array(A: AnySet, P: np.ndarray) -> np.ndarray:
    if isinstance(A, PredicateSet):
        return A.mask(P).astype(np.int8)
    pts = [tuple(r) for r in P.tolist()]
    return np.array(_status_many(A, pts), dtype=np.int8)


def contains_ipr(
    A: AnySet,
    op: Operation,
    r: int,
    gen_box: Box,
    *,
    max_tuples: int = 10 ** 6,
    max_r: int = 4,
) -> WitnessReport:
    """Exhaustive search for generators ``s_1..s_r`` in the box whose FP set
    (FS set in additive mode) lies inside A.

    Generators must themselves lie in A, so candidates are A's members inside
    the box.  Each extension step tests all candidates at once."""
    d = A.dim
    _check_op(op, d)
    if r < 1:
        raise ValueError("r must be at least 1")
    if r > max_r:
        raise ValueError(f"r = {r} exceeds the cap {max_r}")
    if isinstance(A, FiniteSet):
        cands = [e for e in A.elements if e in gen_box and (op == ADDITIVE or any(e))]
    else:
        pts = gen_box.points(exclude_zero=op != ADDITIVE)
        arr = np.array(pts, dtype=np.int64).reshape(len(pts), d)
        keep = A.mask(arr) if len(pts) else np.zeros(0, dtype=bool)
        cands = [p for p, k in zip(pts, keep) if k]
    cands.sort()
    n_tuples = len(cands) ** r
    if n_tuples > max_tuples:
        raise ValueError(f"search space {len(cands)}^{r} = {n_tuples} exceeds max_tuples={max_tuples}")
    C = np.array(cands, dtype=np.int64).reshape(len(cands), d)
    escaped = [0]
    visited = [0]

    def extend(P: list[Vec], mask: np.ndarray, depth: int) -> list[Vec] | None:
        # mask: candidates s for which every p * s is known to lie in A
        idxs = np.nonzero(mask)[0]
        for i in idxs:
            s = cands[i]
            visited[0] += 1
            newP = P + [s] + [_op_apply(op, p, s) for p in P]
            if depth == r:
                return [s]
            m2 = np.ones(len(cands), dtype=bool)
            ok = True
            for p in newP:
                imgs = _images_under(op, p, C)
                if imgs is None:
                    st = np.array([A.status(_op_apply(op, p, c)) for c in cands], dtype=np.int8)
                else:
                    st = _status_array(A, imgs)
                escaped[0] += int(np.count_nonzero((st == -1) & m2))
                m2 &= st == 1
                if not m2.any():
                    ok = False
                    break
            if not ok:
                continue
            rest = extend(newP, m2, depth + 1)
            if rest is not None:
                return [s] + rest
        return None

    start = np.ones(len(cands), dtype=bool)
    gens = extend([], start, 1) if cands else None
    details = {"candidates": len(cands), "r": r, "branches_visited": visited[0], "escaped_products": escaped[0]}
    if gens is not None:
        fp = fs_set(gens) if op == ADDITIVE else fp_set(op, gens)
        if not all(A.status(e) == 1 for e in fp):
            raise AssertionError("IP_r witness failed re-verification")
        return WitnessReport(f"IP_{r}", WITNESSED, {"generators": [list(g) for g in gens]}, gen_box.describe(), details)
    verdict = INCONCLUSIVE if escaped[0] else REFUTED
    return WitnessReport(f"IP_{r}", verdict, {}, gen_box.describe(), details)


# ---------------------------------------------------------------------------
# density


def density_estimate(
    A: AnySet, op: Operation, F: Sequence[Sequence[int]], sample_box: Box, *, with_shift: bool = False
):
    """``max_s |(F * s) & A| / |F|`` over shifts s in the box.

    Points of ``F * s`` whose membership is unknown count as misses, so the
    value is a lower bound for the upper Banach density along these shifts."""
    F = [tuple(f) for f in F]
    if not F:
        raise ValueError("F must be nonempty")
    d = A.dim
    _check_op(op, d)
    shifts = sample_box.points(exclude_zero=op != ADDITIVE)
    if isinstance(A, PredicateSet):
        counts = []
        for s in shifts:
            pts = np.array([_op_apply(op, f, s) for f in F], dtype=np.int64)
            counts.append(int(A.mask(pts).sum()))
    elif op == ADDITIVE:
        counts = kernels.shift_counts(F, shifts, list(A.elements))
    elif op.integral:
        mats = [left_rep(op, f).tolist() for f in F]
        counts = kernels.dilate_counts(mats, shifts, list(A.elements))
    else:
        counts = [sum(_op_apply(op, f, s) in A for f in F) for s in shifts]
    best = max(range(len(shifts)), key=lambda i: (counts[i], -i))
    val = Fraction(counts[best], len(F))
    if with_shift:
        return val, shifts[best]
    return val


def aligned_window_counts(
    A: AnySet, m1: Multiplication, m2: Multiplication, v, w, F: Sequence[Sequence[int]], xs: Sequence[Sequence[int]]
) -> list[tuple[int, int]]:
    """Pairs ``(|(F*v*x) & A|, |(F(.)w(.)x) & A|)`` for each x."""
    out = []
    for x in xs:
        left = {multiply(m1, multiply(m1, f, v), x) for f in F}
        right = {multiply(m2, multiply(m2, f, w), x) for f in F}
        out.append((sum(p in A for p in left), sum(p in A for p in right)))
    return out
