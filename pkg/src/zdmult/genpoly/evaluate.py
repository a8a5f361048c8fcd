"""Certified evaluation of generalized polynomials at integer points."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from ..errors import DimensionMismatch, StraddleError
from ..largeness import INCONCLUSIVE, WITNESSED, Box, FiniteSet, WitnessReport, fs_set
from .expr import Add, Atom, Const, Frac, GenPolyExpr, LinearForm, Mul, Node, parse
from .intervals import IntervalValue, Iv, Straddle, e_interval, pi_interval, root_interval

DEFAULT_PRECISION = 128
MAX_PRECISION = 2048

ExprLike = Union[str, GenPolyExpr]


def _expr(f: ExprLike, dim: int | None = None) -> GenPolyExpr:
    return parse(f, dim) if isinstance(f, str) else f


def _point(f: GenPolyExpr, x) -> tuple[int, ...]:
    pt = (x,) if isinstance(x, int) else tuple(x)
    if len(pt) != f.dim:
        raise DimensionMismatch(f"expression has {f.dim} variable(s), point has {len(pt)} coordinate(s)")
    return pt


@lru_cache(maxsize=4096)
def _atom_iv(a: Atom, p: int) -> Iv:
    if a.kind == "pi":
        return pi_interval(p)
    if a.kind == "e":
        return e_interval(p)
    return root_interval(a.k, a.j, p)


@lru_cache(maxsize=4096)
def _const_iv(c: Const, p: int) -> Iv:
    iv = Iv.of_fraction(c.rational, p)
    for a in c.atoms:
        iv = iv * _atom_iv(a, p)
    return iv


def _times_int(iv: Iv, n: int) -> Iv:
    a, b = iv.lo * n, iv.hi * n
    return Iv(min(a, b), max(a, b), iv.p)


def _ev(node: Node, x: tuple[int, ...], p: int) -> Iv:
    if isinstance(node, LinearForm):
        return _times_int(_const_iv(node.coeff, p), x[node.var])
    if isinstance(node, Add):
        return _ev(node.left, x, p) + _ev(node.right, x, p)
    if isinstance(node, Mul):
        return _ev(node.left, x, p) * _ev(node.right, x, p)
    if isinstance(node, Frac):
        return _ev(node.child, x, p).frac()
    raise TypeError(f"unknown node {node!r}")


def _adaptive(f: GenPolyExpr, x: tuple[int, ...], precision: int, max_precision: int) -> Iv:
    p = precision
    while True:
        try:
            return _ev(f.root, x, p)
        except Straddle:
            if p * 2 > max_precision:
                raise StraddleError(
                    f"fractional part straddles an integer at {p} bits for x = {list(x)}", precision=p
                ) from None
            p *= 2


def evaluate(f: ExprLike, x, precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION) -> IntervalValue:
    """Enclosure of f(x); fractional parts that straddle an integer trigger
    retries at doubled precision up to ``max_precision``."""
    f = _expr(f)
    return _adaptive(f, _point(f, x), precision, max_precision).value()


def nearest_int_distance(
    f: ExprLike, x, precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION
) -> IntervalValue:
    """Enclosure of the distance from f(x) to the nearest integer, inside [0, 1/2]."""
    f = _expr(f)
    return _adaptive(f, _point(f, x), precision, max_precision).dist_to_int().value()


def _as_fraction(eps) -> Fraction:
    # floats are read through their shortest decimal text: 0.01 means 1/100
    return Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)


def _classify(f: GenPolyExpr, x, eps: Fraction, precision: int, max_precision: int) -> tuple[str, int, IntervalValue | None]:
    """'in' (certified below eps), 'out' (certified at or above), or 'straddle'."""
    p = precision
    last = None
    while p <= max_precision:
        try:
            d = _adaptive(f, x, p, p).dist_to_int().value()
        except StraddleError:
            p *= 2
            continue
        last = d
        if d.upper < eps:
            return "in", p, d
        if d.lower >= eps:
            return "out", p, d
        p *= 2
    return "straddle", p // 2, last


@dataclass
class ScanResult:
    members: FiniteSet
    excluded: int
    straddles: list = field(default_factory=list)
    epsilon: Fraction = Fraction(0)
    box: Box | None = None
    max_precision_used: int = DEFAULT_PRECISION

    def to_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "box": self.box.to_dict() if self.box else None,
            "members": [list(v) for v in self.members],
            "count": len(self.members),
            "excluded": self.excluded,
            "straddles": self.straddles,
            "max_precision_used": self.max_precision_used,
        }


def _box(box, dim: int) -> Box:
    if isinstance(box, Box):
        return box
    box = list(box)
    if len(box) == 2 and all(isinstance(t, int) for t in box):
        return Box((box[0],) * dim, (box[1],) * dim)
    return Box(tuple(b[0] for b in box), tuple(b[1] for b in box))


def return_set_scan(
    f: ExprLike,
    epsilon,
    box,
    *,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> ScanResult:
    """All points of ``box`` with certified ``||f(x)|| < epsilon``.

    ``box`` is a :class:`Box`, a pair ``(lo, hi)`` applied to every
    coordinate, or a list of per-coordinate pairs.  Points whose enclosure
    cannot be resolved even at ``max_precision`` are listed as straddles and
    belong to neither side."""
    f = _expr(f)
    eps = _as_fraction(epsilon)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2]")
    B = _box(box, f.dim)
    if B.dim != f.dim:
        raise DimensionMismatch("box dimension differs from the number of variables")
    members, straddles = [], []
    excluded = 0
    top = precision
    for x in B.points():
        verdict, p, d = _classify(f, x, eps, precision, max_precision)
        top = max(top, p)
        if verdict == "in":
            members.append(x)
        elif verdict == "out":
            excluded += 1
        else:
            straddles.append({"x": list(x), "enclosure": d.to_dict() if d else None})
    return ScanResult(FiniteSet(f.dim, members), excluded, straddles, eps, B, top)


def fs_intersection_check(
    f: ExprLike,
    epsilon,
    generators: Sequence,
    mode: str = "additive",
    *,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> WitnessReport:
    """Which finite sums of the generators have certified ``||f|| < epsilon``.

    This is evidence about one FS set only."""
    if mode != "additive":
        raise ValueError("only additive FS sets are supported")
    f = _expr(f)
    gens = [(g,) if isinstance(g, int) else tuple(g) for g in generators]
    if not gens or any(not any(g) for g in gens):
        raise ValueError("generators must be nonzero")
    eps = _as_fraction(epsilon)
    fs = fs_set(gens)
    below, above, straddles = [], [], []
    for x in fs:
        verdict, _, d = _classify(f, _point(f, x), eps, precision, max_precision)
        rec = {"x": list(x), "distance": d.to_dict() if d else None}
        (below if verdict == "in" else above if verdict == "out" else straddles).append(rec)
    return WitnessReport(
        property="fs-intersection",
        verdict=WITNESSED if below else INCONCLUSIVE,
        witness=below[0] if below else {},
        window=f"FS({', '.join(str(list(g)) for g in gens)})",
        details={
            "epsilon": str(eps),
            "fs_size": len(fs),
            "below": below,
            "above_count": len(above),
            "straddles": straddles,
        },
    )
