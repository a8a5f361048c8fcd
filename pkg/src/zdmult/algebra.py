"""Bilinear multiplications on Z^d (or Q^d) and their matrix representations.

A multiplication is stored as its structure-constant tensor ``sc`` with
``e_i * e_j = sum_k sc[i][j][k] e_k``.  The tensor is the single source of
truth: left/right representations, opposites and the GL_d(Q)-action are all
derived from it on demand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .errors import DimensionMismatch, NotProper
from .linalg import (
    RatMatrix,
    Scalar,
    Vector,
    denominator_lcm,
    kernel_rational,
    primitive,
    q,
    solve_rational,
    vec,
)

PROVEN_FREE = "proven-free"
UNKNOWN = "unknown"
WITNESS = "witness"
NONE_IN_BOX = "none-in-box"


@dataclass(frozen=True)
class ZeroDivisorStatus:
    kind: str
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    note: str = ""

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = [list(self.witness[0]), list(self.witness[1])]
        if self.note:
            out["note"] = self.note
        return out


Tensor = tuple[tuple[tuple[Scalar, ...], ...], ...]


def _freeze_tensor(sc) -> Tensor:
    t = tuple(tuple(tuple(q(x) for x in row) for row in plane) for plane in sc)
    d = len(t)
    if d < 1:
        raise ValueError("dimension must be at least 1")
    for plane in t:
        if len(plane) != d or any(len(row) != d for row in plane):
            raise DimensionMismatch("structure constants must form a d x d x d tensor")
    return t


@dataclass(frozen=True, eq=False)
class Multiplication:
    """A bilinear product on Z^d given by structure constants.

    Equality and hashing look only at the tensor; ``provenance`` records how
    the value was built (``("polynomial", coeffs)``, ``("quaternion",)``,
    ``("scaled_z", n)``, ``("raw",)`` or ``("acted", T, base)``).
    """

    dim: int
    sc: Tensor
    integral: bool
    assoc_checked: bool
    zero_divisor_status: ZeroDivisorStatus
    provenance: tuple
    label: str = ""
    notes: dict = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multiplication):
            return NotImplemented
        return self.sc == other.sc

    def __hash__(self) -> int:
        return hash(self.sc)

    def __repr__(self) -> str:
        name = self.label or self.provenance[0]
        return f"Multiplication({name}, d={self.dim})"

    @property
    def is_proper(self) -> bool:
        """True when the product is certified associative with no zero divisors."""
        return self.assoc_checked and self.zero_divisor_status.kind == PROVEN_FREE

    def basis(self, i: int) -> Vector:
        return tuple(1 if k == i else 0 for k in range(self.dim))

    def __call__(self, x, y) -> Vector:
        return multiply(self, x, y)


def make_multiplication(
    sc,
    provenance: tuple = ("raw",),
    *,
    zero_divisor_status: ZeroDivisorStatus | None = None,
    label: str = "",
    notes: dict | None = None,
) -> Multiplication:
    """Build a :class:`Multiplication`, checking associativity on all basis
    triples.  When no zero-divisor status is supplied, dimensions 1 and 2 are
    decided exactly and larger dimensions are left ``unknown``."""
    t = _freeze_tensor(sc)
    d = len(t)
    integral = all(isinstance(x, int) for plane in t for row in plane for x in row)
    m = Multiplication(
        dim=d,
        sc=t,
        integral=integral,
        assoc_checked=False,
        zero_divisor_status=ZeroDivisorStatus(UNKNOWN),
        provenance=provenance,
        label=label,
        notes=dict(notes or {}),
    )
    assoc = check_associative(m)
    status = zero_divisor_status
    if status is None:
        status = _decide_small_dim(m) if d <= 2 else ZeroDivisorStatus(UNKNOWN)
    return Multiplication(
        dim=d,
        sc=t,
        integral=integral,
        assoc_checked=assoc,
        zero_divisor_status=status,
        provenance=provenance,
        label=label,
        notes=dict(notes or {}),
    )


def _check_len(m: Multiplication, *vs) -> None:
    for v in vs:
        if len(v) != m.dim:
            raise DimensionMismatch(f"expected a vector of length {m.dim}, got {len(v)}")


def multiply(m: Multiplication, x: Sequence, y: Sequence) -> Vector:
    """Bilinear evaluation ``sum_{i,j} x_i y_j sc[i][j]``."""
    _check_len(m, x, y)
    d = m.dim
    out = [0] * d
    sc = m.sc
    for i, xi in enumerate(x):
        if not xi:
            continue
        plane = sc[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            row = plane[j]
            for k in range(d):
                if row[k]:
                    out[k] += c * row[k]
    return vec(out)


def product(m: Multiplication, factors: Sequence[Sequence]) -> Vector:
    """Left-to-right product ``f_1 * f_2 * ... * f_k`` (k >= 1)."""
    it = iter(factors)
    acc = tuple(next(it))
    for f in it:
        acc = multiply(m, acc, f)
    return acc


def left_rep(m: Multiplication, x: Sequence) -> RatMatrix:
    """Matrix of ``y -> x * y``; its j-th column is ``x * e_j``."""
    _check_len(m, x)
    d = m.dim
    rows = [[0] * d for _ in range(d)]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j in range(d):
            row = m.sc[i][j]
            for k in range(d):
                if row[k]:
                    rows[k][j] += xi * row[k]
    return RatMatrix(rows)


def right_rep(m: Multiplication, x: Sequence) -> RatMatrix:
    """Matrix of ``y -> y * x``; its j-th column is ``e_j * x``."""
    _check_len(m, x)
    d = m.dim
    rows = [[0] * d for _ in range(d)]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j in range(d):
            row = m.sc[j][i]
            for k in range(d):
                if row[k]:
                    rows[k][j] += xi * row[k]
    return RatMatrix(rows)


def check_associative(m: Multiplication) -> bool:
    d = m.dim
    basis = [m.basis(i) for i in range(d)]
    for i, j, k in itertools.product(range(d), repeat=3):
        lhs = multiply(m, m.sc[i][j], basis[k])
        rhs = multiply(m, basis[i], m.sc[j][k])
        if lhs != rhs:
            return False
    return True


def is_commutative(m: Multiplication) -> bool:
    d = m.dim
    return all(m.sc[i][j] == m.sc[j][i] for i in range(d) for j in range(i + 1, d))


def is_left_amenable(m: Multiplication) -> bool:
    """Left amenability of the semigroup ``(Z^d \\ {0}, *)``.

    For a proper multiplication this coincides with commutativity."""
    return is_commutative(m)


# ---------------------------------------------------------------------------
# zero divisors


def _norm_form_d2(m: Multiplication) -> tuple[Scalar, Scalar, Scalar]:
    """Coefficients (a, b, c) of det(left_rep(x)) = a x1^2 + b x1 x2 + c x2^2."""
    A = left_rep(m, (1, 0))
    B = left_rep(m, (0, 1))
    a = A.det()
    c = B.det()
    b = (A + B).det() - a - c
    return q(a), q(b), q(c)


def _rational_sqrt(x: Scalar) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _reduced(v: Sequence) -> tuple[int, ...]:
    """Integral multiple of v with content 1, keeping the sign of v."""
    p = primitive(v)
    first = next(c for c in v if c)
    return p if first > 0 else tuple(-c for c in p)


def _witness_for(m: Multiplication, x: Sequence) -> ZeroDivisorStatus:
    xi = _reduced(x)
    ker = kernel_rational(left_rep(m, xi))
    y = primitive(ker[0])
    return ZeroDivisorStatus(WITNESS, (xi, y))


def _decide_small_dim(m: Multiplication) -> ZeroDivisorStatus:
    d = m.dim
    if d == 1:
        if m.sc[0][0][0] != 0:
            return ZeroDivisorStatus(PROVEN_FREE, note="d=1, nonzero structure constant")
        return ZeroDivisorStatus(WITNESS, ((1,), (1,)))
    a, b, c = _norm_form_d2(m)
    if a == 0 and b == 0 and c == 0:
        return _witness_for(m, (1, 0))
    if a == 0:
        return _witness_for(m, (1, 0))
    disc = b * b - 4 * a * c
    root = _rational_sqrt(disc)
    if root is None:
        return ZeroDivisorStatus(PROVEN_FREE, note=f"norm form discriminant {disc} is not a rational square")
    t = (-b - root) / (2 * a)  # the smaller root when a > 0
    t2 = (-b + root) / (2 * a)
    t = min(t, t2)
    return _witness_for(m, (t, 1))


def zero_divisor_search(m: Multiplication, bound: int = 3) -> ZeroDivisorStatus:
    """Look for ``x, y != 0`` with ``x * y = 0``.

    Dimensions one and two are decided exactly through the norm form.  A
    stored ``proven-free`` certificate or witness is returned unchanged.  In
    higher dimension the box ``{-bound..bound}^d`` is searched for a singular
    left representation, giving either a witness or ``none-in-box``.
    """
    if m.zero_divisor_status.kind in (PROVEN_FREE, WITNESS):
        return m.zero_divisor_status
    if m.dim <= 2:
        return _decide_small_dim(m)
    for x in box_vectors(m.dim, bound):
        if left_rep(m, x).det() == 0:
            return _witness_for(m, x)
    return ZeroDivisorStatus(NONE_IN_BOX, note=f"no singular left representation in box radius {bound}")


def box_vectors(d: int, radius: int, *, include_zero: bool = False):
    """Vectors of ``{-radius..radius}^d`` ordered by sup-norm, then lexicographically."""
    if include_zero:
        yield (0,) * d
    for r in range(1, radius + 1):
        yield from shell_vectors(d, r)


def shell_vectors(d: int, r: int):
    """Lexicographically ordered vectors of sup-norm exactly ``r``."""
    if r == 0:
        yield (0,) * d
        return
    full = range(-r, r + 1)
    ends = (-r, r)

    def rec(k: int, hit: bool):
        if k == d - 1:
            for a in full if hit else ends:
                yield (a,)
            return
        for a in full:
            for rest in rec(k + 1, hit or abs(a) == r):
                yield (a,) + rest

    yield from rec(0, False)


def vectors_by_norm(d: int, start: int = 1):
    """Endless enumeration of nonzero vectors by sup-norm then lexicographically."""
    r = max(start, 1)
    while True:
        yield from shell_vectors(d, r)
        r += 1


# ---------------------------------------------------------------------------
# inverses and central scalars


def require_proper(m: Multiplication, what: str = "this operation") -> None:
    if not m.is_proper:
        raise NotProper(
            f"{what} requires a proper multiplication; zero-divisor status of {m!r} is "
            f"{m.zero_divisor_status.kind}"
        )


def _solve_left_rep_equation(m: Multiplication, target: RatMatrix, right: RatMatrix | None = None):
    """Solve ``left_rep(z) @ right = target`` for z (right defaults to Id)."""
    d = m.dim
    cols = []
    for i in range(d):
        P = left_rep(m, m.basis(i))
        if right is not None:
            P = P @ right
        cols.append(P.vectorize())
    A = RatMatrix.from_columns(cols)
    return solve_rational(A, target.vectorize())


def reaches_identity(m: Multiplication, x: Sequence) -> tuple[int, tuple[int, ...]]:
    """Least ``b >= 1`` and integral ``z`` with ``b * left_rep(x)^-1 = left_rep(z)``."""
    require_proper(m, "reaches_identity")
    x = vec(x)
    _check_len(m, x)
    if all(v == 0 for v in x):
        raise ValueError("x must be nonzero")
    zq = _solve_left_rep_equation(m, RatMatrix.identity(m.dim), left_rep(m, x))
    if zq is None:
        raise NotProper(f"left_rep({x}) is not invertible inside the representation image")
    b = denominator_lcm(zq)
    return b, tuple(int(b * c) for c in zq)


def identity_element(m: Multiplication) -> Vector | None:
    """Rational two-sided identity, or None when there is none."""
    u = _solve_left_rep_equation(m, RatMatrix.identity(m.dim))
    if u is None or right_rep(m, u) != RatMatrix.identity(m.dim):
        return None
    return u


def central_scalar(m: Multiplication) -> tuple[int, tuple[int, ...]]:
    """Least ``c >= 1`` with an integral ``w`` such that
    ``left_rep(w) = right_rep(w) = c * Id``."""
    require_proper(m, "central_scalar")
    e1 = m.basis(0)
    zq = _solve_left_rep_equation(m, RatMatrix.identity(m.dim), left_rep(m, e1))
    u = multiply(m, zq, e1)
    c = denominator_lcm(u)
    w = tuple(int(c * t) for t in u)
    cid = RatMatrix.scalar(m.dim, c)
    if left_rep(m, w) != cid or right_rep(m, w) != cid:
        raise AssertionError("central scalar post-check failed")
    return c, w


# ---------------------------------------------------------------------------
# opposite and the GL_d(Q)-action


def opposite(m: Multiplication) -> Multiplication:
    d = m.dim
    sc = [[m.sc[j][i] for j in range(d)] for i in range(d)]
    return Multiplication(
        dim=d,
        sc=_freeze_tensor(sc),
        integral=m.integral,
        assoc_checked=m.assoc_checked,
        zero_divisor_status=_swap_witness(m.zero_divisor_status),
        provenance=("opposite", m.provenance),
        label=f"{m.label}_op" if m.label else "",
        notes=dict(m.notes),
    )


def _swap_witness(s: ZeroDivisorStatus) -> ZeroDivisorStatus:
    if s.witness is None:
        return s
    x, y = s.witness
    return ZeroDivisorStatus(s.kind, (y, x), s.note)


def act(m: Multiplication, T) -> Multiplication:
    """The multiplication ``x *_T y = T^-1 (T x * T y)``."""
    T = T if isinstance(T, RatMatrix) else RatMatrix(T)
    if T.shape != (m.dim, m.dim):
        raise DimensionMismatch(f"T must be {m.dim} x {m.dim}")
    if T.det() == 0:
        raise ZeroDivisionError("T must be invertible")
    Ti = T.inverse()
    cols = T.columns()
    d = m.dim
    sc = [[Ti @ multiply(m, cols[i], cols[j]) for j in range(d)] for i in range(d)]
    status = m.zero_divisor_status
    if status.kind == WITNESS:
        x, y = status.witness
        status = ZeroDivisorStatus(WITNESS, (_reduced(Ti @ x), _reduced(Ti @ y)))
    elif status.kind == PROVEN_FREE:
        status = ZeroDivisorStatus(PROVEN_FREE, note="isomorphic image of a proven-free multiplication")
    else:
        status = ZeroDivisorStatus(status.kind)
    return make_multiplication(
        sc,
        ("acted", T, m.provenance),
        zero_divisor_status=status,
        label=f"{m.label}_T" if m.label else "",
    )


def det_left_rep(m: Multiplication, x: Sequence) -> Scalar:
    return left_rep(m, x).det()
