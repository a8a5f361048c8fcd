"""Concrete multiplication families: polynomial quotient rings Z[x]/(p),
the Lipschitz quaternions and scaled products on Z."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, isqrt
from typing import Sequence

from .algebra import (
    PROVEN_FREE,
    UNKNOWN,
    WITNESS,
    Multiplication,
    ZeroDivisorStatus,
    make_multiplication,
)

Poly = tuple[int, ...]  # coefficients low -> high


def _trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod_monic(a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    """Division by a monic integer polynomial; stays in Z[x]."""
    a = list(a)
    db = len(b) - 1
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(a) - 1 < db:
        return (0,), _trim(a)
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            quot[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return _trim(quot), _trim(a[:db] or [0])


def poly_eval(p: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, isqrt(n) + 1) if n % k == 0]
    divs = set(small) | {n // k for k in small}
    return sorted(divs)


@dataclass(frozen=True)
class MonicPoly:
    """``p(x) = x^d - sum_i a[i] x^i``.

    For ``d = 2`` this is ``x^2 - b x - c`` with ``a = (c, b)``.
    """

    a: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) < 1:
            raise ValueError("degree must be at least 1")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> MonicPoly:
        """From the ordinary coefficient list, lowest degree first, ending in 1."""
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("polynomial must be monic of degree >= 1 (last coefficient 1)")
        return cls(tuple(-c for c in coeffs[:-1]))

    @classmethod
    def quadratic(cls, b: int, c: int) -> MonicPoly:
        return cls((c, b))

    @property
    def degree(self) -> int:
        return len(self.a)

    @property
    def coefficients(self) -> Poly:
        return tuple(-x for x in self.a) + (1,)

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                terms.append(f"{coef}{mono}")
            else:
                terms.append(f"{c:+d}{mono}")
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class IrreducibilityCertificate:
    verdict: str  # "irreducible" | "reducible" | "unverified"
    method: str
    factors: tuple[Poly, Poly] | None = None
    bound: int | None = None

    def describe(self) -> str:
        s = f"{self.verdict} ({self.method}"
        if self.bound is not None:
            s += f", factor coefficient bound {self.bound}"
        return s + ")"


def _mignotte_bound(p: Poly, k: int) -> int:
    """Bound on the coefficients of any degree-k monic factor of p."""
    norm = isqrt(sum(c * c for c in p)) + 1
    return max(comb(k, j) for j in range(k + 1)) * norm


def irreducibility(p: MonicPoly) -> IrreducibilityCertificate:
    coeffs = p.coefficients
    d = p.degree
    if d == 1:
        return IrreducibilityCertificate("irreducible", "degree one")
    if d == 2:
        c, b = p.a
        disc = b * b + 4 * c
        r = isqrt(disc) if disc >= 0 else -1
        if r * r != disc:
            return IrreducibilityCertificate("irreducible", f"discriminant {disc} is not a perfect square")
    # linear factors: integer roots divide p(0)
    p0 = coeffs[0]
    roots = [0] if p0 == 0 else [s * t for t in _divisors(p0) for s in (1, -1)]
    for r in sorted(roots, key=lambda t: (-t)):
        if poly_eval(coeffs, r) == 0:
            g = (-r, 1)
            h, rem = poly_divmod_monic(coeffs, g)
            assert rem == (0,)
            return IrreducibilityCertificate("reducible", f"integer root {r}", (g, h))
    if d <= 3:
        return IrreducibilityCertificate("irreducible", "no integer root (rational root test)")
    if d <= 5:
        bound = _mignotte_bound(coeffs, 2)
        for v in sorted({s * t for t in _divisors(p0) for s in (1, -1)}):
            if abs(v) > bound:
                continue
            for u in range(-bound, bound + 1):
                g = (v, u, 1)
                h, rem = poly_divmod_monic(coeffs, g)
                if rem == (0,):
                    return IrreducibilityCertificate("reducible", "quadratic factor search", (g, h), bound)
        return IrreducibilityCertificate(
            "irreducible", "no integer root and exhaustive monic quadratic factor search", bound=bound
        )
    return IrreducibilityCertificate("unverified", "no integer root; higher-degree factors not searched")


def _padded(p: Poly, d: int) -> tuple[int, ...]:
    return tuple(p) + (0,) * (d - len(p))


def _quotient_tensor(p: MonicPoly) -> list:
    d = p.degree
    # x^k reduced mod p for k < 2d - 1
    powers = []
    cur = [1] + [0] * (d - 1)
    for _ in range(2 * d - 1):
        powers.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        for i in range(d):
            cur[i] += top * p.a[i]
    return [[list(powers[i + j]) for j in range(d)] for i in range(d)]


def from_polynomial(p: MonicPoly | Sequence[int], label: str = "") -> Multiplication:
    """The ring ``Z[x]/(p)`` in the basis ``1, x, ..., x^{d-1}``."""
    if not isinstance(p, MonicPoly):
        p = MonicPoly.from_coefficients(p)
    cert = irreducibility(p)
    d = p.degree
    if cert.verdict == "irreducible":
        status = ZeroDivisorStatus(PROVEN_FREE, note=f"{p} is irreducible: {cert.describe()}")
    elif cert.verdict == "reducible":
        g, h = cert.factors
        status = ZeroDivisorStatus(
            WITNESS, (_padded(g, d), _padded(h, d)), note=f"{p} is reducible: {cert.describe()}"
        )
    else:
        status = ZeroDivisorStatus(UNKNOWN, note=f"irreducibility of {p} {cert.describe()}")
    return make_multiplication(
        _quotient_tensor(p),
        ("polynomial", p.coefficients),
        zero_divisor_status=status,
        label=label or f"Z[x]/({p})",
        notes={"irreducibility": cert.describe()},
    )


def quadratic(b: int, c: int, label: str = "") -> Multiplication:
    """``Z[x]/(x^2 - b x - c)``."""
    return from_polynomial(MonicPoly.quadratic(b, c), label=label)


def _quaternion_left(x: Sequence[int]) -> list[list[int]]:
    x1, x2, x3, x4 = x
    return [
        [x1, -x2, -x3, -x4],
        [x2, x1, -x4, x3],
        [x3, x4, x1, -x2],
        [x4, -x3, x2, x1],
    ]


def quaternion() -> Multiplication:
    """Lipschitz quaternions ``Z + Zi + Zj + Zk`` in the basis 1, i, j, k."""
    sc = []
    for i in range(4):
        e = [0] * 4
        e[i] = 1
        L = _quaternion_left(e)
        sc.append([[L[k][j] for k in range(4)] for j in range(4)])
    return make_multiplication(
        sc,
        ("quaternion",),
        zero_divisor_status=ZeroDivisorStatus(PROVEN_FREE, note="subring of the rational Hamilton quaternions"),
        label="H",
    )


def scaled_z(n: int) -> Multiplication:
    """``x * y = n x y`` on Z."""
    n = int(n)
    if n == 0:
        raise ValueError("scaled_z needs a nonzero scale")
    return make_multiplication(
        [[[n]]],
        ("scaled_z", n),
        zero_divisor_status=ZeroDivisorStatus(PROVEN_FREE, note=f"nonzero scale {n}"),
        label=f"Z*{n}",
    )


def _is_square(c: int) -> bool:
    return c >= 0 and isqrt(c) ** 2 == c


def quadratic_catalog(c_values: Sequence[int], b_values: Sequence[int] = (0, 1)) -> list[Multiplication]:
    """The family ``x^2 - b x - c``, b in {0, 1}, c not a perfect square.

    Square c are rejected because they are excluded from the classification
    of quadratic rings.  Some non-square c still give reducible polynomials
    when b = 1 (for example c = 2); those come back carrying a zero-divisor
    witness instead of a properness certificate.
    """
    out = []
    for b in b_values:
        if b not in (0, 1):
            raise ValueError(f"b must be 0 or 1, got {b}")
    for c in c_values:
        if _is_square(c):
            raise ValueError(f"c = {c} is a perfect square; square c are excluded from the quadratic family")
    for b in b_values:
        for c in c_values:
            out.append(quadratic(b, c))
    return out


def shipped_catalog() -> dict[str, Multiplication]:
    """Named multiplications available from the command line."""
    named = {
        "gauss": quadratic(0, -1, "Z[i]"),
        "sqrt2": quadratic(0, 2, "Z[sqrt2]"),
        "sqrt3": quadratic(0, 3, "Z[sqrt3]"),
        "sqrt5": quadratic(0, 5, "Z[sqrt5]"),
        "sqrt-2": quadratic(0, -2, "Z[sqrt-2]"),
        "sqrt-3": quadratic(0, -3, "Z[sqrt-3]"),
        "golden": quadratic(1, 1, "Z[phi]"),
        "eisenstein": quadratic(1, -1, "Z[omega]"),
        "quaternion": quaternion(),
    }
    for n in (1, 2, 3):
        named[f"scaled{n}"] = scaled_z(n)
    return named


def catalog_pairs(c_values=(-1, 2, -2, 3, -3, 5, -5, 6, 7), b_values=(0, 1)):
    """All (b, c) pairs of the default quadratic family."""
    return list(itertools.product(b_values, c_values))
