"""Exact rational and integer linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point anywhere.  Scalars are normalized so that a rational with
denominator one is stored as a plain ``int``, which keeps integral workloads
on the fast integer path.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Scalar = int | Fraction
Vector = tuple  # tuple of Scalar


def q(x) -> Scalar:
    """Normalize a scalar to ``int`` when integral, else ``Fraction``."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return q(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    # numpy integers and the like
    return q(Fraction(x))


def vec(xs: Iterable) -> Vector:
    return tuple(q(x) for x in xs)


def is_integral_vec(v: Sequence) -> bool:
    return all(isinstance(x, int) for x in v)


def denominator_lcm(values: Iterable[Scalar]) -> int:
    out = 1
    for x in values:
        if isinstance(x, Fraction):
            out = lcm(out, x.denominator)
    return out


def content(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence[Scalar]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector whose
    first nonzero entry is positive."""
    d = denominator_lcm(v)
    w = [int(x * d) for x in v]
    g = content(w)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    w = [x // g for x in w]
    for x in w:
        if x:
            if x < 0:
                w = [-y for y in w]
            break
    return tuple(w)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return q(sum(a * b for a, b in zip(u, v)))


def vadd(u, v) -> Vector:
    return tuple(q(a + b) for a, b in zip(u, v))


def vsub(u, v) -> Vector:
    return tuple(q(a - b) for a, b in zip(u, v))


def vscale(c, v) -> Vector:
    return tuple(q(c * a) for a in v)


def sup_norm(v: Sequence[Scalar]) -> Scalar:
    return max((abs(x) for x in v), default=0)


def norm2_sq(v: Sequence[Scalar]) -> Scalar:
    return q(sum(x * x for x in v))


class RatMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(q(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged matrix rows")
        self._rows = rows

    # construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> RatMatrix:
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def scalar(cls, n: int, c) -> RatMatrix:
        return cls([[c if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> RatMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> RatMatrix:
        return cls(list(zip(*cols)))

    # access -------------------------------------------------------------
    @property
    def rows(self) -> tuple[tuple[Scalar, ...], ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self._rows]

    def vectorize(self) -> Vector:
        """Row-major flattening, used to house matrices as lattice vectors."""
        return tuple(x for r in self._rows for x in r)

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    # algebra ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"RatMatrix([{body}])"

    def _check_same_shape(self, other: RatMatrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other)
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        self._check_same_shape(other)
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> RatMatrix:
        return RatMatrix([[-a for a in r] for r in self._rows])

    def __mul__(self, c) -> RatMatrix:
        if isinstance(c, RatMatrix):
            return NotImplemented
        return RatMatrix([[c * a for a in r] for r in self._rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other._rows))
            return RatMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows])
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to length-{len(v)} vector")
        return tuple(q(sum(a * b for a, b in zip(r, v))) for r in self._rows)

    def transpose(self) -> RatMatrix:
        return RatMatrix(list(zip(*self._rows)))

    @property
    def T(self) -> RatMatrix:
        return self.transpose()

    def det(self) -> Scalar:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.nrows
        if self.is_integral():
            return _bareiss_det([list(r) for r in self._rows])
        a = [[Fraction(x) for x in r] for r in self._rows]
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return q(det)

    def rank(self) -> int:
        _, piv = rref(self._rows)
        return len(piv)

    def inverse(self) -> RatMatrix:
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self._rows)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix([r[n:] for r in red[:n]])

    def is_invertible(self) -> bool:
        return self.is_square() and self.det() != 0

    def kron(self, other: RatMatrix) -> RatMatrix:
        rows = []
        for r in self._rows:
            for s in other._rows:
                rows.append([a * b for a in r for b in s])
        return RatMatrix(rows)


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def as_matrix(m) -> RatMatrix:
    return m if isinstance(m, RatMatrix) else RatMatrix(m)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    piv: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    return [[q(x) for x in row] for row in a], piv


def solve_rational(A, b: Sequence) -> Vector | None:
    """Solve ``A x = b`` exactly.

    Returns ``None`` when the system is inconsistent.  Free variables are set
    to zero, so the answer is deterministic when the solution is not unique.
    """
    A = as_matrix(A)
    b = vec(b)
    if len(b) != A.nrows:
        raise DimensionMismatch(f"matrix has {A.nrows} rows but right-hand side has {len(b)} entries")
    n = A.ncols
    aug = [list(r) + [bi] for r, bi in zip(A.rows, b)]
    red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [0] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return vec(x)


def kernel_rational(A) -> list[Vector]:
    """Basis of the right null space of ``A``; empty when the kernel is trivial."""
    A = as_matrix(A)
    n = A.ncols
    red, piv = rref(A.rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, c in zip(red, piv):
            v[c] = q(-row[f])
        basis.append(vec(v))
    return basis


# ---------------------------------------------------------------------------
# integer lattices


def _hnf_core(rows: list[list[int]], ncols: int, track: bool):
    """Row-style Hermite normal form by integer row operations.

    Rows end up in echelon order with positive pivots; the entries of a pivot
    column in earlier rows are reduced into ``[0, pivot)``.  When ``track`` is
    set, the unimodular transform ``U`` with ``U @ input = output`` is returned.
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if track else None
    prow = 0
    for c in range(ncols):
        if prow >= m:
            break
        while True:
            nz = [i for i in range(prow, m) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(a[i][c]), i))
            if best != prow:
                a[prow], a[best] = a[best], a[prow]
                if track:
                    u[prow], u[best] = u[best], u[prow]
            done = True
            pv = a[prow][c]
            for i in range(prow + 1, m):
                if a[i][c] != 0:
                    f = a[i][c] // pv
                    a[i] = [x - f * y for x, y in zip(a[i], a[prow])]
                    if track:
                        u[i] = [x - f * y for x, y in zip(u[i], u[prow])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[prow][c] == 0:
            continue
        if a[prow][c] < 0:
            a[prow] = [-x for x in a[prow]]
            if track:
                u[prow] = [-x for x in u[prow]]
        pv = a[prow][c]
        for i in range(prow):
            f = a[i][c] // pv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[prow])]
                if track:
                    u[i] = [x - f * y for x, y in zip(u[i], u[prow])]
        prow += 1
    return a, u, prow


@dataclass(frozen=True)
class IntLattice:
    """Finitely generated subgroup of Z^m stored by its HNF basis."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from the ambient dimension")
        if not is_integral_vec(v):
            return False
        if not self.basis:
            return all(x == 0 for x in v)
        coeffs = solve_rational(RatMatrix(self.basis).T, v)
        return coeffs is not None and is_integral_vec(coeffs)

    __contains__ = contains

    def __le__(self, other: IntLattice) -> bool:
        return all(other.contains(b) for b in self.basis)


def hnf(M: Iterable[Sequence[int]], ambient_dim: int | None = None) -> IntLattice:
    """Hermite normal form of the lattice generated by the rows of ``M``."""
    rows = [list(r) for r in M]
    if rows:
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("generators have different lengths")
        if ambient_dim is not None and ambient_dim != n:
            raise DimensionMismatch("generator length differs from ambient_dim")
    elif ambient_dim is None:
        raise ValueError("ambient_dim is required for an empty generator list")
    else:
        n = ambient_dim
    for r in rows:
        for x in r:
            if not isinstance(q(x), int):
                raise ValueError("lattice generators must be integral")
    rows = [[int(x) for x in r] for r in rows]
    a, _, k = _hnf_core(rows, n, track=False)
    return IntLattice(n, tuple(tuple(r) for r in a[:k]))


def integer_left_kernel(M: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Z-basis of ``{y in Z^m : y M = 0}`` from the HNF transform."""
    rows = [[int(x) for x in r] for r in M]
    if not rows:
        return []
    _, u, k = _hnf_core(rows, len(rows[0]), track=True)
    return [tuple(r) for r in u[k:]]


def lattice_intersect(L1: IntLattice, L2: IntLattice) -> IntLattice:
    """``L1 ∩ L2`` via the integer left kernel of the stacked bases."""
    if L1.ambient_dim != L2.ambient_dim:
        raise DimensionMismatch("lattices live in different ambient dimensions")
    m = L1.ambient_dim
    if not L1.basis or not L2.basis:
        return IntLattice(m, ())
    stacked = [list(b) for b in L1.basis] + [list(b) for b in L2.basis]
    k1 = len(L1.basis)
    gens = []
    for y in integer_left_kernel(stacked):
        a = y[:k1]
        gens.append([sum(ai * b[j] for ai, b in zip(a, L1.basis)) for j in range(m)])
    return hnf(gens, ambient_dim=m)


def rank(obj) -> int:
    """Rank of an :class:`IntLattice` (basis size) or of a matrix over Q."""
    if isinstance(obj, IntLattice):
        return obj.rank
    return as_matrix(obj).rank()
