"""Alignment, centralizer/normalizer/automorphism membership and the
class-preservation dispatch built on top of them."""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    Multiplication,
    act,
    identity_element,
    is_commutative,
    left_rep,
    multiply,
    opposite,
    require_proper,
    right_rep,
)
from .errors import DimensionMismatch, HypothesisViolation
from .linalg import (
    IntLattice,
    RatMatrix,
    content,
    denominator_lcm,
    hnf,
    lattice_intersect,
    solve_rational,
)

ALIGNED = "aligned"
NOT_ALIGNED = "not-aligned"


@dataclass(frozen=True)
class AlignmentCertificate:
    """Outcome of an alignment decision.

    Aligned: ``x * v * y == x (.) w (.) y`` for all x, y, with ``T = right_rep(v_rat)``
    satisfying ``phi = psi o T``.  Not aligned: the lattice
    ``psi(Z^d) & phi(Z^d)`` (vectorized, scaled by ``scale`` to clear
    denominators) has rank below d.
    """

    verdict: str
    dim: int
    v: tuple[int, ...] | None = None
    w: tuple[int, ...] | None = None
    T: RatMatrix | None = None
    v_rational: tuple | None = None
    intersection_rank: int | None = None
    intersection_basis: tuple[tuple[int, ...], ...] | None = None
    scale: int = 1
    notes: dict = field(default_factory=dict)

    @property
    def aligned(self) -> bool:
        return self.verdict == ALIGNED

    def check(self, m1: Multiplication, m2: Multiplication, samples: int = 100, seed: int = 0, radius: int = 50) -> bool:
        """Re-verify on random pairs (aligned) or recompute the rank (not aligned)."""
        if self.aligned:
            rng = random.Random(seed)
            d = m1.dim
            for _ in range(samples):
                x = tuple(rng.randint(-radius, radius) for _ in range(d))
                y = tuple(rng.randint(-radius, radius) for _ in range(d))
                if multiply(m1, multiply(m1, x, self.v), y) != multiply(m2, multiply(m2, x, self.w), y):
                    return False
            return True
        rank, _, _ = representation_intersection(m1, m2)
        return rank == self.intersection_rank and rank < m1.dim


def _check_pair(m1: Multiplication, m2: Multiplication, require_properness: bool) -> None:
    if m1.dim != m2.dim:
        raise DimensionMismatch(f"dimensions differ: {m1.dim} vs {m2.dim}")
    if require_properness:
        require_proper(m1, "alignment")
        require_proper(m2, "alignment")


def _rep_image_rows(m: Multiplication) -> list:
    return [left_rep(m, m.basis(i)).vectorize() for i in range(m.dim)]


def representation_intersection(m1: Multiplication, m2: Multiplication) -> tuple[int, IntLattice, int]:
    """Rank and HNF basis of ``psi(Z^d) & phi(Z^d)`` in vectorized form.

    Rational structure constants are handled by scaling both lattices by a
    common denominator; the scale is returned alongside."""
    r1 = _rep_image_rows(m1)
    r2 = _rep_image_rows(m2)
    scale = denominator_lcm([x for row in r1 + r2 for x in row])
    L1 = hnf([[int(scale * x) for x in row] for row in r1], ambient_dim=m1.dim ** 2)
    L2 = hnf([[int(scale * x) for x in row] for row in r2], ambient_dim=m1.dim ** 2)
    L = lattice_intersect(L1, L2)
    return L.rank, L, scale


def _solve_alignment(m1: Multiplication, m2: Multiplication):
    """Rational v with ``phi(e_i) = psi(e_i * v)`` for all i, or None."""
    d = m1.dim
    # psi(e_i * v) = sum_k v_k psi(e_i * e_k); stack the d equations.
    cols = []
    for k in range(d):
        col = []
        for i in range(d):
            col.extend(left_rep(m1, m1.sc[i][k]).vectorize())
        cols.append(col)
    rhs = []
    for i in range(d):
        rhs.extend(left_rep(m2, m2.basis(i)).vectorize())
    A = RatMatrix.from_columns(cols)
    return solve_rational(A, rhs)


def are_aligned(m1: Multiplication, m2: Multiplication, *, require_properness: bool = True) -> AlignmentCertificate:
    """Decide whether two multiplications have the same representation image.

    Solves the linear system ``phi(x) = psi(right_rep(v) x)`` for rational v.
    When solvable, the integral witnesses are ``(c v, c u)`` with u the
    identity of the second multiplication and c clearing all denominators,
    divided by their common content.
    """
    _check_pair(m1, m2, require_properness)
    d = m1.dim
    v = _solve_alignment(m1, m2)
    if v is None:
        rank, L, scale = representation_intersection(m1, m2)
        return AlignmentCertificate(
            NOT_ALIGNED, d, intersection_rank=rank, intersection_basis=L.basis, scale=scale
        )
    u = identity_element(m2)
    if u is None:
        raise HypothesisViolation("second multiplication has no identity element")
    c = denominator_lcm(tuple(v) + tuple(u))
    vi = [int(c * t) for t in v]
    wi = [int(c * t) for t in u]
    g = content(vi + wi)
    vi = tuple(t // g for t in vi)
    wi = tuple(t // g for t in wi)
    return AlignmentCertificate(ALIGNED, d, v=vi, w=wi, T=right_rep(m1, v), v_rational=tuple(v))


# ---------------------------------------------------------------------------
# centralizer, normalizer, automorphisms


def _as_matrix(T, d: int) -> RatMatrix:
    T = T if isinstance(T, RatMatrix) else RatMatrix(T)
    if T.shape != (d, d):
        raise DimensionMismatch(f"matrix must be {d} x {d}")
    return T


def _require_invertible(T: RatMatrix) -> None:
    if T.det() == 0:
        raise ZeroDivisionError("matrix is singular")


def in_centralizer(m: Multiplication, T) -> tuple | None:
    """v with ``T == right_rep(v)`` when T commutes with every left
    representation, else None."""
    T = _as_matrix(T, m.dim)
    _require_invertible(T)
    for i in range(m.dim):
        P = left_rep(m, m.basis(i))
        if P @ T != T @ P:
            return None
    cols = [right_rep(m, m.basis(k)).vectorize() for k in range(m.dim)]
    v = solve_rational(RatMatrix.from_columns(cols), T.vectorize())
    if v is None:
        # commuting but outside right_rep(Q^d): cannot happen for division algebras
        return None
    return v


def _span_solver(m: Multiplication):
    cols = [left_rep(m, m.basis(k)).vectorize() for k in range(m.dim)]
    A = RatMatrix.from_columns(cols)
    return lambda M: solve_rational(A, M.vectorize())


def in_normalizer(m: Multiplication, T) -> bool:
    """True iff ``T^-1 psi(e_i) T`` lies in ``psi(Q^d)`` for every i."""
    T = _as_matrix(T, m.dim)
    _require_invertible(T)
    Ti = T.inverse()
    solve = _span_solver(m)
    return all(solve(Ti @ left_rep(m, m.basis(i)) @ T) is not None for i in range(m.dim))


def is_homomorphism(T, m1: Multiplication, m2: Multiplication) -> bool:
    """True iff ``T(e_i *1 e_j) == T e_i *2 T e_j`` on all basis pairs."""
    if m1.dim != m2.dim:
        raise DimensionMismatch("dimensions differ")
    T = _as_matrix(T, m1.dim)
    cols = T.columns()
    d = m1.dim
    for i in range(d):
        for j in range(d):
            if T @ m1.sc[i][j] != multiply(m2, cols[i], cols[j]):
                return False
    return True


def is_automorphism(m: Multiplication, T) -> bool:
    T = _as_matrix(T, m.dim)
    return T.det() != 0 and is_homomorphism(T, m, m)


def is_iso_to_opposite(m: Multiplication, T) -> bool:
    T = _as_matrix(T, m.dim)
    return T.det() != 0 and is_homomorphism(T, m, opposite(m))


def decompose_normalizer(m: Multiplication, T) -> tuple[RatMatrix, tuple]:
    """Split a normalizer element as ``T = A @ right_rep(v)`` with A an
    algebra automorphism; the factorization is re-verified before returning."""
    T = _as_matrix(T, m.dim)
    _require_invertible(T)
    if not in_normalizer(m, T):
        raise HypothesisViolation("matrix is not in the normalizer")
    mT = act(m, T)
    v = _solve_alignment(m, mT)
    if v is None:
        raise AssertionError("normalizer element produced a non-aligned multiplication")
    S = right_rep(m, v)
    A = T @ S.inverse()
    if A @ S != T or not is_automorphism(m, A) or in_centralizer(m, S) is None:
        raise AssertionError("normalizer decomposition failed its post-check")
    return A, tuple(v)


@dataclass(frozen=True)
class EnumerationResult:
    matrices: tuple[RatMatrix, ...]
    entry_bound: int
    target: str  # "automorphism" | "iso-to-opposite"
    complete_within_bound: bool = True
    note: str = "no completeness claim is made for entries beyond the bound"

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


def _enumerate_homomorphisms(m1: Multiplication, m2: Multiplication, bound: int) -> list[RatMatrix]:
    d = m1.dim
    sc1 = m1.sc
    # pairs to check once columns 0..k are all assigned
    ready: list[list[tuple[int, int]]] = [[] for _ in range(d)]
    for i, j in itertools.product(range(d), repeat=2):
        need = {i, j} | {k for k in range(d) if sc1[i][j][k] != 0}
        ready[max(need)].append((i, j))
    entries = range(-bound, bound + 1)
    candidates = [c for c in itertools.product(entries, repeat=d) if any(c)]
    cols: list = [None] * d
    found: list[RatMatrix] = []

    def image(vec):
        out = [0] * d
        for k, a in enumerate(vec):
            if a:
                col = cols[k]
                for r in range(d):
                    out[r] += a * col[r]
        return tuple(out)

    def rec(k: int) -> None:
        if k == d:
            M = RatMatrix.from_columns(cols)
            if abs(M.det()) == 1:
                found.append(M)
            return
        for c in candidates:
            cols[k] = c
            ok = True
            for i, j in ready[k]:
                if image(sc1[i][j]) != multiply(m2, cols[i], cols[j]):
                    ok = False
                    break
            if ok:
                rec(k + 1)
        cols[k] = None

    rec(0)
    found.sort(key=lambda M: M.vectorize())
    return found


def enumerate_integral_automorphisms(m: Multiplication, entry_bound: int = 1) -> EnumerationResult:
    """All integral automorphisms with entries in ``[-bound, bound]`` and
    determinant +-1, in lexicographic (row-major) order."""
    if entry_bound < 1:
        raise ValueError("entry_bound must be at least 1")
    return EnumerationResult(tuple(_enumerate_homomorphisms(m, m, entry_bound)), entry_bound, "automorphism")


def enumerate_integral_iso_to_opposite(m: Multiplication, entry_bound: int = 1) -> EnumerationResult:
    if entry_bound < 1:
        raise ValueError("entry_bound must be at least 1")
    return EnumerationResult(
        tuple(_enumerate_homomorphisms(m, opposite(m), entry_bound)), entry_bound, "iso-to-opposite"
    )


# ---------------------------------------------------------------------------
# class preservation

NORMALIZER_CLASSES = {"S", "T", "PS", "PS*", "D", "D*"}
AUTOMORPHISM_CLASSES = {"IP", "IP*"}
_IPR = re.compile(r"^IP_?(\d+)(\*?)$")


def parse_class(name: str) -> tuple[str, str]:
    """Normalize a class name; returns (canonical name, membership kind)."""
    s = name.strip().replace(" ", "")
    if s in NORMALIZER_CLASSES:
        return s, "normalizer"
    if s in AUTOMORPHISM_CLASSES:
        return s, "automorphism"
    if s.lower() in ("ip_0", "ip_0*", "ip0", "ip0*"):
        return "IP_0" + ("*" if s.endswith("*") else ""), "automorphism-or-iso-to-opposite"
    mt = _IPR.match(s)
    if mt:
        r = int(mt.group(1))
        if r == 0:
            return "IP_0" + mt.group(2), "automorphism-or-iso-to-opposite"
        if r < 2:
            raise ValueError(f"class {name}: r must be at least 2")
        return f"IP_{r}{mt.group(2)}", "automorphism-or-iso-to-opposite"
    raise ValueError(f"unknown largeness class {name!r}")


def preserves_class(m: Multiplication, T, cls: str) -> tuple[bool, str]:
    """Whether T maps the class ``cls`` of subsets (for this multiplication)
    into itself, with a reason naming the membership test used."""
    T = _as_matrix(T, m.dim)
    if not T.is_integral():
        raise ValueError("matrix must be integral")
    _require_invertible(T)
    canon, kind = parse_class(cls)
    if kind == "normalizer":
        ok = in_normalizer(m, T)
        reason = f"{canon}: preserved iff T is in the normalizer; T {'is' if ok else 'is not'} in the normalizer"
        if canon in ("D", "D*"):
            amen = "left amenable" if m.is_proper and is_commutative(m) else "not left amenable"
            reason += f" (density classes are defined only for amenable semigroups; this one is {amen})"
        return ok, reason
    aut = is_automorphism(m, T)
    if kind == "automorphism":
        return aut, f"{canon}: preserved iff T is an automorphism; T {'is' if aut else 'is not'} an automorphism"
    iso = is_iso_to_opposite(m, T)
    ok = aut or iso
    which = "an automorphism" if aut else ("an isomorphism onto the opposite" if iso else "neither")
    return ok, f"{canon}: preserved iff T is an automorphism or an isomorphism onto the opposite; T is {which}"


def is_group(mats: Sequence[RatMatrix]) -> bool:
    """Closure and inverses for a finite set of invertible matrices."""
    s = set(mats)
    if not s:
        return False
    for A in s:
        if A.inverse() not in s:
            return False
        for B in s:
            if A @ B not in s:
                return False
    return True
