"""Kernel selection.

The compiled extension is used when it imports; setting
``ZDMULT_PURE_PYTHON=1`` forces the numpy reference versions.  Callers go
through the wrappers below, which also fall back to exact Python integers
whenever an int64 computation could overflow.
"""
from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _kernels_py

_INT64_SAFE = 2 ** 62


def _load():
    if os.environ.get("ZDMULT_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return _kernels_py
    return _kernels


_impl = _load()
BACKEND: str = _impl.BACKEND


def available_backends() -> dict:
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["cython"] = _kernels
    except ImportError:
        pass
    return out


def _max_abs(rows) -> int:
    m = 0
    for r in rows:
        for v in r:
            if abs(v) > m:
                m = abs(v)
    return m


def v2_pair_sweep(lo: int, hi: int, impl=None) -> tuple[int, int, int]:
    if max(abs(lo), abs(hi)) ** 2 * 2 >= _INT64_SAFE:
        raise ValueError("window too large for the 64-bit sweep")
    return (impl or _impl).v2_pair_sweep(lo, hi)


def member_mask(points: Sequence[Sequence[int]], A: Sequence[Sequence[int]], impl=None) -> list[bool]:
    if not points:
        return []
    if not A:
        return [False] * len(points)
    if max(_max_abs(points), _max_abs(A)) >= _INT64_SAFE:
        aset = set(map(tuple, A))
        return [tuple(p) in aset for p in points]
    return (impl or _impl).member_mask(np.array(points, dtype=np.int64), np.array(A, dtype=np.int64)).tolist()


def dilate_counts(mats: Sequence, shifts: Sequence, A: Sequence, impl=None) -> list[int]:
    """``counts[i] = #{k : mats[k] @ shifts[i] in A}`` for integer matrices."""
    if not shifts:
        return []
    if not mats or not A:
        return [0] * len(shifts)
    d = len(shifts[0])
    bound = _max_abs(r for M in mats for r in M) * _max_abs(shifts) * d
    if bound >= _INT64_SAFE or max(_max_abs(A), 0) >= _INT64_SAFE:
        aset = set(map(tuple, A))
        out = []
        for s in shifts:
            c = 0
            for M in mats:
                img = tuple(sum(M[r][k] * s[k] for k in range(d)) for r in range(d))
                c += img in aset
            out.append(c)
        return out
    res = (impl or _impl).dilate_counts(
        np.array(mats, dtype=np.int64).reshape(len(mats), d, d),
        np.array(shifts, dtype=np.int64).reshape(len(shifts), d),
        np.array(A, dtype=np.int64).reshape(len(A), d),
    )
    return [int(c) for c in res]


def shift_counts(F: Sequence, shifts: Sequence, A: Sequence, impl=None) -> list[int]:
    """``counts[i] = #{f in F : f + shifts[i] in A}``."""
    if not shifts:
        return []
    if not F or not A:
        return [0] * len(shifts)
    d = len(shifts[0])
    if _max_abs(F) + _max_abs(shifts) >= _INT64_SAFE or _max_abs(A) >= _INT64_SAFE:
        aset = set(map(tuple, A))
        return [sum(tuple(a + b for a, b in zip(f, s)) in aset for f in F) for s in shifts]
    res = (impl or _impl).shift_counts(
        np.array(F, dtype=np.int64).reshape(len(F), d),
        np.array(shifts, dtype=np.int64).reshape(len(shifts), d),
        np.array(A, dtype=np.int64).reshape(len(A), d),
    )
    return [int(c) for c in res]


def images_distinct(mats: Sequence, x: Sequence[int], impl=None) -> bool:
    """True when the integer vectors ``M @ x`` are pairwise distinct."""
    if len(mats) < 2:
        return True
    d = len(x)
    if _max_abs(r for M in mats for r in M) * _max_abs([x]) * d >= _INT64_SAFE:
        seen = set()
        for M in mats:
            img = tuple(sum(M[r][k] * x[k] for k in range(d)) for r in range(d))
            if img in seen:
                return False
            seen.add(img)
        return True
    return bool((impl or _impl).images_distinct(np.array(mats, dtype=np.int64), np.array(x, dtype=np.int64)))
