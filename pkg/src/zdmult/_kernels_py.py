"""Reference implementations of the counting kernels (numpy only).

Every function here has a compiled twin in ``_kernels.pyx`` with the same
signature and results; ``kernels`` picks one at import time.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def _v2(a: np.ndarray) -> np.ndarray:
    """2-adic valuation of nonzero int64 entries."""
    a = np.abs(a)
    low = a & -a
    return np.log2(low.astype(np.float64)).astype(np.int64)


def v2_pair_sweep(lo: int, hi: int) -> tuple[int, int, int]:
    """Sweep all pairs of nonzero x, y in [lo, hi].

    Returns (bad_even, bad_odd, pairs) where bad_even counts pairs with
    v2(x), v2(y), v2(2xy) all even and bad_odd counts pairs with v2(x),
    v2(y) odd but v2(xy) odd.
    """
    vals = np.arange(lo, hi + 1, dtype=np.int64)
    vals = vals[vals != 0]
    vv = _v2(vals)
    even = (vv & 1) == 0
    bad_even = 0
    bad_odd = 0
    for x, vx in zip(vals.tolist(), vv.tolist()):
        prod = vals * x
        if vx % 2 == 0:
            v2p = _v2(2 * prod)
            bad_even += int(np.count_nonzero(even & ((v2p & 1) == 0)))
        else:
            v1 = _v2(prod)
            bad_odd += int(np.count_nonzero(~even & ((v1 & 1) == 1)))
    return bad_even, bad_odd, len(vals) ** 2


def _encoder(A: np.ndarray):
    """Map rows of A to a sorted 1-d key array plus a function encoding
    arbitrary rows (rows outside A's bounding box get key -1)."""
    lo = A.min(axis=0)
    hi = A.max(axis=0)
    span = (hi - lo + 1).astype(object)
    total = 1
    for s in span:
        total *= int(s)
    if total >= 2 ** 62:
        return None
    mult = np.ones(A.shape[1], dtype=np.int64)
    for k in range(A.shape[1] - 2, -1, -1):
        mult[k] = mult[k + 1] * int(span[k + 1])

    def encode(P: np.ndarray) -> np.ndarray:
        inside = np.all((P >= lo) & (P <= hi), axis=1)
        keys = ((P - lo) * mult).sum(axis=1)
        return np.where(inside, keys, -1)

    return np.sort(encode(A)), encode


def member_mask(points: np.ndarray, A: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    A = np.asarray(A, dtype=np.int64)
    if len(A) == 0 or len(points) == 0:
        return np.zeros(len(points), dtype=bool)
    enc = _encoder(A)
    if enc is None:
        aset = {tuple(r) for r in A.tolist()}
        return np.array([tuple(p) in aset for p in points.tolist()], dtype=bool)
    keys, encode = enc
    k = encode(points)
    pos = np.searchsorted(keys, k)
    pos = np.minimum(pos, len(keys) - 1)
    return (k >= 0) & (keys[pos] == k)


def dilate_counts(mats: np.ndarray, shifts: np.ndarray, A: np.ndarray) -> np.ndarray:
    """For each shift s, the number of matrices M with ``M @ s`` in A."""
    mats = np.asarray(mats, dtype=np.int64)
    shifts = np.asarray(shifts, dtype=np.int64)
    out = np.zeros(len(shifts), dtype=np.int64)
    for M in mats:
        out += member_mask(shifts @ M.T, A)
    return out


def shift_counts(F: np.ndarray, shifts: np.ndarray, A: np.ndarray) -> np.ndarray:
    """For each shift s, the number of f in F with ``f + s`` in A."""
    F = np.asarray(F, dtype=np.int64)
    shifts = np.asarray(shifts, dtype=np.int64)
    out = np.zeros(len(shifts), dtype=np.int64)
    for f in F:
        out += member_mask(shifts + f, A)
    return out


def images_distinct(mats: np.ndarray, x: np.ndarray) -> bool:
    """True when the vectors ``M @ x`` are pairwise distinct."""
    mats = np.asarray(mats, dtype=np.int64)
    imgs = mats @ np.asarray(x, dtype=np.int64)
    return len(np.unique(imgs, axis=0)) == len(imgs)
