# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport llabs

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int64_t i64


cdef inline int v2c(i64 a) noexcept nogil:
    cdef int k = 0
    if a < 0:
        a = -a
    while (a & 1) == 0:
        a >>= 1
        k += 1
    return k


def v2_pair_sweep(long lo, long hi):
    cdef i64 x, y, bad_even = 0, bad_odd = 0, n = 0
    cdef int vx, vy
    with nogil:
        x = lo
        while x <= hi:
            if x != 0:
                vx = v2c(x)
                y = lo
                while y <= hi:
                    if y != 0:
                        vy = v2c(y)
                        if (vx & 1) == 0 and (vy & 1) == 0:
                            if (v2c(2 * x * y) & 1) == 0:
                                bad_even += 1
                        elif (vx & 1) == 1 and (vy & 1) == 1:
                            if (v2c(x * y) & 1) == 1:
                                bad_odd += 1
                        n += 1
                    y += 1
            x += 1
    return int(bad_even), int(bad_odd), int(n)


cdef inline int row_cmp(const i64[:, ::1] A, Py_ssize_t i, const i64* p, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(d):
        if A[i, k] < p[k]:
            return -1
        if A[i, k] > p[k]:
            return 1
    return 0


cdef inline bint contains(const i64[:, ::1] A, const i64* p, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = A.shape[0] - 1, mid
    cdef int c
    while lo <= hi:
        mid = (lo + hi) >> 1
        c = row_cmp(A, mid, p, d)
        if c == 0:
            return True
        if c < 0:
            lo = mid + 1
        else:
            hi = mid - 1
    return False


def _sorted_rows(A):
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.shape[0] == 0:
        return A
    order = np.lexsort(A.T[::-1])
    return np.ascontiguousarray(A[order])


def member_mask(points, A):
    cdef i64[:, ::1] P = np.ascontiguousarray(points, dtype=np.int64)
    cdef i64[:, ::1] S = _sorted_rows(A)
    cdef Py_ssize_t n = P.shape[0], d = P.shape[1], i
    out = np.zeros(n, dtype=bool)
    cdef cnp.uint8_t[::1] o = out.view(np.uint8)
    if S.shape[0] == 0:
        return out
    with nogil:
        for i in range(n):
            o[i] = contains(S, &P[i, 0], d)
    return out


def dilate_counts(mats, shifts, A):
    cdef i64[:, :, ::1] M = np.ascontiguousarray(mats, dtype=np.int64)
    cdef i64[:, ::1] X = np.ascontiguousarray(shifts, dtype=np.int64)
    cdef i64[:, ::1] S = _sorted_rows(A)
    cdef Py_ssize_t K = M.shape[0], m = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t s, k, r, c
    cdef i64 acc
    out = np.zeros(m, dtype=np.int64)
    cdef i64[::1] o = out
    buf = np.zeros(max(d, 1), dtype=np.int64)
    cdef i64[::1] b = buf
    if S.shape[0] == 0 or K == 0:
        return out
    with nogil:
        for s in range(m):
            for k in range(K):
                for r in range(d):
                    acc = 0
                    for c in range(d):
                        acc += M[k, r, c] * X[s, c]
                    b[r] = acc
                if contains(S, &b[0], d):
                    o[s] += 1
    return out


def shift_counts(F, shifts, A):
    cdef i64[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.int64)
    cdef i64[:, ::1] X = np.ascontiguousarray(shifts, dtype=np.int64)
    cdef i64[:, ::1] S = _sorted_rows(A)
    cdef Py_ssize_t K = Fv.shape[0], m = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t s, k, r
    out = np.zeros(m, dtype=np.int64)
    cdef i64[::1] o = out
    buf = np.zeros(max(d, 1), dtype=np.int64)
    cdef i64[::1] b = buf
    if S.shape[0] == 0 or K == 0:
        return out
    with nogil:
        for s in range(m):
            for k in range(K):
                for r in range(d):
                    b[r] = Fv[k, r] + X[s, r]
                if contains(S, &b[0], d):
                    o[s] += 1
    return out


def images_distinct(mats, x):
    M = np.ascontiguousarray(mats, dtype=np.int64)
    imgs = M @ np.asarray(x, dtype=np.int64)
    cdef i64[:, ::1] S = _sorted_rows(imgs)
    cdef Py_ssize_t i, d = S.shape[1]
    for i in range(1, S.shape[0]):
        if row_cmp(S, i - 1, &S[i, 0], d) == 0:
            return False
    return True
