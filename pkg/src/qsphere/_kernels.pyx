# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the contract."""
import numpy as np
cimport numpy as cnp
from libc.math cimport pow as cpow

ctypedef long long i64


cdef i64 _inv_mod(i64 a, i64 p):
    cdef i64 result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def rref_mod_p(a, long long p):
    cdef cnp.ndarray[i64, ndim=2] arr = np.array(a, dtype=np.int64) % p
    cdef i64[:, ::1] m = np.ascontiguousarray(arr)
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, k, i, j
    cdef i64 inv, f, t
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        k = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(ncols):
                t = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = t
        inv = _inv_mod(m[r, c], p)
        for j in range(c, ncols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(nrows):
            if i == r:
                continue
            f = m[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                if m[r, j] != 0:
                    m[i, j] = (m[i, j] - (f * m[r, j]) % p + p) % p
        pivots.append(c)
        r += 1
    out = np.asarray(m)[:r].copy()
    return out, np.asarray(pivots, dtype=np.int64)


def weighted_ball_sums(y1, double eps2, double power):
    cdef double[:, ::1] y = np.ascontiguousarray(y1, dtype=np.float64)
    cdef Py_ssize_t n = y.shape[0], i
    cdef long long hits = 0
    cdef double s1 = 0.0, s2 = 0.0, d2, rad, g, v0
    for i in range(n):
        v0 = 1.0 - y[i, 0]
        d2 = v0 * v0 + y[i, 1] * y[i, 1] + y[i, 2] * y[i, 2] + y[i, 3] * y[i, 3]
        if d2 >= eps2:
            continue
        rad = 1.0 - (y[i, 0] * y[i, 0] + y[i, 1] * y[i, 1] + y[i, 2] * y[i, 2] + y[i, 3] * y[i, 3])
        if rad <= 0.0:
            continue
        g = cpow(rad, power)
        hits += 1
        s1 += g
        s2 += g * g
    return int(hits), s1, s2
