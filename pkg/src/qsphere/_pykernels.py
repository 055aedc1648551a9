"""Pure numpy implementations of the hot kernels (fallback for ``_kernels``)."""
from __future__ import annotations

import numpy as np


def rref_mod_p(a, p: int):
    """Reduced row echelon form of an integer matrix over GF(p), p < 2**31.

    Returns ``(r, pivots)`` where ``r`` holds the ``rank`` nonzero rows
    (entries in ``[0, p)``) and ``pivots`` the pivot column indices.
    """
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            m[rows] = (m[rows] - (col[rows, None] * m[r]) % p) % p
        pivots.append(c)
        r += 1
    return m[:r].copy(), np.asarray(pivots, dtype=np.int64)


def weighted_ball_sums(y1, eps2: float, power: float):
    """Accumulate g = 1[|1 - y|^2 < eps2, |y| < 1] (1 - |y|^2)^power over rows y of y1.

    Returns ``(hits, sum g, sum g^2)``.
    """
    y1 = np.asarray(y1, dtype=np.float64)
    d2 = (1.0 - y1[:, 0]) ** 2 + np.einsum("ij,ij->i", y1[:, 1:], y1[:, 1:])
    rad = 1.0 - np.einsum("ij,ij->i", y1, y1)
    mask = (d2 < eps2) & (rad > 0.0)
    g = rad[mask] ** power
    return int(mask.sum()), float(g.sum()), float((g * g).sum())
