"""Exact linear algebra.

Two routes:

* ``rref`` / ``nullspace`` / ``solve``: plain Gauss-Jordan elimination over any
  exact field whose elements support ``+ - * /`` (``Q`` or ``ComplexRational``).
  Good for small systems (Gram matrices, rank checks).
* ``nullspace_integer``: kernel of a sparse integer matrix computed modulo
  word-size primes, lifted by CRT and rational reconstruction, and then
  verified exactly over the integers.  The result is certified: the rank
  modulo a prime never exceeds the rank over Q, so the number of verified
  independent kernel vectors equals the true nullity once it matches the
  modular nullity.
"""
from __future__ import annotations

from math import gcd, isqrt

import numpy as np

from .kernels import rref_mod_p
from .rational import Q

# primes just below 2**31; products of two residues fit in int64
PRIMES = (
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
    2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
    2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
)


class VerificationError(RuntimeError):
    """Modular lifting did not produce an exactly verified kernel."""


# ---------------------------------------------------------------------------
# generic exact elimination


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form of a dense matrix (list of lists) over an exact field.

    Returns ``(R, pivots)`` with the zero rows dropped.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = Q(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int | None = None, one=None):
    """Basis of {v : A v = 0}, one vector per free column (that entry set to 1)."""
    if ncols is None:
        ncols = len(rows[0])
    r, pivots = rref(rows, ncols) if rows else ([], [])
    if one is None:
        one = Q(1)
    zero = one - one
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve the square nonsingular system ``a x = b`` (b a vector)."""
    nrow = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(nrow)]
    r, pivots = rref(aug, nrow)
    if len(pivots) != nrow:
        raise ZeroDivisionError("singular matrix")
    return [r[i][nrow] for i in range(nrow)]


# ---------------------------------------------------------------------------
# certified modular kernel of integer matrices


def _rational_reconstruct(u: int, mod: int):
    """a/b with a = b u (mod ``mod``) and |a|, b <= sqrt(mod / 2), or None."""
    bound = isqrt(mod // 2)
    r0, r1 = mod, u % mod
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Q(r1, s1)


def _dense(rows, ncols: int, p: int) -> np.ndarray:
    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for c, v in row.items():
            a[i, c] = v % p
    return a


def _kernel_mod(rows, ncols: int, p: int):
    red, piv = rref_mod_p(_dense(rows, ncols, p), p)
    return red, [int(c) for c in piv]


def _verify(rows, vec: dict) -> bool:
    den = 1
    for v in vec.values():
        d = int(v.denominator)
        den = den * d // gcd(den, d)
    w = {c: int(v * den) for c, v in vec.items()}
    for row in rows:
        s = 0
        for c, a in row.items():
            x = w.get(c)
            if x:
                s += a * x
        if s:
            return False
    return True


def nullspace_integer(rows, ncols: int, max_primes: int = len(PRIMES)):
    """Certified rational kernel basis of a sparse integer matrix.

    ``rows`` is a list of ``{column: int}`` dicts.  Returns a list of
    ``{column: Q}`` vectors, one per free column of the echelon form, each
    having a 1 in its free column and zeros in the other free columns.
    """
    if not rows:
        return [{c: Q(1)} for c in range(ncols)]
    best = None  # (pivots, [residue matrices], [primes])
    for p in PRIMES[:max_primes]:
        red, piv = _kernel_mod(rows, ncols, p)
        # over Q the rank is maximal and the pivot pattern lexicographically earliest
        if best is None or (-len(piv), piv) < (-len(best[0]), best[0]):
            best = (piv, [red], [p])
        elif piv == best[0]:
            best[1].append(red)
            best[2].append(p)
        else:
            continue  # unlucky prime
        piv, reds, ps = best
        pivset = set(piv)
        free = [c for c in range(ncols) if c not in pivset]
        if not free:
            return []
        mod = 1
        for q in ps:
            mod *= q
        basis = []
        ok = True
        for f in free:
            vec = {f: Q(1)}
            for i, pc in enumerate(piv):
                res = [int(-r[i, f]) % q for r, q in zip(reds, ps)]
                u = _crt(res, ps)
                if u == 0:
                    continue
                val = _rational_reconstruct(u, mod)
                if val is None:
                    ok = False
                    break
                vec[pc] = val
            if not ok or not _verify(rows, vec):
                ok = False
                break
            basis.append(vec)
        if ok:
            return basis
    raise VerificationError("modular kernel could not be lifted and verified; add primes")


def _crt(residues, primes) -> int:
    x, m = 0, 1
    for r, p in zip(residues, primes):
        t = ((r - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x
