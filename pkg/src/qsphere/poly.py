"""Sparse exact polynomials on R^{4n} and the differential operators acting on them.

A ``Poly`` is an immutable map from exponent tuples (length 4n, coordinate
order ``a_1, b_1, c_1, d_1, a_2, ...``) to ``ComplexRational`` coefficients.
Zero coefficients are never stored, so equality is dictionary equality.

Sign convention: ``laplace_nonneg`` is the nonnegative Laplacian
``-sum_i d^2/dxi_i^2``; with it the spherical Laplacian has the positive
eigenvalues ``h(h + 4n - 2)`` on harmonics of degree ``h``.
"""
from __future__ import annotations

import json
import os
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial, prod

import numpy as np

from .rational import ComplexRational, Q, RATIONAL_TYPES, format_rational, parse_rational


class BudgetExceeded(RuntimeError):
    """Raised when an operation would exceed the monomial-count budget."""


_BUDGET = [int(os.environ.get("QS_BUDGET_TERMS", 10**6))]


def budget_terms() -> int:
    return _BUDGET[0]


def set_budget_terms(value: int) -> None:
    _BUDGET[0] = int(value)


def check_budget(count: int, what: str) -> None:
    if count > _BUDGET[0]:
        raise BudgetExceeded(f"{what}: {count} terms exceeds budget {_BUDGET[0]} (QS_BUDGET_TERMS)")


def _coef(c) -> ComplexRational:
    return c if type(c) is ComplexRational else ComplexRational.coerce(c)


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            nv = 4 * n
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != nv or min(exp) < 0:
                    raise ValueError(f"bad exponent {exp} for n={n}")
                c = _coef(c)
                if c:
                    clean[exp] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        # terms must already hold ComplexRational values; zeros are dropped here
        p = object.__new__(cls)
        p.n = n
        p.terms = {e: c for e, c in terms.items() if c}
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c=1) -> "Poly":
        return cls._raw(n, {(0,) * (4 * n): _coef(c)})

    @classmethod
    def monomial(cls, n: int, exp, c=1) -> "Poly":
        return cls(n, {tuple(exp): c})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        exp = [0] * (4 * n)
        exp[i] = 1
        return cls._raw(n, {tuple(exp): ComplexRational(1)})

    # -- basic protocol ------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, RATIONAL_TYPES + (ComplexRational,)):
            return self == Poly.const(self.n, other) if other else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"Poly(n={self.n}, 0)"
        parts = [f"{c!r}*x^{list(e)}" for e, c in self.sorted_terms()[:6]]
        more = "" if len(self.terms) <= 6 else f" + ... ({len(self.terms)} terms)"
        return f"Poly(n={self.n}, " + " + ".join(parts) + more + ")"

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self):
        """The common total degree of all stored terms, or None if mixed or zero."""
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def conj(self) -> "Poly":
        return Poly._raw(self.n, {e: c.conj() for e, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.terms.values())

    # -- ring operations ---------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            out[e] = c if prev is None else prev + c
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- evaluation -----------------------------------------------------
    def eval_exact(self, x) -> ComplexRational:
        """Exact value at a point with rational real coordinates."""
        vals = x.real() if hasattr(x, "real") and callable(x.real) else tuple(x)
        acc = ComplexRational(0)
        for e, c in self.terms.items():
            m = Q(1)
            for v, k in zip(vals, e):
                if k:
                    m *= Q(v) ** k
            acc = acc + c * m
        return acc

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(e), "re": format_rational(c.re), "im": format_rational(c.im)}
                for e, c in self.sorted_terms()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "Poly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        n = int(obj["n"])
        terms = {}
        for t in obj["terms"]:
            exp = tuple(t["exp"])
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = ComplexRational(parse_rational(t["re"]), parse_rational(t["im"]))
        return cls(n, terms)


# ---------------------------------------------------------------------------
# ring operations as functions


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_scale(p: Poly, c) -> Poly:
    c = _coef(c)
    if not c:
        return Poly.zero(p.n)
    return Poly._raw(p.n, {e: v * c for e, v in p.terms.items()})


def poly_mul(p: Poly, q: Poly) -> Poly:
    p._check(q)
    check_budget(len(p) * len(q), "poly_mul")
    out: dict = {}
    qitems = list(q.terms.items())
    for e1, c1 in p.terms.items():
        for e2, c2 in qitems:
            e = tuple(a + b for a, b in zip(e1, e2))
            v = c1 * c2
            prev = out.get(e)
            out[e] = v if prev is None else prev + v
    return Poly._raw(p.n, out)


def monomials(n: int, h: int) -> list:
    """All exponent tuples of total degree ``h`` in 4n variables, sorted."""
    nv = 4 * n
    if h < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nv), h):
        e = [0] * nv
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort()
    return out


def dim_homogeneous(n: int, h: int) -> int:
    return comb(h + 4 * n - 1, 4 * n - 1) if h >= 0 else 0


# ---------------------------------------------------------------------------
# differential operators


def euler_theta(p: Poly) -> Poly:
    """Degree operator: multiplies each monomial by its total degree."""
    return Poly._raw(p.n, {e: c * sum(e) for e, c in p.terms.items()})


def laplace_nonneg(p: Poly) -> Poly:
    """-sum_i d^2 p / dxi_i^2."""
    out: dict = {}
    for e, c in p.terms.items():
        for i, k in enumerate(e):
            if k >= 2:
                ne = e[:i] + (k - 2,) + e[i + 1:]
                v = c * (-k * (k - 1))
                prev = out.get(ne)
                out[ne] = v if prev is None else prev + v
    return Poly._raw(p.n, out)


def mult_norm2(p: Poly) -> Poly:
    """Multiply by |x|^2 = sum_i xi_i^2."""
    out: dict = {}
    for e, c in p.terms.items():
        for i in range(len(e)):
            ne = e[:i] + (e[i] + 2,) + e[i + 1:]
            prev = out.get(ne)
            out[ne] = c if prev is None else prev + c
    return Poly._raw(p.n, out)


# Linear vector fields x -> -u x, as (target coordinate k, source coordinate, sign)
# within one quaternion block (a, b, c, d): T_u = sum_k sign * xi_src * d/dxi_k.
#   -i x = ( b, -a,  d, -c)
#   -j x = ( c, -d, -a,  b)
#   -k x = ( d,  c, -b, -a)
FIELD_TABLE = {
    "i": ((0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)),
    "j": ((0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)),
    "k": ((0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)),
}


def field_matrix(u: str) -> np.ndarray:
    """4x4 integer matrix M with (T_u field)(x) = M @ x on one quaternion block."""
    m = np.zeros((4, 4), dtype=int)
    for k, src, sign in FIELD_TABLE[u]:
        m[k, src] = sign
    return m


def vector_field_T(u: str, p: Poly) -> Poly:
    """Derivative of p along the field x -> -u x, u in {'i', 'j', 'k'}."""
    table = FIELD_TABLE[u]
    out: dict = {}
    for e, c in p.terms.items():
        for base in range(0, len(e), 4):
            for k, src, sign in table:
                ek = e[base + k]
                if not ek:
                    continue
                ne = list(e)
                ne[base + k] -= 1
                ne[base + src] += 1
                ne = tuple(ne)
                v = c * (sign * ek)
                prev = out.get(ne)
                out[ne] = v if prev is None else prev + v
    return Poly._raw(p.n, out)


def gamma_op(p: Poly) -> Poly:
    """Gamma p = -(T_i^2 + T_j^2 + T_k^2) p."""
    acc = Poly.zero(p.n)
    for u in "ijk":
        acc = acc + vector_field_T(u, vector_field_T(u, p))
    return -acc


def sphere_laplacian(p: Poly) -> Poly:
    """|x|^2 Delta p + Theta^2 p + (4n - 2) Theta p, with the nonnegative Delta."""
    th = euler_theta(p)
    return mult_norm2(laplace_nonneg(p)) + euler_theta(th) + th * (4 * p.n - 2)


_I = ComplexRational(0, 1)


def ladder(op: str, p: Poly) -> Poly:
    """Ladder operators: '0' -> i T_i, '+' -> i T_j - T_k, '-' -> i T_j + T_k."""
    if op == "0":
        return vector_field_T("i", p) * _I
    if op in ("+", "-"):
        tj = vector_field_T("j", p) * _I
        tk = vector_field_T("k", p)
        return tj - tk if op == "+" else tj + tk
    raise ValueError(f"unknown ladder operator {op!r}")


def fischer_inner(p: Poly, q: Poly) -> ComplexRational:
    """B(p, q) = p(d) conj(q) (0) = sum_alpha alpha! p_alpha conj(q_alpha)."""
    p._check(q)
    acc = ComplexRational(0)
    small, big = (p.terms, q.terms) if len(p) <= len(q) else (q.terms, p.terms)
    for e in small:
        if e in big:
            w = prod(factorial(k) for k in e)
            acc = acc + p.terms[e] * q.terms[e].conj() * w
    return acc


@lru_cache(maxsize=200_000)
def _moment_sorted(exps: tuple, d: int):
    if any(k % 2 for k in exps):
        return Q(0)
    num = 1
    for k in exps:
        for t in range(k - 1, 0, -2):
            num *= t
    den = 1
    for t in range(sum(exps) // 2):
        den *= d + 2 * t
    return Q(num, den)


def sphere_moment(exp) -> "Q":
    """Integral of xi^exp over S^{d-1} against the normalized surface measure."""
    return _moment_sorted(tuple(sorted(k for k in exp if k)), len(exp))


def sphere_integral_exact(p: Poly) -> ComplexRational:
    acc = ComplexRational(0)
    for e, c in p.terms.items():
        m = sphere_moment(e)
        if m:
            acc = acc + c * m
    return acc


def sphere_pairing(p: Poly, q: Poly) -> ComplexRational:
    """Integral of p * conj(q) over the sphere, without forming the product."""
    p._check(q)
    acc = ComplexRational(0)
    qitems = [(e, c.conj()) for e, c in q.terms.items()]
    for e1, c1 in p.terms.items():
        par = tuple(k & 1 for k in e1)
        for e2, c2 in qitems:
            if any((a ^ b) & 1 for a, b in zip(par, e2)):
                continue
            m = sphere_moment(tuple(a + b for a, b in zip(e1, e2)))
            acc = acc + c1 * c2 * m
    return acc


def eval_float(p: Poly, x) -> np.ndarray | complex:
    """Evaluate at one point (SpherePoint/sequence) or at rows of a (N, 4n) array."""
    single = False
    if hasattr(x, "real") and callable(x.real):
        x = x.real()
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
        single = True
    if arr.shape[1] != 4 * p.n:
        raise ValueError(f"points have {arr.shape[1]} coordinates, expected {4 * p.n}")
    maxdeg = max((max(e) for e in p.terms), default=0)
    powers = np.ones((maxdeg + 1,) + arr.shape)
    for k in range(1, maxdeg + 1):
        powers[k] = powers[k - 1] * arr
    out = np.zeros(arr.shape[0], dtype=complex)
    cols = np.arange(arr.shape[1])
    for e, c in p.terms.items():
        term = np.prod(powers[np.asarray(e), :, cols].T, axis=1)
        out += complex(c) * term
    return complex(out[0]) if single else out
