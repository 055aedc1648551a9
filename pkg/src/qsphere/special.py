"""Chebyshev U and shifted Jacobi polynomials with exact rational coefficients.

Coefficients come straight from the explicit finite sums; the three-term
identity in ``jacobi_three_term`` is kept separate so it can serve as an
independent exact cross-check.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb, factorial

from .rational import Q


class Poly1:
    """Univariate polynomial, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly1):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly1") -> "Poly1":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly1([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self):
        return Poly1([-c for c in self.coeffs])

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + (-other)

    def scale(self, s) -> "Poly1":
        return Poly1([c * s for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return Poly1()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly1(out)

    __rmul__ = __mul__

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Q(0)

    def __repr__(self):
        return f"Poly1({[str(c) for c in self.coeffs]})"


T = Poly1([0, 1])


@lru_cache(maxsize=None)
def chebyshev_U(q: int) -> Poly1:
    """U_q(t) = sum_j (-1)^j C(q-j, j) (2t)^(q-2j)."""
    if q < 0:
        raise ValueError("q must be >= 0")
    cs = [Q(0)] * (q + 1)
    for j in range(q // 2 + 1):
        cs[q - 2 * j] += (-1) ** j * comb(q - j, j) * 2 ** (q - 2 * j)
    return Poly1(cs)


def chebyshev_U_terms(q: int) -> list:
    """[(j, coefficient of s^(q-2j) t^j)] for |<x,e>|^q U_q(s / |<x,e>|), t = |<x,e>|^2."""
    return [(j, (-1) ** j * comb(q - j, j) * 2 ** (q - 2 * j)) for j in range(q // 2 + 1)]


@lru_cache(maxsize=None)
def jacobi_G(m: int, alpha: int, beta: int) -> Poly1:
    """G_m^(alpha,beta)(t) = P_m^(alpha,beta)(2t - 1), from the explicit sum."""
    if m < 0:
        return Poly1()
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    pref = Q(factorial(beta + m), factorial(m) * factorial(alpha + beta + m))
    cs = [Q(0)] * (m + 1)
    for l in range(m + 1):
        cs[m - l] = pref * (-1) ** l * comb(m, l) * Q(
            factorial(alpha + beta + 2 * m - l), factorial(beta + m - l)
        )
    return Poly1(cs)


def jacobi_three_term(m: int, alpha: int, beta: int) -> tuple:
    """(r_up, r_mid, r_down) with t G_m = r_up G_{m+1} + r_mid G_m + r_down G_{m-1}.

    Where a printed denominator vanishes (only for alpha = beta = 0, m = 0)
    the coefficient is replaced by its value forced by degree matching; r_down
    multiplies G_{-1} = 0 when m = 0.
    """
    s = 2 * m + alpha + beta
    r_up = Q((m + 1) * (m + alpha + beta + 1), (s + 2) * (s + 1))
    if s == 0:
        r_mid = Q(1, 2)
    else:
        r_mid = Q(1, 2) * (1 - Q((alpha - beta) * (alpha + beta), (s + 2) * s))
    if s == 0:
        r_down = Q(0)
    else:
        r_down = Q((m + alpha) * (m + beta), (s + 1) * s)
    return r_up, r_mid, r_down
