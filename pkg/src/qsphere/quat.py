"""Quaternions, points of H^n and of the unit sphere S^{4n-1}.

Real coordinates are ordered ``(a_1, b_1, c_1, d_1, ..., a_n, b_n, c_n, d_n)``
where ``x_j = a_j + b_j i + c_j j + d_j k``.  H^n is a left H-module:
scalars multiply coordinates on the left.

Quaternion components may be exact rationals, floats, or any ring element
supporting ``+``, ``-`` and ``*`` (the polynomial engine uses ``Poly``
components to build ``<x, e>`` symbolically).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .rational import Q, RATIONAL_TYPES, to_q

FLOAT_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    a: object = 0
    b: object = 0
    c: object = 0
    d: object = 0

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quat_mul(self, other)

    def scale(self, s) -> "Quaternion":
        """Multiply every component by the real scalar ``s``."""
        return Quaternion(self.a * s, self.b * s, self.c * s, self.d * s)

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        """``|x|^2 = x conj(x)``, returned as a real scalar."""
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def components(self) -> tuple:
        return (self.a, self.b, self.c, self.d)


ONE = Quaternion(1, 0, 0, 0)
QI = Quaternion(0, 1, 0, 0)
QJ = Quaternion(0, 0, 1, 0)
QK = Quaternion(0, 0, 0, 1)
UNITS = {"i": QI, "j": QJ, "k": QK}


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product, from i^2 = j^2 = k^2 = ijk = -1."""
    a1, b1, c1, d1 = p.a, p.b, p.c, p.d
    a2, b2, c2, d2 = q.a, q.b, q.c, q.d
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


@dataclass(frozen=True)
class HPoint:
    coords: tuple

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def from_real(cls, values: Sequence) -> "HPoint":
        if len(values) % 4:
            raise ValueError("real coordinate vector length must be a multiple of 4")
        return cls(tuple(Quaternion(*values[4 * j:4 * j + 4]) for j in range(len(values) // 4)))

    def real(self) -> tuple:
        return tuple(c for x in self.coords for c in x.components())

    def left_mul(self, q: Quaternion) -> "HPoint":
        return HPoint(tuple(q * x for x in self.coords))

    def __add__(self, other: "HPoint") -> "HPoint":
        _check_dims(self, other)
        return HPoint(tuple(x + y for x, y in zip(self.coords, other.coords)))


@dataclass(frozen=True)
class SpherePoint:
    """A point with <x, x> = 1, tagged with its scalar domain."""

    point: HPoint
    exact: bool

    def __post_init__(self):
        nrm = sum((x.norm2() for x in self.point.coords), 0)
        if self.exact:
            if any(not isinstance(c, RATIONAL_TYPES) for c in self.point.real()):
                raise TypeError("exact sphere point needs rational coordinates")
            if nrm != 1:
                raise ValueError(f"exact point is not on the unit sphere (|x|^2 = {nrm})")
        elif abs(math.sqrt(float(nrm)) - 1.0) > FLOAT_UNIT_TOL:
            raise ValueError(f"float point is not on the unit sphere (|x| = {math.sqrt(nrm)})")

    @property
    def n(self) -> int:
        return self.point.n

    def real(self) -> tuple:
        return self.point.real()

    @classmethod
    def from_real(cls, values: Sequence, exact: bool | None = None) -> "SpherePoint":
        if exact is None:
            exact = all(isinstance(v, RATIONAL_TYPES + (str,)) for v in values)
        vals = [to_q(v) for v in values] if exact else [float(v) for v in values]
        return cls(HPoint.from_real(vals), exact)


def base_point(n: int, exact: bool = True) -> SpherePoint:
    """e = (1, 0, ..., 0)."""
    one, zero = (Q(1), Q(0)) if exact else (1.0, 0.0)
    vals = [zero] * (4 * n)
    vals[0] = one
    return SpherePoint(HPoint.from_real(vals), exact)


def _check_dims(x: HPoint, y: HPoint) -> None:
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: n={x.n} vs n={y.n}")


def _as_hpoint(x) -> HPoint:
    return x.point if isinstance(x, SpherePoint) else x


def hermitian_inner(x, y) -> Quaternion:
    """<x, y> = sum_j x_j conj(y_j)."""
    x, y = _as_hpoint(x), _as_hpoint(y)
    _check_dims(x, y)
    acc = None
    for xj, yj in zip(x.coords, y.coords):
        t = quat_mul(xj, yj.conj())
        acc = t if acc is None else acc + t
    return acc


def weight_w_sq(x: SpherePoint, y: SpherePoint):
    """w(x, y)^2 = 1 - |<x, y>|^2, exact for exact points."""
    v = 1 - hermitian_inner(x, y).norm2()
    if x.exact and y.exact:
        if v < 0:
            raise ValueError("negative radicand: inputs are not unit vectors")
        return v
    v = float(v)
    if v < -FLOAT_UNIT_TOL:
        raise ValueError(f"negative radicand {v}: inputs are not unit vectors")
    return max(v, 0.0)


def weight_w(x: SpherePoint, y: SpherePoint) -> float:
    return math.sqrt(float(weight_w_sq(x, y)))


def quasi_dist(x: SpherePoint, y: SpherePoint) -> float:
    """rho(x, y) = |1 - <x, y>|^{1/2}."""
    d = ONE - hermitian_inner(x, y)
    return float(d.norm2()) ** 0.25


def sample_sphere(rng_seed, n: int) -> SpherePoint:
    """One point drawn from the normalized surface measure on S^{4n-1}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.default_rng(rng_seed)
    v = sample_sphere_array(rng, 1, n)[0]
    return SpherePoint(HPoint.from_real([float(t) for t in v]), exact=False)


def sample_sphere_array(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """``count`` uniform points as a ``(count, 4n)`` array of real coordinates."""
    g = rng.standard_normal((count, 4 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g


def inner_with_base(x: np.ndarray) -> np.ndarray:
    """Rows of ``<x, e>`` for e = (1, 0, ..., 0); this is just the first quaternion."""
    return x[:, :4]
