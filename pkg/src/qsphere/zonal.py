"""Zonal kernels Z_{h,m}, kernel-coefficient algebra and weighted norms.

Z_{h,m}(x, e) is expanded as an exact polynomial in x through the generators

    s = Re<x, e>,   t = |<x, e>|^2,   r = |x|^2,

using  |<x,e>|^q U_q(s / |<x,e>|) = sum_j (-1)^j C(q-j, j) (2s)^(q-2j) t^j  and
r^m G_m(t / r) = sum_k g_k t^k r^(m-k), so no square root ever appears and the
result is homogeneous of degree h.

A ``KernelPoly`` stores the coefficients of sum a_{h,m} Z_{h,m}; multiplication
by w^2 = 1 - t acts on coefficients through a three-term recurrence, which
gives exact weighted L^2 norms without expanding any polynomial.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .harmonic import SpectralIndex, dim_H_hm, index_set
from .poly import Poly, mult_norm2
from .quat import HPoint, Quaternion, SpherePoint, base_point, hermitian_inner, sample_sphere_array
from .rational import RATIONAL_TYPES, ComplexRational, Q, format_rational, parse_rational
from .special import chebyshev_U_terms, jacobi_G


def in_range(h: int, m: int) -> bool:
    return h >= 0 and m >= 0 and 2 * m <= h


def zonal_constant(n: int, h: int, m: int):
    """(h-2m+1)(h+2n-1) / ((2n-2)(2n-1)) * C(h-m+2n-2, 2n-3)."""
    return Q((h - 2 * m + 1) * (h + 2 * n - 1), (2 * n - 2) * (2 * n - 1)) * math.comb(
        h - m + 2 * n - 2, 2 * n - 3
    )


def zonal_jacobi(n: int, h: int, m: int):
    return jacobi_G(m, 2 * n - 3, h - 2 * m + 1)


# ---------------------------------------------------------------------------
# exact polynomial form


def generators(n: int, e: SpherePoint | None = None):
    """(s, t, r) as exact polynomials in x for the exact base point e."""
    if e is None:
        e = base_point(n)
    if not e.exact:
        raise TypeError("exact expansion needs an exact base point")
    if e.n != n:
        raise ValueError(f"dimension mismatch: n={n} vs n={e.n}")
    xs = HPoint(
        tuple(Quaternion(*(Poly.var(n, 4 * j + c) for c in range(4))) for j in range(n))
    )
    ip = hermitian_inner(xs, e.point)
    s = ip.a
    t = ip.a * ip.a + ip.b * ip.b + ip.c * ip.c + ip.d * ip.d
    r = mult_norm2(Poly.const(n))
    return s, t, r


class _Powers:
    def __init__(self, base: Poly):
        self._p = [Poly.const(base.n), base]

    def __getitem__(self, k: int) -> Poly:
        while len(self._p) <= k:
            self._p.append(self._p[-1] * self._p[1])
        return self._p[k]


@lru_cache(maxsize=None)
def _zonal_cached(n: int, h: int, m: int, e_coords: tuple) -> Poly:
    e = base_point(n) if not e_coords else SpherePoint.from_real(e_coords, exact=True)
    s, t, r = generators(n, e)
    sp, tp, rp = _Powers(s), _Powers(t), _Powers(r)
    q = h - 2 * m
    u_part = Poly.zero(n)
    for j, c in chebyshev_U_terms(q):
        u_part = u_part + sp[q - 2 * j] * tp[j] * c
    g = zonal_jacobi(n, h, m)
    g_part = Poly.zero(n)
    for k in range(m + 1):
        gk = g.coeff(k)
        if gk:
            g_part = g_part + tp[k] * rp[m - k] * gk
    return u_part * g_part * zonal_constant(n, h, m)


def zonal_Z(n: int, h: int, m: int, e: SpherePoint | None = None) -> Poly:
    """Z_{h,m}(x, e) as an exact homogeneous polynomial of degree h in x.

    Off-range indices give the zero polynomial.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not in_range(h, m):
        return Poly.zero(n)
    key = () if e is None else tuple(str(v) for v in e.real())
    if key and e.n != n:
        raise ValueError(f"dimension mismatch: n={n} vs n={e.n}")
    return _zonal_cached(n, h, m, key)


# ---------------------------------------------------------------------------
# float evaluation on the sphere


def zonal_eval(n: int, h: int, m: int, s, t):
    """Z_{h,m} at points of the sphere given s = Re<x,e> and t = |<x,e>|^2 (arrays)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if not in_range(h, m):
        return np.zeros(np.broadcast(s, t).shape)
    q = h - 2 * m
    u = sum(float(c) * s ** (q - 2 * j) * t ** j for j, c in chebyshev_U_terms(q))
    g = zonal_jacobi(n, h, m)
    gv = np.zeros_like(t)
    for c in reversed(g.coeffs):
        gv = gv * t + float(c)
    return float(zonal_constant(n, h, m)) * u * gv


# ---------------------------------------------------------------------------
# recurrence coefficients


@dataclass(frozen=True)
class RecurrenceCoeffs:
    c_up: object
    c_mid: object
    c_down: object


def recurrence_coeffs(n: int, h: int, m: int) -> RecurrenceCoeffs:
    """t Z_{h,m} = c_mid Z_{h,m} + c_up Z_{h+2,m+1} + c_down Z_{h-2,m-1} on the sphere.

    Coefficients attached to indices outside I_Q are zero.
    """
    if not in_range(h, m):
        return RecurrenceCoeffs(Q(0), Q(0), Q(0))
    c_up = Q((m + 1) * (h - m + 2), (h + 2 * n) * (h + 2 * n + 1))
    c_mid = Q(1, 2) * (
        1 - Q((2 * n - 4 - h + 2 * m) * (h - 2 * m + 2 * n - 2), (h + 2 * n) * (h + 2 * n - 2))
    )
    if in_range(h - 2, m - 1):
        c_down = Q((m + 2 * n - 3) * (h - m + 2 * n - 2), (h + 2 * n - 3) * (h + 2 * n - 2))
    else:
        c_down = Q(0)
    return RecurrenceCoeffs(c_up, c_mid, c_down)


def recurrence_residual(n: int, h: int, m: int, e: SpherePoint | None = None) -> Poly:
    """t Z - (c_mid r Z + c_up Z_up + c_down r^2 Z_down); zero iff the identity holds."""
    _, t, r = generators(n, e)
    c = recurrence_coeffs(n, h, m)
    z = zonal_Z(n, h, m, e)
    rhs = z * r * c.c_mid + zonal_Z(n, h + 2, m + 1, e) * c.c_up
    if c.c_down:
        rhs = rhs + zonal_Z(n, h - 2, m - 1, e) * (r * r) * c.c_down
    return t * z - rhs


def gamma_mid_closed(n: int, h: int, m: int):
    """(1 - c_mid)^2 + c_up(h,m) c_down(h+2,m+1) + c_down(h,m) c_up(h-2,m-1)."""
    c = recurrence_coeffs(n, h, m)
    above = recurrence_coeffs(n, h + 2, m + 1)
    below = recurrence_coeffs(n, h - 2, m - 1)
    return (1 - c.c_mid) ** 2 + c.c_up * above.c_down + c.c_down * below.c_up


# ---------------------------------------------------------------------------
# kernel polynomials


def _is_exact(v) -> bool:
    return isinstance(v, RATIONAL_TYPES + (ComplexRational,))


def _abs2(v):
    if isinstance(v, ComplexRational):
        return v.abs2()
    if isinstance(v, RATIONAL_TYPES):
        return v * v
    return abs(v) ** 2


def _mul(a, c):
    """a * c for a rational c, keeping float coefficients float."""
    return a * c if _is_exact(a) else a * float(c)


def _to_float(v):
    if isinstance(v, ComplexRational):
        return float(v.re) if v.is_real() else complex(v)
    return float(v) if isinstance(v, RATIONAL_TYPES) else v


def _conj(v):
    if isinstance(v, ComplexRational):
        return v.conj()
    if isinstance(v, complex):
        return v.conjugate()
    return v


class KernelPoly:
    """Finite combination sum a_{h,m} Z_{h,m}, coefficients exact or float."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        self.n = n
        clean = {}
        for key, v in (coeffs or {}).items():
            idx = key if isinstance(key, SpectralIndex) else SpectralIndex(*key)
            if v:
                clean[(idx.h, idx.m)] = v
        self.coeffs = clean

    @classmethod
    def delta(cls, n: int, h: int, m: int, value=Q(1)) -> "KernelPoly":
        return cls(n, {(h, m): value})

    def __eq__(self, other):
        if not isinstance(other, KernelPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self):
        body = ", ".join(f"({h},{m}): {v}" for (h, m), v in self.items())
        return f"KernelPoly(n={self.n}, {{{body}}})"

    def items(self):
        return sorted(self.coeffs.items())

    def support(self) -> list:
        return sorted(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def _combine(self, other: "KernelPoly", sign: int) -> "KernelPoly":
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + sign * v if k in out else sign * v
        return KernelPoly(self.n, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "KernelPoly":
        return KernelPoly(self.n, {k: v * c for k, v in self.coeffs.items()})

    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in self.coeffs.values())

    def expand(self, e: SpherePoint | None = None) -> Poly:
        """sum a_{h,m} Z_{h,m}(x, e) as an exact (generally inhomogeneous) polynomial."""
        acc = Poly.zero(self.n)
        for (h, m), v in self.items():
            acc = acc + zonal_Z(self.n, h, m, e) * v
        return acc

    def evaluate(self, s, t):
        """Float values on the sphere from s = Re<x,y>, t = |<x,y>|^2."""
        out = 0
        for (h, m), v in self.items():
            out = out + complex(v) * zonal_eval(self.n, h, m, s, t)
        return out

    def to_json(self) -> dict:
        rows = []
        for (h, m), v in self.items():
            if _is_exact(v):
                c = v if isinstance(v, ComplexRational) else ComplexRational(v)
                rows.append({"h": h, "m": m, "re": format_rational(c.re), "im": format_rational(c.im)})
            else:
                c = complex(v)
                rows.append({"h": h, "m": m, "re": c.real, "im": c.imag})
        return {"n": self.n, "coeffs": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "KernelPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        coeffs = {}
        for row in obj["coeffs"]:
            if isinstance(row["re"], str):
                v = ComplexRational(parse_rational(row["re"]), parse_rational(row["im"]))
                if v.im == 0:
                    v = v.re
            else:
                v = complex(row["re"], row["im"])
                if v.imag == 0:
                    v = v.real
            coeffs[(row["h"], row["m"])] = v
        return cls(int(obj["n"]), coeffs)


def weight2_step(kp: KernelPoly) -> KernelPoly:
    """Coefficients of w^2 K, using w^2 Z = (1 - c_mid) Z - c_up Z_up - c_down Z_down."""
    out: dict = {}

    def add(key, v):
        if v:
            out[key] = out[key] + v if key in out else v

    for (h, m), a in kp.coeffs.items():
        c = recurrence_coeffs(kp.n, h, m)
        add((h, m), _mul(a, 1 - c.c_mid))
        add((h + 2, m + 1), -_mul(a, c.c_up))
        if c.c_down:
            add((h - 2, m - 1), -_mul(a, c.c_down))
    return KernelPoly(kp.n, out)


@dataclass(frozen=True)
class GammaCoeffs:
    mid: object
    up: object
    down: object
    upup: object
    downdown: object


def gamma_coeffs(n: int, h: int, m: int) -> GammaCoeffs:
    """Coefficients of w^4 Z_{h,m} on Z_{h,m}, Z_{h+-2,m+-1}, Z_{h+-4,m+-2}, by composition."""
    SpectralIndex(h, m)
    w4 = weight2_step(weight2_step(KernelPoly.delta(n, h, m)))
    get = lambda dh, dm: w4.coeffs.get((h + dh, m + dm), Q(0))  # noqa: E731
    return GammaCoeffs(get(0, 0), get(2, 1), get(-2, -1), get(4, 2), get(-4, -2))


@lru_cache(maxsize=200_000)
def gamma_mid(n: int, h: int, m: int):
    """gamma_mid from the closed form (checked against ``gamma_coeffs`` in the tests)."""
    return gamma_mid_closed(n, h, m)


def kernel_L2_norm_sq(kp: KernelPoly):
    """sum dim H_{h,m} |a_{h,m}|^2, the squared L^2 norm of K(., y)."""
    acc = 0
    for (h, m), a in kp.coeffs.items():
        acc = acc + dim_H_hm(kp.n, h, m) * _abs2(a)
    return acc


def _pairing(kp: KernelPoly, other: KernelPoly):
    acc = 0
    for key, a in kp.coeffs.items():
        b = other.coeffs.get(key)
        if b:
            acc = acc + dim_H_hm(kp.n, *key) * a * _conj(b)
    return acc


def weighted_L2_even(kp: KernelPoly, alpha: int):
    """Integral of w^alpha |K(., y)|^2 for alpha in {0, 2, 4, ...}, exactly."""
    if alpha < 0 or alpha % 2:
        raise ValueError("weighted_L2_even needs an even alpha >= 0; use the M_alpha majorant")
    w = kp
    for _ in range(alpha // 2):
        w = weight2_step(w)
    val = _pairing(w, kp)
    if isinstance(val, ComplexRational):
        if val.im:
            raise ArithmeticError("weighted norm has a nonzero imaginary part")
        return val.re
    return val


def M_alpha(kp: KernelPoly, alpha) -> KernelPoly:
    """Diagonal rescaling a_{h,m} -> (5 gamma_mid)^(alpha/4) a_{h,m}.

    Exact when alpha is a multiple of 4, float otherwise.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    out = {}
    for (h, m), a in kp.coeffs.items():
        g5 = 5 * gamma_mid(kp.n, h, m)
        if isinstance(alpha, int) and alpha % 4 == 0:
            out[(h, m)] = _mul(a, g5 ** (alpha // 4))
        else:
            out[(h, m)] = _to_float(a) * float(g5) ** (float(alpha) / 4)
    return KernelPoly(kp.n, out)


def majorant_L2_sq(kp: KernelPoly, beta):
    """||M^beta K||_2^2 = sum dim (5 gamma_mid)^(beta/2) |a|^2 (exact for even beta)."""
    acc = 0
    for (h, m), a in kp.coeffs.items():
        g5 = 5 * gamma_mid(kp.n, h, m)
        if isinstance(beta, int) and beta % 2 == 0 and _is_exact(a):
            acc = acc + dim_H_hm(kp.n, h, m) * g5 ** (beta // 2) * _abs2(a)
        else:
            f = float(g5) ** (float(beta) / 2)
            acc = acc + dim_H_hm(kp.n, h, m) * f * float(_abs2(a))
    return acc


# ---------------------------------------------------------------------------
# Monte Carlo on the sphere


def mc_weighted_L2(kp: KernelPoly, power: float, samples: int, seed: int, batch: int = 200_000):
    """Monte Carlo estimate of the integral of w^power |K(., e)|^2, with its standard error."""
    rng = np.random.default_rng(seed)
    total = total2 = 0.0
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        x = sample_sphere_array(rng, k, kp.n)
        y1 = x[:, :4]
        s = y1[:, 0]
        t = np.einsum("ij,ij->i", y1, y1)
        val = np.abs(kp.evaluate(s, t)) ** 2 * np.clip(1.0 - t, 0.0, None) ** (power / 2)
        total += val.sum()
        total2 += (val * val).sum()
        done += k
    mean = total / samples
    var = max(total2 / samples - mean * mean, 0.0)
    return mean, math.sqrt(var / samples)


@dataclass
class InterpolationReport:
    alpha: float
    lhs: float  # ||w^alpha K||_2^2
    rhs: float  # ||M^alpha K||_2^2
    method: str
    stderr: float
    holds: bool


def interpol_inequality_check(kp: KernelPoly, alpha, samples: int = 10**6, seed: int = 0):
    """Test ||w^alpha K(., y)||_2 <= ||M^alpha K(., y)||_2 (compared as squares).

    alpha in {0, 1, 2}: the left side is exact (it is a weighted norm with even
    power 2 alpha); the right side is exact for alpha in {0, 2}.  Other alpha
    use a Monte Carlo left side, accepted within five standard errors.
    """
    rhs = majorant_L2_sq(kp, alpha)
    if alpha in (0, 1, 2):
        lhs = weighted_L2_even(kp, 2 * int(alpha))
        if alpha == 1:
            return InterpolationReport(1.0, float(lhs), float(rhs), "exact-lhs", 0.0,
                                       float(lhs) <= float(rhs) * (1 + 1e-9))
        return InterpolationReport(float(alpha), lhs, rhs, "exact", 0.0, lhs <= rhs)
    est, err = mc_weighted_L2(kp, 2 * float(alpha), samples, seed)
    return InterpolationReport(float(alpha), est, float(rhs), "monte-carlo", err,
                               est <= float(rhs) + 5 * err)


def interpol_inequality_mc(kp: KernelPoly, alpha, samples: int, seed: int = 0):
    """Monte Carlo version of the check for any alpha (including integers)."""
    rhs = float(majorant_L2_sq(kp, alpha))
    est, err = mc_weighted_L2(kp, 2 * float(alpha), samples, seed)
    return InterpolationReport(float(alpha), est, rhs, "monte-carlo", err, est <= rhs + 5 * err)


def recurrence_table(n: int, h_max: int) -> list:
    """Rows (h, m, c_up, c_mid, c_down, gamma_mid, dim) as exact rationals."""
    rows = []
    for idx in index_set(h_max):
        c = recurrence_coeffs(n, idx.h, idx.m)
        rows.append((idx.h, idx.m, c.c_up, c.c_mid, c.c_down, gamma_mid(n, idx.h, idx.m),
                     dim_H_hm(n, idx.h, idx.m)))
    return rows
