"""Spectral multipliers of the sub-Laplacian and the estimates around them.

A multiplier F acts on the spectral variable s = sqrt(lambda_L); the kernel of
F(sqrt(L)) is the kernel polynomial with coefficients F(sqrt(lambda_L(h, m))).
All spectral sums are organised through the parametrisation

    a = h - m + n,  b = m + n - 1,   lambda_L / 4 = a b - n(n - 1),

which maps I_Q onto {(a, b) : b >= n - 1, a >= b + 1}.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import zeta

from .harmonic import SpectralIndex, dim_H_hm, lambda_L
from .kernels import weighted_ball_sums
from .quat import sample_sphere_array
from .zonal import KernelPoly, majorant_L2_sq, weighted_L2_even


# ---------------------------------------------------------------------------
# multiplier functions


class MultiplierFn:
    """F : [0, inf) -> C, evaluated at s = sqrt(lambda)."""

    exact_sup = True

    def __call__(self, s):
        raise NotImplementedError

    def sup_abs(self, lo: float, hi: float) -> float:
        """sup of |F| over the closed interval [lo, hi]."""
        raise NotImplementedError

    @property
    def support_max(self) -> float:
        """F vanishes on (support_max, inf); inf if it never does."""
        return math.inf

    def rescaled(self, c: float) -> "MultiplierFn":
        """The function u -> F(c u)."""
        raise NotImplementedError


@dataclass(frozen=True)
class BandIndicator(MultiplierFn):
    """1 on [a, b), 0 elsewhere."""

    a: float
    b: float

    def __call__(self, s):
        if np.ndim(s):
            s = np.asarray(s, dtype=float)
            return ((s >= self.a) & (s < self.b)).astype(float)
        return 1 if self.a <= s < self.b else 0

    def sup_abs(self, lo, hi):
        return 1.0 if (lo < self.b and hi >= self.a and hi >= lo) else 0.0

    @property
    def support_max(self):
        return self.b

    def rescaled(self, c):
        return BandIndicator(self.a / c, self.b / c)


@dataclass(frozen=True)
class BochnerRiesz(MultiplierFn):
    """(1 - t s^2)_+^delta, i.e. (1 - t lambda)_+^delta; delta = 0 gives 1[t lambda < 1]."""

    delta: float
    t: float

    def _value(self, s):
        base = 1.0 - self.t * np.asarray(s, dtype=float) ** 2
        pos = base > 0
        out = np.where(pos, np.abs(base) ** self.delta, 0.0)
        return out

    def __call__(self, s):
        v = self._value(s)
        return float(v) if np.ndim(v) == 0 else v

    def sup_abs(self, lo, hi):
        return float(self._value(max(lo, 0.0)))  # decreasing on [0, inf)

    @property
    def support_max(self):
        return 1.0 / math.sqrt(self.t)

    def rescaled(self, c):
        return BochnerRiesz(self.delta, self.t * c * c)


@dataclass(frozen=True)
class Heat(MultiplierFn):
    """exp(-t s^2) = exp(-t lambda)."""

    t: float

    def __call__(self, s):
        v = np.exp(-self.t * np.asarray(s, dtype=float) ** 2)
        return float(v) if np.ndim(v) == 0 else v

    def sup_abs(self, lo, hi):
        return float(self(max(lo, 0.0)))

    def rescaled(self, c):
        return Heat(self.t * c * c)


@dataclass(frozen=True)
class MihlinBump(MultiplierFn):
    """Smooth bump phi(s / scale) supported in [lo, hi] with peak 1 at the midpoint.

    phi(u) = exp(1 - 1 / (1 - v^2)) with v the affine map of [lo, hi] onto [-1, 1].
    """

    lo: float = 0.5
    hi: float = 1.0
    scale: float = 1.0

    def _phi(self, u):
        u = np.asarray(u, dtype=float)
        v = (2 * u - self.lo - self.hi) / (self.hi - self.lo)
        inside = np.abs(v) < 1
        vv = np.where(inside, v, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - vv * vv)), 0.0)

    def __call__(self, s):
        v = self._phi(np.asarray(s, dtype=float) / self.scale)
        return float(v) if np.ndim(v) == 0 else v

    def sup_abs(self, lo, hi):
        peak = 0.5 * (self.lo + self.hi) * self.scale
        return float(self(min(max(peak, lo), hi)))  # unimodal

    @property
    def support_max(self):
        return self.hi * self.scale

    def rescaled(self, c):
        return MihlinBump(self.lo, self.hi, self.scale / c)


@dataclass(frozen=True)
class Tabulated(MultiplierFn):
    """Piecewise-linear interpolation of (grid, values), zero outside the grid."""

    grid: tuple
    values: tuple

    def __post_init__(self):
        if len(self.grid) != len(self.values) or len(self.grid) < 2:
            raise ValueError("grid and values must have the same length >= 2")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")

    def __call__(self, s):
        x = np.asarray(s, dtype=float)
        g = np.asarray(self.grid, dtype=float)
        v = np.interp(x, g, np.asarray(self.values, dtype=float), left=0.0, right=0.0)
        return float(v) if np.ndim(v) == 0 else v

    def sup_abs(self, lo, hi):
        # |linear| is convex on each piece, so the max sits at lo, hi or a node
        pts = [lo, hi] + [g for g in self.grid if lo <= g <= hi]
        return float(max(abs(self(p)) for p in pts))

    @property
    def support_max(self):
        return float(self.grid[-1])

    def rescaled(self, c):
        return Tabulated(tuple(g / c for g in self.grid), self.values)


_SPEC_RE = re.compile(r"^\s*(\w+)\s*:(.*)$")


def _num(text: str) -> float:
    return float(Fraction(text.strip()))


def parse_multiplier(spec: str) -> MultiplierFn:
    """Parse ``band:a,b``, ``riesz:delta=..,t=..``, ``heat:t=..``,
    ``mihlin:lo=..,hi=..,scale=..`` or ``table:s0:v0,s1:v1,...``."""
    mt = _SPEC_RE.match(spec)
    if not mt:
        raise ValueError(f"malformed multiplier spec {spec!r}")
    kind, rest = mt.group(1).lower(), mt.group(2)
    parts = [p for p in rest.split(",") if p.strip()]
    try:
        if kind == "band":
            if len(parts) != 2:
                raise ValueError("band needs two endpoints")
            return BandIndicator(_num(parts[0]), _num(parts[1]))
        if kind == "table":
            pairs = [tuple(_num(x) for x in p.split(":")) for p in parts]
            return Tabulated(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))
        kw = {}
        for p in parts:
            key, val = p.split("=")
            kw[key.strip()] = _num(val)
        if kind == "riesz":
            return BochnerRiesz(kw["delta"], kw["t"])
        if kind == "heat":
            return Heat(kw["t"])
        if kind == "mihlin":
            return MihlinBump(**kw)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed multiplier spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown multiplier kind {kind!r}")


# ---------------------------------------------------------------------------
# discretised norm


@dataclass(frozen=True)
class NormN2:
    N: int
    value: float
    exact: bool = True


def norm_N2(F: MultiplierFn, N: int) -> NormN2:
    """(1/N sum_k sup_{[(k-1)/N, k/N]} |F|^2)^(1/2) over closed cells."""
    if N < 1:
        raise ValueError("N must be >= 1")
    total = sum(F.sup_abs((k - 1) / N, k / N) ** 2 for k in range(1, N + 1))
    return NormN2(N, math.sqrt(total / N), F.exact_sup)


# ---------------------------------------------------------------------------
# spectral enumeration


def ab_to_hm(n: int, a: int, b: int) -> tuple:
    return a + b - 2 * n + 1, b - n + 1


def spectrum_below(n: int, lam_max: int, strict: bool = False) -> list:
    """All (h, m) in I_Q with lambda_L <= lam_max (or < with ``strict``), sorted."""
    out = []
    b = n - 1
    while True:
        lam_first = 4 * ((b + 1) * b - n * (n - 1))
        if lam_first > lam_max or (strict and lam_first == lam_max):
            break
        a = b + 1
        while True:
            lam = 4 * (a * b - n * (n - 1))
            if lam > lam_max or (strict and lam == lam_max):
                break
            out.append(ab_to_hm(n, a, b))
            a += 1
        b += 1
    return sorted(out)


@dataclass
class EigCount:
    j: int
    members: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)


def enumerate_Ij(n: int, j: int) -> EigCount:
    """(h, m) with (j-1)^2 <= lambda_L < j^2, via the (a, b) factorisation."""
    if j < 1:
        raise ValueError("j must be >= 1")
    lo = (j - 1) ** 2 + 4 * n * (n - 1)  # bounds on 4ab
    hi = j * j + 4 * n * (n - 1)
    members = []
    b = n - 1
    while 4 * b * (b + 1) < hi:
        a_min = max(b + 1, -(-lo // (4 * b)) if b else b + 1)
        a = a_min
        while 4 * a * b < hi:
            if 4 * a * b >= lo:
                members.append(SpectralIndex(*ab_to_hm(n, a, b)))
            a += 1
        b += 1
    return EigCount(j, sorted(members))


def enumerate_Ij_bruteforce(n: int, j: int) -> EigCount:
    """Same set from a direct scan of h <= j^2 / (4(n-1)) (lambda_L >= 4(n-1)h)."""
    members = []
    for h in range(j * j // (4 * (n - 1)) + 1):
        for m in range(h // 2 + 1):
            if (j - 1) ** 2 <= lambda_L(n, h, m) < j * j:
                members.append(SpectralIndex(h, m))
    return EigCount(j, sorted(members))


def counting_sum(n: int, j: int, alpha: float, gap_factor: bool = True) -> float:
    """sum over I_j of (m+1)^(2n-3+alpha/2) (h+1)^(2n-alpha/2) [(h-2m+1)^2].

    ``gap_factor`` includes the (h-2m+1)^2 factor.
    """
    acc = 0.0
    for idx in enumerate_Ij(n, j).members:
        h, m = idx.h, idx.m
        term = (m + 1) ** (2 * n - 3 + alpha / 2) * (h + 1) ** (2 * n - alpha / 2)
        if gap_factor:
            term *= (h - 2 * m + 1) ** 2
        acc += term
    return acc


def counting_ratio(n: int, j: int, alpha: float, gap_factor: bool = True) -> float:
    """counting_sum / j^(4n+1-alpha)."""
    return counting_sum(n, j, alpha, gap_factor) / j ** (4 * n + 1 - alpha)


# ---------------------------------------------------------------------------
# kernels of F(sqrt(L)) and the weighted Plancherel estimate


def multiplier_kernel(F: MultiplierFn, n: int, lam_cutoff: int, truncate: bool = False) -> KernelPoly:
    """Coefficients F(sqrt(lambda_L)) over all (h, m) with lambda_L <= lam_cutoff.

    Raises ``ValueError`` when F may be nonzero beyond the cutoff unless
    ``truncate`` acknowledges the truncation.
    """
    if F.support_max ** 2 > lam_cutoff and not truncate:
        raise ValueError(
            f"F does not vanish beyond sqrt({lam_cutoff}); pass truncate=True to accept truncation"
        )
    coeffs = {}
    for h, m in spectrum_below(n, lam_cutoff):
        v = F(math.sqrt(lambda_L(n, h, m)))
        if v:
            coeffs[(h, m)] = v
    return KernelPoly(n, coeffs)


def plancherel_family(kind: str, N: int) -> MultiplierFn:
    """F_N vanishing outside [0, N): 'band' -> 1_[0,N), 'mihlin' -> phi(s / N).

    The bump is centred at 0 (phi(u) = exp(1 - 1/(1 - u^2)) on [0, 1)): the
    smallest nonzero eigenvalue sits at s = 2 sqrt(n - 1), so for N = 2 only
    s = 0 can carry mass.
    """
    if kind == "band":
        return BandIndicator(0, N)
    if kind == "mihlin":
        return MihlinBump(-1.0, 1.0, float(N))
    raise ValueError(f"unknown family {kind!r}")


@dataclass
class PlancherelRow:
    N: int
    alpha: float
    numerator: float
    denominator: float
    ratio: float
    method: str


def plancherel_numerator(kp: KernelPoly, alpha, method: str = "auto"):
    """Integral of w^alpha |K(., y)|^2: exact for alpha in {0, 2}, else the majorant
    sum (5 gamma_mid)^(alpha/4) dim |a|^2."""
    if method == "auto":
        method = "exact" if alpha in (0, 2) else "majorant"
    if method == "exact":
        return weighted_L2_even(kp, int(alpha)), "exact"
    return majorant_L2_sq(kp, alpha / 2), "majorant"


def plancherel_ratio(F: MultiplierFn, n: int, alpha, N: int, method: str = "auto",
                     divergence_study: bool = False) -> PlancherelRow:
    """sup_y integral of |K_F(x, y)|^2 w^alpha over N^(4n+2-alpha) ||F(N .)||_{N,2}^2.

    The integral does not depend on y, so it is evaluated at y = e.
    """
    if alpha < 0 or (alpha >= 3 and not divergence_study):
        raise ValueError("alpha must lie in [0, 3) (use divergence_study for alpha >= 3)")
    if F.support_max > N:
        raise ValueError("F must vanish outside [0, N)")
    kp = multiplier_kernel(F, n, N * N)
    num, used = plancherel_numerator(kp, alpha, method)
    nrm = norm_N2(F.rescaled(N), N).value
    den = float(N) ** (4 * n + 2 - alpha) * nrm * nrm
    return PlancherelRow(N, float(alpha), float(num), den, float(num) / den, used)


def plancherel_scan(kind: str, n: int, alpha, N_list, divergence_study: bool = False) -> list:
    return [
        plancherel_ratio(plancherel_family(kind, N), n, alpha, N, divergence_study=divergence_study)
        for N in N_list
    ]


# ---------------------------------------------------------------------------
# resolvent on-diagonal sum


def _dim_poly_in_a(n: int, b: int) -> np.polynomial.Polynomial:
    """dim H_{h,m} as a polynomial in a for fixed b (exact integer-valued)."""
    P = np.polynomial.Polynomial
    p = P([-b, 1]) ** 2 * P([b, 1]) / ((2 * n - 2) * (2 * n - 1))
    for k in range(-(n - 2), n - 1):
        p = p * P([k, 1])
    p = p / math.factorial(2 * n - 3)
    return p * math.comb(b + n - 2, 2 * n - 3)


def _tail_constant(n: int) -> float:
    """K_n with dim H_{h,m} <= K_n a^(2n) b^(2n-3) whenever a >= b + 1."""
    return 8.0 * (n + 1) ** (4 * n - 6) / ((2 * n - 2) * (2 * n - 1) * math.factorial(2 * n - 3) ** 2)


@dataclass
class ResolventSum:
    value: float
    b_max: int
    tail_bound: float


def resolvent_diag_sum_detail(n: int, r: float, ell: int, rel_tol: float = 1e-10,
                              b_max: int | None = None) -> ResolventSum:
    """sum over I_Q of dim H_{h,m} (1 + r^2 lambda_L)^(-2 ell), with a certified tail.

    For each b the sum over a is split into a direct head and a tail evaluated
    exactly through Hurwitz zeta values (after expanding dim as a polynomial in
    a + c/d).  The remainder over b > b_max is bounded by an integral
    comparison; the run aborts if that bound exceeds rel_tol times the value.
    """
    if ell < n + 1:
        raise ValueError("ell must be >= n + 1")
    if r <= 0:
        raise ValueError("r must be positive")
    r2 = r * r
    c = 1.0 - 4.0 * r2 * n * (n - 1)
    p = 2 * ell - 2 * n
    kn = _tail_constant(n)

    def tail_after(bm: int) -> float:
        # sum over b > bm of K_n b^(2n-3) (2 r^2)^(-2 ell) sum_{a > b} a^(2n - 2 ell)
        return kn * (2 * r2) ** (-2 * ell) / (p - 1) * bm ** (4 * n - 1 - 4 * ell) / (4 * ell - 4 * n + 1)

    def column(b: int) -> float:
        d = 4.0 * r2 * b
        poly = _dim_poly_in_a(n, b)
        shift = c / d
        a0 = b + 1
        a_head = a0 + int(10 * abs(shift)) + 16
        a = np.arange(a0, a_head, dtype=float)
        acc = float(np.sum(poly(a) / (c + d * a) ** (2 * ell)))
        # tail a >= a_head written in v = a + c/d, so (1 + r^2 lambda) = d v
        q = poly(np.polynomial.Polynomial([-shift, 1]))
        start = a_head + shift
        for k, qk in enumerate(q.coef):
            if qk:
                acc += qk * d ** (-2 * ell) * float(zeta(2 * ell - k, start))
        return acc

    total = 0.0
    b = n - 1
    b_min = 2 * n * (n - 1)  # the tail bound needs a b >= 2n(n-1)
    while True:
        total += column(b)
        if b_max is not None:
            if b >= b_max:
                break
        elif b >= b_min and tail_after(b) <= 0.5 * rel_tol * total:
            b_max = b
            break
        b += 1
    tail = tail_after(b_max) if b_max >= b_min else math.inf
    if tail > rel_tol * total:
        raise RuntimeError(f"tail certificate failed: bound {tail:.3g} vs value {total:.3g}")
    return ResolventSum(total, b_max, tail)


def resolvent_diag_sum(n: int, r: float, ell: int, **kw) -> float:
    return resolvent_diag_sum_detail(n, r, ell, **kw).value


def resolvent_diag_sum_direct(n: int, r: float, ell: int, lam_max: int) -> float:
    """Plain partial sum over lambda_L <= lam_max (oracle for small cases)."""
    acc = 0.0
    for h, m in spectrum_below(n, lam_max):
        acc += dim_H_hm(n, h, m) * (1.0 + r * r * lambda_L(n, h, m)) ** (-2 * ell)
    return acc


# ---------------------------------------------------------------------------
# Monte Carlo over quasi-distance balls


class MCEstimate(NamedTuple):
    estimate: float
    stderr: float


def _first_block_normaliser(n: int) -> float:
    """Integral over B^4 of (1 - |y|^2)^(2n-3) = pi^2 / ((2n-1)(2n-2))."""
    return math.pi ** 2 / ((2 * n - 1) * (2 * n - 2))


def _ball_integral(n: int, r: float, power_w: float, samples: int, seed: int, method: str,
                   batch: int = 1_000_000) -> MCEstimate:
    """Integral over {rho(e, y) < r} of w(e, y)^power_w d sigma(y).

    'uniform': average over uniform sphere samples.
    'importance': only the first quaternion y_1 = <y, e> matters; its law has
    density (1 - |y_1|^2)^(2n-3) / Z_n on the unit 4-ball, and the ball is
    {|1 - y_1| < r^2}, so y_1 = 1 - z with z uniform in the 4-ball of radius
    r^2 and the integrand is reweighted accordingly.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if samples < 2:
        raise ValueError("need at least two samples")
    eps2 = r ** 4
    if method == "auto":
        method = "importance" if r * r < 1 else "uniform"
    rng = np.random.default_rng(seed)
    s1 = s2 = 0.0
    done = 0
    if method == "uniform":
        power = power_w / 2
        while done < samples:
            k = min(batch, samples - done)
            y1 = sample_sphere_array(rng, k, n)[:, :4]
            _, a, b = weighted_ball_sums(y1, eps2, power)
            s1 += a
            s2 += b
            done += k
        scale = 1.0
    elif method == "importance":
        power = (2 * n - 3) + power_w / 2
        rad = r * r
        while done < samples:
            k = min(batch, samples - done)
            g = rng.standard_normal((k, 4))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            g *= (rad * rng.random(k) ** 0.25)[:, None]
            g[:, 0] = 1.0 - g[:, 0]
            g[:, 1:] = -g[:, 1:]
            _, a, b = weighted_ball_sums(g, eps2, power)
            s1 += a
            s2 += b
            done += k
        scale = (math.pi ** 2 / 2) * rad ** 4 / _first_block_normaliser(n)
    else:
        raise ValueError(f"unknown method {method!r}")
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0)
    return MCEstimate(scale * mean, scale * math.sqrt(var / (samples - 1)))


def ball_volume_mc(n: int, r: float, samples: int, seed: int = 0, method: str = "auto") -> MCEstimate:
    """sigma of the quasi-distance ball {y : |1 - <y, e>|^(1/2) < r}."""
    return _ball_integral(n, r, 0.0, samples, seed, method)


def weight_integral_mc(n: int, r: float, alpha: float, samples: int, seed: int = 0,
                       method: str = "auto") -> MCEstimate:
    """Integral of w(e, y)^(-alpha) over the quasi-distance ball of radius r."""
    if not 0 <= alpha < 3:
        raise ValueError("alpha must lie in [0, 3)")
    return _ball_integral(n, r, -alpha, samples, seed, method)


def weight_integral_ratio(n: int, r: float, alpha: float, est: float) -> float:
    return est / min(r ** (4 * n + 2 - alpha), 1.0)


def ball_volume_quadrature(n: int, r: float) -> float:
    """Deterministic value of the quasi-distance ball volume by 2-d quadrature.

    With y_1 = 1 - z, z = (z_0, z') in R x R^3 and |z| < r^2, the volume is
    (4 pi / Z_n) * integral of |z'|^2 (2 z_0 - |z|^2)^(2n-3) over the region
    where 2 z_0 - |z|^2 > 0.
    """
    from scipy import integrate

    rad = r * r
    zn = _first_block_normaliser(n)

    def inner(rho, z0):
        v = 2 * z0 - z0 * z0 - rho * rho
        return rho * rho * v ** (2 * n - 3) if v > 0 else 0.0

    val, _ = integrate.dblquad(
        inner, 0.0, min(rad, 2.0), lambda z0: 0.0,
        lambda z0: math.sqrt(max(min(rad * rad - z0 * z0, 2 * z0 - z0 * z0), 0.0)),
        epsabs=0, epsrel=1e-11,
    )
    return 4 * math.pi * val / zn


def loglog_slope(rs, values) -> float:
    return float(np.polyfit(np.log(np.asarray(rs)), np.log(np.asarray(values)), 1)[0])
