"""End-to-end acceptance checks.

Each ``criterion_k`` runs one check at its stated size and tolerance and
returns a :class:`CriterionResult`.  Parameters default to the full-size run;
the CLI suites call the same functions with smaller grids.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .harmonic import dim_H_hm, eigenvalues, index_set, joint_eigenspace, projection_kernel_bruteforce
from .multiplier import (
    ball_volume_mc,
    counting_ratio,
    enumerate_Ij,
    loglog_slope,
    plancherel_scan,
    resolvent_diag_sum,
    weight_integral_mc,
    weight_integral_ratio,
)
from .poly import gamma_op, sphere_laplacian, sphere_pairing
from .rational import ComplexRational, Q
from .zonal import (
    KernelPoly,
    gamma_coeffs,
    gamma_mid,
    gamma_mid_closed,
    majorant_L2_sq,
    mc_weighted_L2,
    recurrence_residual,
    weighted_L2_even,
    zonal_Z,
)

POW2_N = (2, 4, 8, 16, 32, 64)
PLANCHEREL_ALPHAS = (0, 1, 2, 2.9)
BALL_R_GRID = (0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)
RESOLVENT_R_GRID = tuple(2.0 ** k for k in range(-5, 3))


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d} {self.title}: {self.summary} ({self.seconds:.1f}s)"


def _spread(values) -> float:
    vals = [v for v in values if v > 0]
    return max(vals) / min(vals) if vals else math.inf


def _timed(number: int, title: str, limit: float | None = None):
    def wrap(fn):
        def run(*args, **kw):
            t0 = time.perf_counter()
            passed, summary, data = fn(*args, **kw)
            dt = time.perf_counter() - t0
            if limit is not None and dt > limit:
                passed = False
                summary += f"; runtime {dt:.0f}s exceeds {limit:.0f}s"
            return CriterionResult(number, title, passed, summary, data, dt)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "joint eigenspace dimensions", limit=300)
def criterion_1(grid=((2, 6), (3, 4))):
    """Brute-force dim H_{h,m} equals the closed form."""
    bad = []
    count = 0
    for n, h_max in grid:
        for idx in index_set(h_max):
            got = joint_eigenspace(n, idx.h, idx.m, check=False).dim
            want = dim_H_hm(n, idx.h, idx.m)
            count += 1
            if got != want:
                bad.append((n, idx.h, idx.m, got, want))
    return not bad, f"{count} spaces, {len(bad)} mismatches", {"mismatches": bad}


@_timed(2, "eigenvalue identities")
def criterion_2(grid=((2, 6), (3, 4))):
    """Every basis element is an eigenvector of the sphere Laplacian and of Gamma."""
    bad = []
    count = 0
    for n, h_max in grid:
        for idx in index_set(h_max):
            ev = eigenvalues(n, idx.h, idx.m)
            lam_s = idx.h * (idx.h + 4 * n - 2)
            for p in joint_eigenspace(n, idx.h, idx.m, check=False).basis:
                count += 1
                if sphere_laplacian(p) != p * lam_s or gamma_op(p) != p * ev.lam_gamma:
                    bad.append((n, idx.h, idx.m))
    return not bad, f"{count} basis elements, {len(bad)} failures", {"failures": bad}


@_timed(3, "zonal closed form vs projection kernel", limit=600)
def criterion_3(n: int = 2, h_max: int = 4):
    bad = [
        (idx.h, idx.m)
        for idx in index_set(h_max)
        if zonal_Z(n, idx.h, idx.m) != projection_kernel_bruteforce(n, idx.h, idx.m)
    ]
    return not bad, f"{len(index_set(h_max))} kernels, {len(bad)} mismatches", {"mismatches": bad}


@_timed(4, "zonal norms and orthogonality")
def criterion_4(n: int = 2, h_max: int = 4):
    idxs = index_set(h_max)
    zs = {idx: zonal_Z(n, idx.h, idx.m) for idx in idxs}
    bad = []
    for i, a in enumerate(idxs):
        for b in idxs[i:]:
            want = dim_H_hm(n, a.h, a.m) if a == b else 0
            if sphere_pairing(zs[a], zs[b]) != ComplexRational(want):
                bad.append(((a.h, a.m), (b.h, b.m)))
    pairs = len(idxs) * (len(idxs) + 1) // 2
    return not bad, f"{pairs} pairs, {len(bad)} failures", {"failures": bad}


@_timed(5, "recurrence identity and gamma_mid")
def criterion_5(n: int = 2, h_max: int = 4, gamma_ns=(2, 3), gamma_h_max: int = 20):
    """Exact polynomial recurrence, and gamma_mid composed from two w^2 steps vs its closed form."""
    bad_rec = [(idx.h, idx.m) for idx in index_set(h_max) if recurrence_residual(n, idx.h, idx.m)]
    bad_gam = [
        (nn, idx.h, idx.m)
        for nn in gamma_ns
        for idx in index_set(gamma_h_max)
        if gamma_coeffs(nn, idx.h, idx.m).mid != gamma_mid_closed(nn, idx.h, idx.m)
    ]
    ok = not bad_rec and not bad_gam
    return ok, f"recurrence failures {len(bad_rec)}, gamma_mid mismatches {len(bad_gam)}", {
        "recurrence": bad_rec, "gamma_mid": bad_gam}


@_timed(6, "gamma_mid scale bound")
def criterion_6(n: int = 2, h_max: int = 200, lo: float = 0.01, hi: float = 100.0):
    vals = [
        float(gamma_mid(n, idx.h, idx.m) * Q(idx.h + 1, idx.m + 1) ** 2)
        for idx in index_set(h_max)
    ]
    vmin, vmax = min(vals), max(vals)
    ok = lo <= vmin and vmax <= hi
    return ok, f"range [{vmin:.4g}, {vmax:.4g}], empirical c_n = {vmax:.4g}", {
        "min": vmin, "max": vmax, "c_n": vmax}


def random_kernel_poly(rng: random.Random, n: int, h_max: int = 6, max_terms: int = 5) -> KernelPoly:
    """Kernel polynomial with random small complex-rational coefficients."""
    idxs = index_set(h_max)
    coeffs = {}
    for idx in rng.sample(idxs, rng.randint(1, max_terms)):
        re = Q(rng.randint(-9, 9), rng.randint(1, 7))
        im = Q(rng.randint(-9, 9), rng.randint(1, 7))
        coeffs[(idx.h, idx.m)] = ComplexRational(re, im) if (re or im) else ComplexRational(1)
    return KernelPoly(n, coeffs)


@_timed(7, "interpolation inequality", limit=120)
def criterion_7(n: int = 2, count: int = 50, mc_count: int = 5, samples: int = 400_000, seed: int = 7):
    """alpha = 2 exactly on random kernels; alpha = 1 by Monte Carlo within five standard errors."""
    rng = random.Random(seed)
    kps = [random_kernel_poly(rng, n) for _ in range(count)]
    exact_bad = [i for i, kp in enumerate(kps) if not weighted_L2_even(kp, 4) <= majorant_L2_sq(kp, 2)]
    mc_bad = []
    worst = 0.0
    for i, kp in enumerate(kps[:mc_count]):
        exact = float(weighted_L2_even(kp, 2))
        rhs = float(majorant_L2_sq(kp, 1))
        est, err = mc_weighted_L2(kp, 2.0, samples, seed + i)
        z = abs(est - exact) / err if err else 0.0
        worst = max(worst, z)
        if z > 5 or est > rhs + 5 * err:
            mc_bad.append(i)
    ok = not exact_bad and not mc_bad
    return ok, (f"exact alpha=2 failures {len(exact_bad)}/{count}; "
                f"MC alpha=1 failures {len(mc_bad)}/{mc_count} (max |z| {worst:.2f})"), {
        "exact_failures": exact_bad, "mc_failures": mc_bad, "max_z": worst}


@_timed(8, "weighted Plancherel scaling", limit=60)
def criterion_8(n: int = 2, N_list=POW2_N, alphas=PLANCHEREL_ALPHAS, families=("mihlin", "band"),
                max_spread: float = 100.0, divergence_factor: float = 1.5):
    spreads = {}
    for fam in families:
        for a in alphas:
            rows = plancherel_scan(fam, n, a, N_list)
            spreads[(fam, a)] = _spread([r.ratio for r in rows])
    bounded = all(s <= max_spread for s in spreads.values())
    div = {}
    for fam in families:
        rows = {r.N: r.ratio for r in plancherel_scan(fam, n, 3, (4, 64), divergence_study=True)}
        div[fam] = rows[64] / rows[4]
    diverges = all(g >= divergence_factor for g in div.values())
    worst = max(spreads, key=spreads.get)
    summary = (f"max/min worst {spreads[worst]:.3g} at {worst[0]} alpha={worst[1]}; "
               f"alpha=3 growth 64 vs 4: " + ", ".join(f"{k} {v:.3g}" for k, v in div.items()))
    return bounded and diverges, summary, {
        "spreads": {f"{k[0]}:{k[1]}": v for k, v in spreads.items()}, "alpha3_growth": div}


@_timed(9, "counting sum over I_j")
def criterion_9(n: int = 2, j_max: int = 64, alphas=PLANCHEREL_ALPHAS, max_spread: float = 100.0):
    """Empty I_j carry no information about the constant and are skipped."""
    spreads = {}
    constants = {}
    for a in alphas:
        vals = [counting_ratio(n, j, a) for j in range(1, j_max + 1) if enumerate_Ij(n, j).size]
        spreads[a] = _spread(vals)
        constants[a] = max(vals)
    ok = all(s <= max_spread for s in spreads.values())
    return ok, "max/min per alpha: " + ", ".join(f"{a}: {s:.3g}" for a, s in spreads.items()), {
        "spreads": spreads, "constants": constants}


@_timed(10, "ball volume exponent", limit=120)
def criterion_10(n: int = 2, rs=BALL_R_GRID, samples: int = 10**7, seed: int = 10,
                 target: float = None, tol: float = 0.3, doubling_tol: float = 0.05):
    if target is None:
        target = 4 * n + 2
    est = {r: ball_volume_mc(n, r, samples, seed + i) for i, r in enumerate(rs)}
    slope = loglog_slope(list(rs), [est[r].estimate for r in rs])
    doubling = {
        r: est[2 * r].estimate / est[r].estimate
        for r in rs if 2 * r in est
    }
    bound = 2.0 ** target * (1 + doubling_tol)
    ok = abs(slope - target) <= tol and all(v <= bound for v in doubling.values())
    dbl = ", ".join(f"{r}: {v:.4g}" for r, v in doubling.items())
    return ok, f"slope {slope:.4f} (target {target} +/- {tol}); doubling ratios {dbl} vs {bound:.4g}", {
        "slope": slope, "doubling": doubling,
        "estimates": {r: (e.estimate, e.stderr) for r, e in est.items()}}


@_timed(11, "weight integral scaling")
def criterion_11(n: int = 2, rs=BALL_R_GRID, alphas=(0, 1, 2, 2.5), samples: int = 10**6,
                 seed: int = 11, max_spread: float = 3.0):
    spreads = {}
    for k, a in enumerate(alphas):
        ratios = [
            weight_integral_ratio(n, r, a, weight_integral_mc(n, r, a, samples, seed + 100 * k + i).estimate)
            for i, r in enumerate(rs)
        ]
        spreads[a] = _spread(ratios)
    ok = all(s <= max_spread for s in spreads.values())
    return ok, "max/min per alpha: " + ", ".join(f"{a}: {s:.3g}" for a, s in spreads.items()), {
        "spreads": spreads}


@_timed(12, "resolvent on-diagonal bound")
def criterion_12(n: int = 2, ell: int = 3, rs=RESOLVENT_R_GRID, max_spread: float = 100.0):
    prods = {r: resolvent_diag_sum(n, r, ell) * min(r ** (4 * n + 2), 1.0) for r in rs}
    spread = _spread(prods.values())
    return spread <= max_spread, f"max/min {spread:.4g}, max {max(prods.values()):.4g}", {
        "products": prods, "spread": spread}


CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
)


def run_all(echo=print) -> list:
    out = []
    for fn in CRITERIA:
        res = fn()
        if echo:
            echo(res.line())
        out.append(res)
    return out
