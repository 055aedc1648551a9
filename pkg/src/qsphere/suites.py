"""Named invariant suites driven by ``qsphere verify``."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import acceptance as A
from .poly import Poly, fischer_inner, gamma_op, laplace_nonneg, mult_norm2, sphere_laplacian, vector_field_T
from .quat import Quaternion
from .rational import Q

SUITES = ("algebra", "decomposition", "zonal", "recurrence", "plancherel", "geometry")


@dataclass
class RunConfig:
    n: int = 2
    h_max: int = 4
    alphas: tuple = A.PLANCHEREL_ALPHAS
    N_list: tuple = A.POW2_N
    r_grid: tuple = A.BALL_R_GRID
    samples: int = 10**6
    seed: int = 0
    out: str = "."
    fmt: str = "csv"
    ell: int = 0  # 0 means n + 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.h_max < 0:
            raise ValueError("h_max must be >= 0 (empty grid)")
        for name in ("alphas", "N_list", "r_grid"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if not self.ell:
            self.ell = self.n + 1

    def asdict(self) -> dict:
        return asdict(self)


@dataclass
class Check:
    name: str
    passed: bool
    summary: str
    data: dict = field(default_factory=dict)
    seconds: float = 0.0


def _from_criterion(res: A.CriterionResult) -> Check:
    return Check(f"criterion {res.number}: {res.title}", res.passed, res.summary, res.data, res.seconds)


def _random_poly(rng: random.Random, n: int, deg: int, terms: int = 6) -> Poly:
    out = {}
    for _ in range(terms):
        exp = [0] * (4 * n)
        for _ in range(deg):
            exp[rng.randrange(4 * n)] += 1
        out[tuple(exp)] = Q(rng.randint(-5, 5), rng.randint(1, 4))
    return Poly(n, out)


def _rand_quat(rng: random.Random) -> Quaternion:
    return Quaternion(*(Q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)))


def suite_algebra(cfg: RunConfig) -> list:
    rng = random.Random(cfg.seed)
    checks = []
    qs = [(_rand_quat(rng), _rand_quat(rng), _rand_quat(rng)) for _ in range(20)]
    checks.append(Check("quaternion product associative",
                        all((p * q) * r == p * (q * r) for p, q, r in qs), "20 random triples"))
    checks.append(Check("quaternion norm multiplicative",
                        all((p * q).norm2() == p.norm2() * q.norm2() for p, q, _ in qs), "20 random pairs"))
    polys = [_random_poly(rng, cfg.n, d) for d in (1, 2, 3, 3)]
    comm = all(
        vector_field_T(u, vector_field_T(v, p)) - vector_field_T(v, vector_field_T(u, p))
        == vector_field_T(w, p) * 2
        for p in polys
        for u, v, w in (("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j"))
    )
    checks.append(Check("field commutators [T_i, T_j] = 2 T_k", comm, "cyclic triples on random polynomials"))
    checks.append(Check("Gamma commutes with the Laplacian",
                        all(gamma_op(laplace_nonneg(p)) == laplace_nonneg(gamma_op(p)) for p in polys),
                        "random polynomials"))
    checks.append(Check("sphere Laplacian commutes with Gamma",
                        all(gamma_op(sphere_laplacian(p)) == sphere_laplacian(gamma_op(p)) for p in polys),
                        "random polynomials"))
    adj = []
    for d in (1, 2, 3):
        p, q = _random_poly(rng, cfg.n, d), _random_poly(rng, cfg.n, d + 2)
        adj.append(fischer_inner(mult_norm2(p), q) == fischer_inner(p, laplace_nonneg(q) * -1))
    checks.append(Check("Fischer adjoint of |x|^2 is the (signed) Laplacian", all(adj), "degrees 1-3"))
    return checks


def suite_decomposition(cfg: RunConfig) -> list:
    grid = ((cfg.n, cfg.h_max),)
    return [_from_criterion(A.criterion_1(grid)), _from_criterion(A.criterion_2(grid))]


def suite_zonal(cfg: RunConfig) -> list:
    return [_from_criterion(A.criterion_3(cfg.n, cfg.h_max)), _from_criterion(A.criterion_4(cfg.n, cfg.h_max))]


def suite_recurrence(cfg: RunConfig) -> list:
    return [
        _from_criterion(A.criterion_5(cfg.n, cfg.h_max, (cfg.n,), max(cfg.h_max, 20))),
        _from_criterion(A.criterion_6(cfg.n)),
    ]


def suite_plancherel(cfg: RunConfig) -> list:
    return [
        _from_criterion(A.criterion_7(cfg.n, samples=min(cfg.samples, 400_000), seed=cfg.seed)),
        _from_criterion(A.criterion_8(cfg.n, cfg.N_list, cfg.alphas)),
        _from_criterion(A.criterion_9(cfg.n, alphas=cfg.alphas)),
    ]


def suite_geometry(cfg: RunConfig) -> list:
    return [
        _from_criterion(A.criterion_10(cfg.n, cfg.r_grid, cfg.samples, cfg.seed)),
        _from_criterion(A.criterion_11(cfg.n, cfg.r_grid, samples=cfg.samples, seed=cfg.seed)),
        _from_criterion(A.criterion_12(cfg.n, cfg.ell)),
    ]


_RUNNERS = {
    "algebra": suite_algebra,
    "decomposition": suite_decomposition,
    "zonal": suite_zonal,
    "recurrence": suite_recurrence,
    "plancherel": suite_plancherel,
    "geometry": suite_geometry,
}


def _run_one(args):
    name, cfg = args
    return name, _RUNNERS[name](cfg)


def run_suites(names, cfg: RunConfig, workers: int = 1) -> dict:
    """Run suites (in parallel processes when workers > 1); results keep the input order."""
    for name in names:
        if name not in _RUNNERS:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    jobs = [(name, cfg) for name in names]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return dict(ex.map(_run_one, jobs))
    return dict(map(_run_one, jobs))
