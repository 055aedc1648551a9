"""``qsphere`` command line: dimension tables, invariant suites, scans and kernels.

Every flag can also be set through an environment variable named ``QS_`` plus
the flag name in upper case with dashes as underscores (``--h-max`` ->
``QS_H_MAX``).  Command-line values win over the environment.  ``QS_THREADS``
sets the number of worker processes for ``verify all``; ``QS_BUDGET_TERMS``
caps the size of exact polynomial computations.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance as A
from . import io
from .harmonic import dims_rows
from .multiplier import (
    ball_volume_mc,
    loglog_slope,
    multiplier_kernel,
    parse_multiplier,
    plancherel_scan,
    resolvent_diag_sum_detail,
    weight_integral_mc,
    weight_integral_ratio,
)
from .quat import HPoint, hermitian_inner, sample_sphere_array
from .suites import SUITES, RunConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SCAN_KINDS = ("plancherel", "ball-volume", "resolvent", "weight-integral")


class UsageError(Exception):
    pass


def parse_list(text: str, conv=float) -> tuple:
    """``a,b,c`` or ``lo:hi:count`` (evenly spaced, endpoints included)."""
    text = text.strip()
    if not text:
        raise UsageError("empty list")
    try:
        if ":" in text:
            lo, hi, cnt = text.split(":")
            cnt = int(cnt)
            if cnt < 1:
                raise UsageError(f"bad range {text!r}")
            vals = np.linspace(float(lo), float(hi), cnt)
            return tuple(conv(round(float(v), 12)) for v in vals)
        return tuple(conv(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse list {text!r}: {exc}") from exc


def _alpha(v):
    f = float(v)
    return int(f) if f.is_integer() else f


def _env(name: str):
    return os.environ.get("QS_" + name.upper().replace("-", "_"))


def _common(p: argparse.ArgumentParser, *names) -> None:
    specs = {
        "n": dict(type=int, help="quaternionic dimension n >= 2 (default 2)"),
        "h-max": dict(type=int, help="largest degree h (default 4)"),
        "alpha": dict(help="comma list or lo:hi:count of weight exponents"),
        "N-list": dict(help="comma list of scales N"),
        "r-grid": dict(help="comma list or lo:hi:count of radii"),
        "samples": dict(type=int, help="Monte Carlo samples per point (default 1e6)"),
        "seed": dict(type=int, help="random seed (default 0)"),
        "out": dict(help="output directory, or '-' for stdout only (default .)"),
        "format": dict(choices=("csv", "json"), help="table format (default csv)"),
    }
    for name in names:
        p.add_argument("--" + name, dest=name.replace("-", "_").lower(), **specs[name])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsphere", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="table of (h, m, dim, lambda_delta, lambda_gamma, lambda_L)")
    _common(p, "n", "h-max", "out", "format")

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", help="one of " + ", ".join(SUITES + ("all",)))
    _common(p, "n", "h-max", "alpha", "N-list", "r-grid", "samples", "seed", "out")

    p = sub.add_parser("scan", help="write a scan table")
    p.add_argument("kind", choices=SCAN_KINDS)
    _common(p, "n", "alpha", "N-list", "r-grid", "samples", "seed", "out", "format")
    p.add_argument("--family", help="plancherel families, comma list of band,mihlin")
    p.add_argument("--ell", type=int, help="resolvent power (default n + 1)")

    p = sub.add_parser("kernel", help="coefficients of the kernel of F(sqrt(L))")
    p.add_argument("spec", help="e.g. band:0,1  riesz:delta=2,t=0.1  heat:t=0.5")
    _common(p, "n", "seed", "out")
    p.add_argument("--cutoff", type=int, help="largest lambda_L kept (default from the support of F)")
    p.add_argument("--truncate", action="store_true", help="accept truncation of F beyond the cutoff")
    p.add_argument("--eval", type=int, default=0, metavar="K", help="evaluate at K random point pairs")
    return ap


def _get(args, name: str, conv, default):
    val = getattr(args, name.replace("-", "_").lower(), None)
    if val is None:
        env = _env(name)
        if env is not None:
            try:
                val = conv(env)
            except (ValueError, UsageError) as exc:
                raise UsageError(f"bad QS_{name.upper().replace('-', '_')}={env!r}: {exc}") from exc
    elif conv is not int and isinstance(val, str):
        val = conv(val)
    return default if val is None else val


def make_config(args, r_default=A.BALL_R_GRID) -> RunConfig:
    fields = dict(
        n=_get(args, "n", int, 2),
        h_max=_get(args, "h-max", int, 4),
        alphas=_get(args, "alpha", lambda s: parse_list(s, _alpha), A.PLANCHEREL_ALPHAS),
        N_list=_get(args, "N-list", lambda s: parse_list(s, int), A.POW2_N),
        r_grid=_get(args, "r-grid", parse_list, r_default),
        samples=_get(args, "samples", int, 10**6),
        seed=_get(args, "seed", int, 0),
        out=_get(args, "out", str, "."),
        fmt=_get(args, "format", str, "csv"),
        ell=_get(args, "ell", int, 0),
    )
    try:
        return RunConfig(**fields)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit_table(cfg: RunConfig, name: str, header, rows, grid: dict) -> None:
    if cfg.fmt == "json":
        text = io.json_text({"n": cfg.n, "columns": list(header),
                             "rows": [dict(zip(header, r)) for r in rows]})
    else:
        text = io.csv_text(header, rows)
    if cfg.out == "-":
        sys.stdout.write(text)
        return
    out = Path(cfg.out)
    path = io.atomic_write_text(out / f"{name}.{cfg.fmt}", text)
    io.write_json(out / f"{name}.manifest.json", io.manifest(cfg.n, cfg.seed, cfg.samples, grid))
    print(f"wrote {path}")


def cmd_dims(args) -> int:
    cfg = make_config(args)
    header = ("h", "m", "dim", "lambda_delta", "lambda_gamma", "lambda_L")
    rows = dims_rows(cfg.n, cfg.h_max)
    _emit_table(cfg, "dims", header, rows, {"h_max": cfg.h_max})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    cfg = make_config(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    workers = int(os.environ.get("QS_THREADS", "1") or 1)
    results = run_suites(names, cfg, workers)
    failed = []
    report = {"suite": args.suite, "config": cfg.asdict(), "workers": workers, "suites": {}}
    for name, checks in results.items():
        report["suites"][name] = [
            {"name": c.name, "passed": c.passed, "summary": c.summary, "seconds": c.seconds,
             "data": {str(k): v for k, v in c.data.items()}}
            for c in checks
        ]
        for c in checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {name}: {c.name}: {c.summary}")
            if not c.passed:
                failed.append({"suite": name, "check": c.name, "summary": c.summary})
    report["passed"] = not failed
    report["failures"] = failed
    report["manifest"] = io.manifest(cfg.n, cfg.seed, cfg.samples, {
        "h_max": cfg.h_max, "alpha": cfg.alphas, "N": cfg.N_list, "r": cfg.r_grid})
    if cfg.out != "-":
        print(f"wrote {io.write_json(Path(cfg.out) / f'verify_{args.suite}.json', report)}")
    else:
        sys.stdout.write(io.json_text(report))
    return EXIT_OK if not failed else EXIT_FAIL


def _note(cfg: RunConfig, text: str) -> None:
    """Summary line; goes to stderr when the table itself is written to stdout."""
    print(text, file=sys.stderr if cfg.out == "-" else sys.stdout)


def _scan_plancherel(cfg, args):
    fams = parse_list(args.family or _env("family") or "band,mihlin", str)
    for f in fams:
        if f not in ("band", "mihlin"):
            raise UsageError(f"unknown family {f!r}")
    rows = []
    for fam in fams:
        for a in cfg.alphas:
            scan = plancherel_scan(fam, cfg.n, a, cfg.N_list, divergence_study=a >= 3)
            rows.extend((fam, r.N, r.alpha, r.numerator, r.denominator, r.ratio, r.method) for r in scan)
            ratios = [r.ratio for r in scan if r.ratio > 0]
            if ratios:
                _note(cfg, f"{fam} alpha={a}: ratio max/min {max(ratios) / min(ratios):.4g}")
    header = ("family", "N", "alpha", "numerator", "denominator", "ratio", "method")
    return header, rows, {"alpha": cfg.alphas, "N": cfg.N_list, "family": fams}


def _scan_ball(cfg, args):
    rows = []
    for i, r in enumerate(cfg.r_grid):
        est = ball_volume_mc(cfg.n, r, cfg.samples, cfg.seed + i)
        rows.append((r, float(est.estimate), float(est.stderr)))
    if len(rows) > 1 and all(v[1] > 0 for v in rows):
        slope = loglog_slope([v[0] for v in rows], [v[1] for v in rows])
        _note(cfg, f"log-log slope {slope:.4f} (scaling exponent {4 * cfg.n + 2})")
    return ("r", "estimate", "stderr"), rows, {"r": cfg.r_grid}


def _scan_resolvent(cfg, args):
    rows = []
    for r in cfg.r_grid:
        res = resolvent_diag_sum_detail(cfg.n, r, cfg.ell)
        prod = res.value * min(r ** (4 * cfg.n + 2), 1.0)
        rows.append((r, cfg.ell, res.value, prod, res.b_max, res.tail_bound))
    prods = [v[3] for v in rows]
    _note(cfg, f"product column max/min {max(prods) / min(prods):.4g}, max {max(prods):.4g}")
    return ("r", "ell", "sum", "product", "b_max", "tail_bound"), rows, {"r": cfg.r_grid, "ell": cfg.ell}


def _scan_weight(cfg, args):
    rows = []
    for k, a in enumerate(cfg.alphas):
        if not 0 <= a < 3:
            raise UsageError("weight-integral needs alpha in [0, 3)")
        for i, r in enumerate(cfg.r_grid):
            est = weight_integral_mc(cfg.n, r, a, cfg.samples, cfg.seed + 100 * k + i)
            rows.append((a, r, float(est.estimate), float(est.stderr),
                         weight_integral_ratio(cfg.n, r, a, float(est.estimate))))
    return ("alpha", "r", "estimate", "stderr", "ratio"), rows, {"alpha": cfg.alphas, "r": cfg.r_grid}


_SCANS = {
    "plancherel": _scan_plancherel,
    "ball-volume": _scan_ball,
    "resolvent": _scan_resolvent,
    "weight-integral": _scan_weight,
}


def cmd_scan(args) -> int:
    r_default = A.RESOLVENT_R_GRID if args.kind == "resolvent" else A.BALL_R_GRID
    cfg = make_config(args, r_default)
    if args.kind in ("plancherel", "weight-integral") and args.alpha is None and _env("alpha") is None:
        cfg.alphas = A.PLANCHEREL_ALPHAS if args.kind == "plancherel" else (0, 1, 2, 2.5)
    header, rows, grid = _SCANS[args.kind](cfg, args)
    _emit_table(cfg, "scan_" + args.kind.replace("-", "_"), header, rows, grid)
    return EXIT_OK


def cmd_kernel(args) -> int:
    n = _get(args, "n", int, 2)
    if n < 2:
        raise UsageError("n must be >= 2")
    try:
        F = parse_multiplier(args.spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cutoff = args.cutoff
    if cutoff is None:
        if math.isinf(F.support_max):
            raise UsageError("F has unbounded support; pass --cutoff and --truncate")
        cutoff = math.ceil(F.support_max ** 2)
    try:
        kp = multiplier_kernel(F, n, cutoff, truncate=args.truncate)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    seed = _get(args, "seed", int, 0)
    doc = {"n": n, "spec": args.spec, "cutoff": cutoff, "truncated": bool(args.truncate),
           "kernel": kp.to_json()}
    if args.eval:
        rng = np.random.default_rng(seed)
        x = sample_sphere_array(rng, args.eval, n)
        y = sample_sphere_array(rng, args.eval, n)
        s, t = _inner_st(x, y)
        vals = np.asarray(kp.evaluate(s, t), dtype=complex)
        doc["seed"] = seed
        doc["evaluations"] = [
            {"x": xi.tolist(), "y": yi.tolist(), "re": float(v.real), "im": float(v.imag)}
            for xi, yi, v in zip(x, y, vals)
        ]
    out = _get(args, "out", str, ".")
    if out == "-":
        sys.stdout.write(io.json_text(doc))
    else:
        print(f"wrote {io.write_json(Path(out) / 'kernel.json', doc)}")
    return EXIT_OK


def _inner_st(x: np.ndarray, y: np.ndarray):
    """Re<x, y> and |<x, y>|^2 for paired rows of real coordinates."""
    s, t = [], []
    for xi, yi in zip(x, y):
        q = hermitian_inner(HPoint.from_real(xi.tolist()), HPoint.from_real(yi.tolist()))
        s.append(float(q.a))
        t.append(float(q.norm2()))
    return np.array(s), np.array(t)


_COMMANDS = {"dims": cmd_dims, "verify": cmd_verify, "scan": cmd_scan, "kernel": cmd_kernel}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qsphere {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qsphere {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
