"""Deterministic CSV/JSON output with atomic writes and run manifests."""
from __future__ import annotations

import csv
import io
import json
import os
import platform
import tempfile
from pathlib import Path

from .rational import RATIONAL_TYPES, ComplexRational, format_rational


def fmt(v) -> str:
    """Canonical text for a table cell: ints as is, rationals as p/q, floats with 17 digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, RATIONAL_TYPES):
        return format_rational(v)
    if isinstance(v, ComplexRational):
        return format_rational(v.re) if v.is_real() else f"{format_rational(v.re)}{'+' if v.im >= 0 else ''}{format_rational(v.im)}i"
    if isinstance(v, float) or hasattr(v, "__float__") and not isinstance(v, str):
        return "%.17g" % float(v)
    return str(v)


def jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, RATIONAL_TYPES + (ComplexRational,)):
        return fmt(v)
    if hasattr(v, "__float__"):
        return float(v)
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return str(v)


def atomic_write_text(path, text: str) -> Path:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    return atomic_write_text(path, csv_text(header, rows))


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    return atomic_write_text(path, json_text(obj))


def versions() -> dict:
    import numpy
    import scipy

    from . import __version__
    from .kernels import BACKEND

    out = {
        "qsphere": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "kernels": BACKEND,
    }
    try:
        import gmpy2

        out["gmpy2"] = gmpy2.version()
    except ImportError:  # pragma: no cover
        out["gmpy2"] = None
    return out


def manifest(n: int, seed, samples, grid: dict) -> dict:
    return {"n": n, "seed": seed, "samples": samples, "grid": jsonable(grid), "versions": versions()}


def load_schema(name: str) -> dict:
    """Shipped JSON schema ``schemas/<name>.schema.json``."""
    from importlib import resources

    return json.loads(resources.files("qsphere").joinpath("schemas", f"{name}.schema.json").read_text())
