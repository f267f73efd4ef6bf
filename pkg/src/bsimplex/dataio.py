"""Reading and writing pair files, result documents and the bundled stand-in data."""
from __future__ import annotations

import json
import math
import re
from importlib import resources
from pathlib import Path

import numpy as np

from .bivariate import PARAM_NAMES, BivParams
from .errors import ParseError

_SPLIT = re.compile(r"[,;\t ]+")

# parameters and seed behind the bundled synthetic data set
STANDIN_THETA = (0.518, 0.313, 0.799, 0.949, 0.072)
STANDIN_N = 88
STANDIN_SEED = 20240588
STANDIN_FILE = "standin_pairs.csv"


def parse_pairs(text: str, source: str = "<input>") -> np.ndarray:
    """Parse two-column delimited text into an ``(n, 2)`` array.

    A first line ``y1,y2`` is treated as a header; blank lines and lines
    starting with ``#`` are skipped.  Errors name the 1-based line (row) and
    column.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        if not rows and [f.lower() for f in fields] == ["y1", "y2"]:
            continue
        if len(fields) != 2:
            raise ParseError(f"{source}: row {lineno}: expected 2 columns, found {len(fields)}")
        vals = []
        for col, f in enumerate(fields, start=1):
            try:
                v = float(f)
            except ValueError:
                raise ParseError(f"{source}: row {lineno}, column {col}: not a number: {f!r}") from None
            if not (math.isfinite(v) and 0.0 < v < 1.0):
                raise ParseError(f"{source}: row {lineno}, column {col}: value {f} is outside (0, 1)")
            vals.append(v)
        rows.append(vals)
    if not rows:
        raise ParseError(f"{source}: no data rows")
    return np.array(rows, dtype=float)


def read_pairs(path) -> np.ndarray:
    p = Path(path)
    return parse_pairs(p.read_text(), source=str(p))


def format_pairs(data: np.ndarray) -> str:
    lines = ["y1,y2"] + [f"{a!r},{b!r}" for a, b in data.tolist()]
    return "\n".join(lines) + "\n"


def write_pairs(path, data: np.ndarray) -> None:
    Path(path).write_text(format_pairs(data))


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def result_document(res) -> dict:
    """JSON-ready dict of a :class:`~bsimplex.estimate.FitResult`.

    Floats keep their shortest round-trip repr; NaN becomes ``null``.
    """
    est = res.estimates.as_vector()
    return {
        "n": res.n,
        "level": res.level,
        "parameters": list(PARAM_NAMES),
        "estimates": {k: _num(v) for k, v in zip(PARAM_NAMES, est)},
        "std_errors": {k: _num(v) for k, v in zip(PARAM_NAMES, res.std_errors)},
        "ci_lower": {k: _num(v) for k, v in zip(PARAM_NAMES, res.ci[:, 0])},
        "ci_upper": {k: _num(v) for k, v in zip(PARAM_NAMES, res.ci[:, 1])},
        "loglik": _num(res.loglik),
        "converged": bool(res.converged),
        "iterations": int(res.iterations),
        "e_xy": _num(res.e_xy),
        "flags": dict(res.flags),
        "message": res.message,
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def standin_theta() -> BivParams:
    return BivParams.of(*STANDIN_THETA)


def standin_path():
    """Path-like handle to the bundled synthetic pairs (synthetic, not real observations)."""
    return resources.files("bsimplex") / "data" / STANDIN_FILE


def load_standin() -> np.ndarray:
    return parse_pairs(standin_path().read_text(), source=STANDIN_FILE)


def generate_standin() -> np.ndarray:
    """Regenerate the stand-in pairs from their fixed parameters and seed."""
    from .sampler import sample_matrix
    return sample_matrix(standin_theta(), STANDIN_N, STANDIN_SEED)
