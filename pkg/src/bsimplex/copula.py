"""Farlie-Gumbel-Morgenstern copula ``C(u, v) = uv[1 + lam (1-u)(1-v)]``."""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NumericError

LAMBDA_SLACK = 1e-12


def check_lambda(lam) -> float:
    """Validate a dependence parameter, clamping values within rounding of +-1."""
    lam = float(lam)
    if not math.isfinite(lam) or abs(lam) > 1.0 + LAMBDA_SLACK:
        raise DomainError(f"lambda must lie in [-1, 1], got {lam!r}")
    return min(1.0, max(-1.0, lam))


def _closed_unit(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def _open_unit(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"{name} must lie in (0, 1)")
    return arr


def _out(val, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(val)
    return val


def fgm_cdf(u, v, lam):
    lam = check_lambda(lam)
    uu, vv = _closed_unit(u, "u"), _closed_unit(v, "v")
    return _out(uu * vv * (1.0 + lam * (1.0 - uu) * (1.0 - vv)), u, v)


def fgm_density(u, v, lam):
    """Copula density ``1 + lam (1 - 2u)(1 - 2v)``."""
    lam = check_lambda(lam)
    uu, vv = _closed_unit(u, "u"), _closed_unit(v, "v")
    return _out(1.0 + lam * (1.0 - 2.0 * uu) * (1.0 - 2.0 * vv), u, v)


def conditional_cdf(u1, u2, lam):
    """``dC/du`` at ``(u1, u2)``: the law of ``U2`` given ``U1 = u1``."""
    lam = check_lambda(lam)
    a = np.asarray(u1, dtype=float)
    b = np.asarray(u2, dtype=float)
    return _out(b * (1.0 + lam * (1.0 - 2.0 * a) * (1.0 - b)), u1, u2)


def conditional_inverse(u1, v, lam):
    """Solve ``dC/du(u1, u2) = v`` for ``u2``.

    With ``A = lam(2 u1 - 1) - 1`` and ``B = (1 - lam(2 u1 - 1))^2 + 4 v lam (2 u1 - 1)``
    the root in (0, 1) is ``u2 = 2v / (sqrt(B) - A)``.  This form has no
    cancellation: ``-A >= 0`` and ``sqrt(B) >= 0``.
    """
    lam = check_lambda(lam)
    a = _open_unit(u1, "u1")
    vv = _open_unit(v, "v")
    k = lam * (2.0 * a - 1.0)
    A = k - 1.0
    B = (1.0 - k) ** 2 + 4.0 * vv * k
    if np.any(B < 0.0):
        raise NumericError("negative discriminant in the conditional inverse")
    u2 = 2.0 * vv / (np.sqrt(B) - A)
    return _out(u2, u1, v)
