"""
Bivariate Simplex law: two Simplex margins coupled by an FGM copula.

Parameter vector order throughout is ``(mu1, mu2, sigma2_1, sigma2_2, lam)``.
The joint density is ``f1(y1) f2(y2) G`` with ``G = 1 + lam w1 w2`` and
``w_m = 2 F_m(y_m) - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import simplex, specfun
from .copula import check_lambda
from .errors import AccuracyError, DomainError, NumericError
from .simplex import UniParams

G_FLOOR = 1e-12
REJECT = -1e300
PARAM_NAMES = ("mu1", "mu2", "sigma2_1", "sigma2_2", "lambda")


@dataclass(frozen=True)
class BivParams:
    m1: UniParams
    m2: UniParams
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", check_lambda(self.lam))

    @classmethod
    def of(cls, mu1, mu2, s1, s2, lam) -> "BivParams":
        """Build from the flat vector ``(mu1, mu2, sigma2_1, sigma2_2, lam)``."""
        return cls(UniParams(mu1, s1), UniParams(mu2, s2), lam)

    @classmethod
    def from_vector(cls, x) -> "BivParams":
        x = np.asarray(x, dtype=float)
        if x.shape != (5,):
            raise DomainError(f"expected 5 parameters, got shape {x.shape}")
        return cls.of(*x)

    def as_vector(self) -> np.ndarray:
        return np.array([self.m1.mu, self.m2.mu, self.m1.sigma2, self.m2.sigma2, self.lam])

    @property
    def margins(self) -> tuple[UniParams, UniParams]:
        return self.m1, self.m2


@dataclass(frozen=True)
class ThetaDerived:
    """Per-margin constants ``xi = 1/mu - 1``, ``a = (xi+1)^2/(sigma2 xi)``, ``r = 1/(sigma sqrt(2 pi))``."""

    xi: tuple[float, float]
    a: tuple[float, float]
    r: tuple[float, float]

    @classmethod
    def of(cls, th: BivParams) -> "ThetaDerived":
        xi, a, r = [], [], []
        for m in th.margins:
            x = 1.0 / m.mu - 1.0
            xi.append(x)
            a.append((x + 1.0) ** 2 / (m.sigma2 * x))
            r.append(1.0 / math.sqrt(2.0 * math.pi * m.sigma2))
        return cls(tuple(xi), tuple(a), tuple(r))


def as_dataset(data) -> np.ndarray:
    """Validate an ``(n, 2)`` array of pairs strictly inside the unit square."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise DomainError(f"data must be a nonempty (n, 2) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("data values must lie strictly inside (0, 1)")
    return arr


# ---------------------------------------------------------------------------
# Per-observation terms
# ---------------------------------------------------------------------------

@dataclass
class _MarginTerms:
    logf: np.ndarray
    d: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    F: np.ndarray
    dF: np.ndarray | None   # rows F_mu, F_s2
    d2F: np.ndarray | None  # rows F_mumu, F_mus2, F_s2s2


@dataclass
class _Terms:
    th: BivParams
    margins: tuple[_MarginTerms, _MarginTerms]
    w: np.ndarray   # (2, n)
    G: np.ndarray


_cache: dict = {}


def _margin_terms(y, p: UniParams, order: int) -> _MarginTerms:
    ybar = 1.0 - y
    d, d1, d2 = simplex._deviance_derivs(y, ybar, p.mu)
    logf = (-0.5 * (simplex.LOG_2PI + math.log(p.sigma2)) - 1.5 * np.log(y * ybar)
            - d / (2.0 * p.sigma2))
    mq = simplex.margin_quadrature(p.mu, p.sigma2)
    t = simplex._logit(y)
    if order == 0:
        F = mq.cdf_logit(t)
        return _MarginTerms(logf, d, d1, d2, F, None, None)
    rows = mq.cdf_derivs(t, order=2)
    return _MarginTerms(logf, d, d1, d2, np.clip(rows[0], 0.0, 1.0), rows[1:3], rows[3:6])


def _terms(th: BivParams, data: np.ndarray, order: int) -> _Terms:
    key = (tuple(th.as_vector()), order, data.shape, hash(data.tobytes()))
    hit = _cache.get("last")
    if hit is not None and hit[0] == key:
        return hit[1]
    if hit is not None and order == 0 and hit[0][0] == key[0] and hit[0][2:] == key[2:]:
        return hit[1]
    mts = (_margin_terms(data[:, 0], th.m1, order), _margin_terms(data[:, 1], th.m2, order))
    w = np.stack([2.0 * mts[0].F - 1.0, 2.0 * mts[1].F - 1.0])
    G = 1.0 + th.lam * w[0] * w[1]
    terms = _Terms(th, mts, w, G)
    _cache["last"] = (key, terms)
    return terms


# ---------------------------------------------------------------------------
# Density and likelihood
# ---------------------------------------------------------------------------

def joint_pdf(y1, y2, th: BivParams):
    """Joint density at ``(y1, y2)``; broadcasts over arrays."""
    a = np.asarray(y1, dtype=float)
    b = np.asarray(y2, dtype=float)
    f1 = simplex.pdf(a, th.m1)
    f2 = simplex.pdf(b, th.m2)
    if th.lam == 0.0:
        out = f1 * f2
    else:
        w1 = 2.0 * simplex.cdf(a, th.m1) - 1.0
        w2 = 2.0 * simplex.cdf(b, th.m2) - 1.0
        out = f1 * f2 * np.maximum(1.0 + th.lam * w1 * w2, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def log_lik(th: BivParams, data) -> float:
    """Log-likelihood of the pairs in ``data``.

    Terms are accumulated with :func:`math.fsum`, which rounds the exact sum
    once, so the value does not depend on observation order.  Returns
    ``REJECT`` when the copula factor drops below ``G_FLOOR`` anywhere.
    """
    data = as_dataset(data)
    tm = _terms(th, data, 0)
    if np.any(tm.G <= G_FLOOR):
        return REJECT
    parts = np.concatenate([tm.margins[0].logf, tm.margins[1].logf, np.log(tm.G)])
    return math.fsum(parts)


def _score_parts(tm: _Terms):
    lam, w, G = tm.th.lam, tm.w, tm.G
    cols = [None] * 5
    for m, (mt, p) in enumerate(zip(tm.margins, tm.th.margins)):
        s2 = p.sigma2
        wo = w[1 - m]
        cols[m] = -mt.d1 / (2.0 * s2) + 2.0 * lam * mt.dF[0] * wo / G
        cols[2 + m] = (-1.0 / (2.0 * s2) + mt.d / (2.0 * s2 * s2)
                       + 2.0 * lam * mt.dF[1] * wo / G)
    cols[4] = w[0] * w[1] / G
    return np.stack(cols)


def score(th: BivParams, data) -> np.ndarray:
    """Analytic gradient of :func:`log_lik` in ``(mu1, mu2, sigma2_1, sigma2_2, lam)``."""
    data = as_dataset(data)
    tm = _terms(th, data, 2)
    return np.array([math.fsum(row) for row in _score_parts(tm)])


def observed_info(th: BivParams, data) -> np.ndarray:
    """Negated Hessian of :func:`log_lik`; symmetric by construction."""
    data = as_dataset(data)
    tm = _terms(th, data, 2)
    lam, w, G = tm.th.lam, tm.w, tm.G
    idx = ((0, 2), (1, 3))   # (mu, sigma2) slots per margin
    # first derivatives of G
    Gd = np.zeros((5, G.size))
    for m, mt in enumerate(tm.margins):
        for k, j in enumerate(idx[m]):
            Gd[j] = 2.0 * lam * mt.dF[k] * w[1 - m]
    Gd[4] = w[0] * w[1]
    # second derivatives of G
    Gdd = np.zeros((5, 5, G.size))
    pairs = ((0, 0, 0), (0, 1, 1), (1, 1, 2))   # (k, l, row in d2F)
    for m, mt in enumerate(tm.margins):
        for k, l, r in pairs:
            a, b = idx[m][k], idx[m][l]
            Gdd[a, b] = Gdd[b, a] = 2.0 * lam * mt.d2F[r] * w[1 - m]
        for k, j in enumerate(idx[m]):
            Gdd[j, 4] = Gdd[4, j] = 2.0 * mt.dF[k] * w[1 - m]
    f1, f2 = tm.margins[0].dF, tm.margins[1].dF
    for k, a in enumerate(idx[0]):
        for l, b in enumerate(idx[1]):
            Gdd[a, b] = Gdd[b, a] = 4.0 * lam * f1[k] * f2[l]
    H = np.empty((5, 5))
    for a in range(5):
        for b in range(a, 5):
            h = Gdd[a, b] / G - Gd[a] * Gd[b] / (G * G)
            H[a, b] = H[b, a] = math.fsum(h)
    # marginal log-density parts
    for m, (mt, p) in enumerate(zip(tm.margins, tm.th.margins)):
        s2 = p.sigma2
        i, j = idx[m]
        H[i, i] += math.fsum(-mt.d2 / (2.0 * s2))
        cross = math.fsum(mt.d1 / (2.0 * s2 * s2))
        H[i, j] += cross
        H[j, i] += cross
        H[j, j] += math.fsum(1.0 / (2.0 * s2 * s2) - mt.d / s2 ** 3)
    return -H


def loglik_score_info(th: BivParams, data):
    """``(log_lik, score, observed_info)`` from one shared evaluation."""
    data = as_dataset(data)
    return log_lik(th, data), score(th, data), observed_info(th, data)


# ---------------------------------------------------------------------------
# Joint moment
# ---------------------------------------------------------------------------

def _check_a(a: float) -> None:
    if a < specfun.A_FLOOR:
        raise AccuracyError(f"a={a} is below the supported floor {specfun.A_FLOOR}")


def moment_bracket(p: UniParams) -> float:
    """``E[Y (2 F(Y) - 1)]`` for one Simplex margin, in closed form.

    Equals ``mu(1-mu) (2/pi) e^{2a} int_{2a}^inf K0(t) dt`` with
    ``a = 1 / (sigma2 mu (1-mu))``; the scaled tail integral comes from the
    Bessel-Struve antiderivative of ``K0``.
    """
    q = p.mu * (1.0 - p.mu)
    a = 1.0 / (p.sigma2 * q)
    _check_a(a)
    return q * (2.0 / math.pi) * specfun.k0_tail_scaled(2.0 * a)


def joint_moment(th: BivParams) -> float:
    """``E[Y1 Y2] = mu1 mu2 + lam B1 B2`` with ``B_m`` from :func:`moment_bracket`."""
    base = th.m1.mu * th.m2.mu
    if th.lam == 0.0:
        return base
    val = base + th.lam * moment_bracket(th.m1) * moment_bracket(th.m2)
    if not 0.0 < val < min(th.m1.mu, th.m2.mu):
        raise NumericError(f"joint moment {val} outside its admissible range")
    return val


def uncorrected_bracket(p: UniParams) -> float:
    """``r^2 pi/2 (1/(a xi) + 1/a + A(a)) - mu``, the bracket as it is often quoted.

    Kept for comparison only.  It omits a factor 4 from a change of
    variables, a ``1/a`` on the Struve part and the matching ``e^{2a}``, so it
    does not equal :func:`moment_bracket` except by coincidence.
    """
    x = 1.0 / p.mu - 1.0
    a = (x + 1.0) ** 2 / (p.sigma2 * x)
    _check_a(a)
    r2 = 1.0 / (2.0 * math.pi * p.sigma2)
    return r2 * math.pi / 2.0 * (1.0 / (a * x) + 1.0 / a + specfun.bessel_struve_A(a)) - p.mu


def uncorrected_joint_moment(th: BivParams) -> float:
    return (th.m1.mu * th.m2.mu
            + th.lam * uncorrected_bracket(th.m1) * uncorrected_bracket(th.m2))


def covariance(th: BivParams) -> float:
    """``E[Y1 Y2] - mu1 mu2``; carries the sign of ``lam``."""
    if th.lam == 0.0:
        return 0.0
    return th.lam * moment_bracket(th.m1) * moment_bracket(th.m2)
