"""
Univariate Simplex distribution S(mu, sigma2) on the open unit interval.

Density::

    f(y; mu, sigma2) = {2 pi sigma2 [y(1-y)]^3}^(-1/2) exp{-d(y; mu) / (2 sigma2)}
    d(y; mu) = (y - mu)^2 / [y (1-y) mu^2 (1-mu)^2]

The CDF has no closed form.  It is computed in the logit variable
``t = log(y / (1 - y))`` where the integrand ``f(y) y (1-y)`` is smooth with
doubly exponential tails, by composite 20-point Gauss-Legendre quadrature on
panels refined adaptively for each ``(mu, sigma2)``.  The same panels provide
the derivatives of the CDF with respect to ``mu`` and ``sigma2`` (by
differentiating under the integral sign), which the bivariate likelihood
needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize
from scipy.special import expit

from . import specfun
from .errors import DomainError, EstimationError, NumericError

LOG_2PI = math.log(2.0 * math.pi)

# support cut: deviance / (2 sigma2) beyond this carries no mass
_SUPPORT_EXPONENT = 150.0
_T_LIMIT = 700.0
_CDF_ABS_TOL = 1e-13
_MAX_PANELS = 4000
_NODES_HI, _WEIGHTS_HI = np.polynomial.legendre.leggauss(20)
_NODES_LO, _WEIGHTS_LO = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class UniParams:
    """Mean ``mu`` in (0, 1) and dispersion ``sigma2 > 0`` of one margin."""

    mu: float
    sigma2: float

    def __post_init__(self):
        mu, s2 = float(self.mu), float(self.sigma2)
        if not (math.isfinite(mu) and 0.0 < mu < 1.0):
            raise DomainError(f"mu must lie in (0, 1), got {self.mu!r}")
        if not (math.isfinite(s2) and s2 > 0.0):
            raise DomainError(f"sigma2 must be positive, got {self.sigma2!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma2", s2)


def _as_unit(y, name="y"):
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError(f"{name} must lie strictly inside (0, 1)")
    return arr


def _scalar_or_array(out, like):
    return float(np.reshape(out, -1)[0]) if np.ndim(like) == 0 else out


# ---------------------------------------------------------------------------
# Deviance and its mu-derivatives
# ---------------------------------------------------------------------------

def _deviance(y, ybar, mu):
    q = mu * (1.0 - mu)
    return (y - mu) ** 2 / (y * ybar * q * q)


def _deviance_derivs(y, ybar, mu):
    """Return ``d, dd/dmu, d2d/dmu2`` for arrays ``y`` with ``ybar = 1 - y``."""
    q = mu * (1.0 - mu)
    yy = y * ybar
    r = y - mu
    d = r * r / (yy * q * q)
    d1 = -2.0 * r / q * (d + 1.0 / (q * q))
    d2 = 2.0 / (q * q) * (3.0 * yy / (q * q) - 2.0 / q + 3.0 * d * (r * r + 2.0 * yy))
    return d, d1, d2


def unit_deviance(y, mu):
    """Unit deviance ``(y - mu)^2 / [y (1-y) mu^2 (1-mu)^2]``."""
    arr = _as_unit(y)
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu!r}")
    return _scalar_or_array(_deviance(arr, 1.0 - arr, mu), y)


def variance_function(mu):
    """``V(mu) = mu^3 (1 - mu)^3``."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0.0) or np.any(mu >= 1.0):
        raise DomainError("mu must lie in (0, 1)")
    return _scalar_or_array((mu * (1.0 - mu)) ** 3, mu)


def log_pdf(y, p: UniParams):
    arr = _as_unit(y)
    yy = arr * (1.0 - arr)
    out = (-0.5 * (LOG_2PI + math.log(p.sigma2)) - 1.5 * np.log(yy)
           - _deviance(arr, 1.0 - arr, p.mu) / (2.0 * p.sigma2))
    return _scalar_or_array(out, y)


def pdf(y, p: UniParams):
    """Simplex density at ``y`` (scalar or array)."""
    return _scalar_or_array(np.exp(log_pdf(y, p)), y)


def mean(p: UniParams) -> float:
    return p.mu


def variance(p: UniParams) -> float:
    """Closed-form variance ``mu(1-mu) - sqrt(1/2s2) e^b Gamma(1/2, b)``.

    ``b = 1 / (2 sigma2 mu^2 (1-mu)^2)``; the product ``e^b Gamma(1/2, b)`` is
    combined in log space because ``e^b`` alone overflows for small dispersion.
    """
    q = p.mu * (1.0 - p.mu)
    b = 1.0 / (2.0 * p.sigma2 * q * q)
    log_term = 0.5 * math.log(1.0 / (2.0 * p.sigma2)) + b + specfun.log_upper_inc_gamma(0.5, b)
    v = q - math.exp(log_term)
    if not 0.0 < v < q:
        raise NumericError(f"variance lost precision at {p}")
    return v


# ---------------------------------------------------------------------------
# CDF engine
# ---------------------------------------------------------------------------

def _logit(y):
    return np.log(y) - np.log1p(-y)


def _support(mu: float, sigma2: float) -> tuple[float, float]:
    """Logit-scale interval outside which the deviance exponent exceeds the cut."""
    c = 2.0 * _SUPPORT_EXPONENT * sigma2 * (mu * (1.0 - mu)) ** 2
    # roots of (1+c) y^2 - (2 mu + c) y + mu^2 = 0, small roots via Vieta
    disc = math.sqrt((2.0 * mu + c) ** 2 - 4.0 * (1.0 + c) * mu * mu)
    y_big = (2.0 * mu + c + disc) / (2.0 * (1.0 + c))
    y_small = mu * mu / ((1.0 + c) * y_big)
    nu = 1.0 - mu
    z_big = (2.0 * nu + c + disc) / (2.0 * (1.0 + c))
    z_small = nu * nu / ((1.0 + c) * z_big)
    t_lo = max(math.log(y_small) - math.log1p(-y_small), -_T_LIMIT)
    t_hi = min(math.log1p(-z_small) - math.log(z_small), _T_LIMIT)
    return t_lo, t_hi


def _integrands(t, mu, sigma2, order):
    """Stack of integrands in the logit variable.

    Row 0 is the density times the Jacobian; rows 1-2 its first derivatives in
    (mu, sigma2); rows 3-5 the second derivatives (mu mu, mu s2, s2 s2).
    """
    y = expit(t)
    ybar = expit(-t)
    yy = y * ybar
    if order == 0:
        d = _deviance(y, ybar, mu)
        h = np.exp(-0.5 * (LOG_2PI + math.log(sigma2)) - 0.5 * np.log(yy) - d / (2.0 * sigma2))
        return h[None]
    d, d1, d2 = _deviance_derivs(y, ybar, mu)
    h = np.exp(-0.5 * (LOG_2PI + math.log(sigma2)) - 0.5 * np.log(yy) - d / (2.0 * sigma2))
    s2 = sigma2
    lm = -d1 / (2.0 * s2)                        # d log g / d mu
    ls = -1.0 / (2.0 * s2) + d / (2.0 * s2 * s2)  # d log g / d sigma2
    rows = [h, h * lm, h * ls]
    if order >= 2:
        lmm = -d2 / (2.0 * s2)
        lms = d1 / (2.0 * s2 * s2)
        lss = 1.0 / (2.0 * s2 * s2) - d / (s2 ** 3)
        rows += [h * (lm * lm + lmm), h * (lm * ls + lms), h * (ls * ls + lss)]
    return np.stack(rows)


def _panel_sums(lo, hi, mu, sigma2, order, nodes, weights):
    half = 0.5 * (hi - lo)
    t = half[:, None] * nodes + (0.5 * (hi + lo))[:, None]
    vals = _integrands(t, mu, sigma2, order)
    return np.einsum("kpn,n->kp", vals, weights) * half


class MarginQuadrature:
    """Adaptive logit-scale quadrature for one Simplex margin.

    Builds the panel partition once; afterwards the CDF, its parameter
    derivatives and the quantile are evaluated for whole arrays at once.
    """

    def __init__(self, mu: float, sigma2: float, tol: float = _CDF_ABS_TOL):
        self.mu = float(mu)
        self.sigma2 = float(sigma2)
        self.t_lo, self.t_hi = _support(self.mu, self.sigma2)
        span = self.t_hi - self.t_lo
        n0 = max(8, int(math.ceil(span / 0.5)))
        edges = np.linspace(self.t_lo, self.t_hi, n0 + 1)
        while True:
            lo, hi = edges[:-1], edges[1:]
            fine = _panel_sums(lo, hi, self.mu, self.sigma2, 1, _NODES_HI, _WEIGHTS_HI)
            coarse = _panel_sums(lo, hi, self.mu, self.sigma2, 1, _NODES_LO, _WEIGHTS_LO)
            scale = np.maximum(np.sum(np.abs(fine), axis=1), 1.0)
            share = (hi - lo) / span
            err = np.max(np.abs(fine - coarse) / scale[:, None], axis=0)
            bad = err > tol * np.maximum(share, 1e-3)
            if not bad.any():
                break
            if len(edges) > _MAX_PANELS:
                raise NumericError(f"CDF quadrature failed to resolve mu={mu}, sigma2={sigma2}")
            mids = 0.5 * (lo[bad] + hi[bad])
            edges = np.sort(np.concatenate([edges, mids]))
        self.edges = edges
        sums = _panel_sums(edges[:-1], edges[1:], self.mu, self.sigma2, 2, _NODES_HI, _WEIGHTS_HI)
        self._cum = np.concatenate([np.zeros((6, 1)), np.cumsum(sums, axis=1)], axis=1)
        self._cum_cdf = self._cum[0] / self._cum[0, -1]
        self.mass = float(self._cum[0, -1])

    def _partial(self, t, order):
        """Integrals from the support start to ``t`` (array), rows by order."""
        t = np.clip(t, self.t_lo, self.t_hi)
        k = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.edges) - 2)
        a = self.edges[k]
        half = 0.5 * (t - a)
        nodes = half[:, None] * _NODES_HI + (0.5 * (t + a))[:, None]
        vals = _integrands(nodes, self.mu, self.sigma2, order)
        part = np.einsum("pkn,n->pk", vals, _WEIGHTS_HI) * half
        rows = {0: 1, 1: 3, 2: 6}[order]
        return self._cum[:rows, k] + part

    def cdf_logit(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.clip(self._partial(t, 0)[0], 0.0, 1.0)

    def cdf_derivs(self, t, order=2):
        """CDF and its parameter derivatives at logit points ``t``.

        Returns an array with rows ``F, F_mu, F_s2`` and, for ``order=2``,
        ``F_mumu, F_mus2, F_s2s2``.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._partial(t, order)

    def quantile_logit(self, u, rel_tol=1e-15, max_iter=200):
        """Logit of the quantile; safeguarded Newton inside the owning panel.

        The stopping rule is relative in ``u`` so deep lower-tail probabilities
        (the CDF can be ~1e-60 inside the support) still invert accurately.
        """
        u = np.atleast_1d(np.asarray(u, dtype=float))
        k = np.clip(np.searchsorted(self._cum_cdf, u, side="right") - 1, 0, len(self.edges) - 2)
        lo = self.edges[k].copy()
        hi = self.edges[k + 1].copy()
        t = 0.5 * (lo + hi)
        active = np.ones(u.shape, dtype=bool)
        for _ in range(max_iter):
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            ti = t[idx]
            f = self._partial(ti, 0)[0] - u[idx]
            dens = _integrands(ti, self.mu, self.sigma2, 0)[0]
            lo[idx] = np.where(f < 0, ti, lo[idx])
            hi[idx] = np.where(f > 0, ti, hi[idx])
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                step = ti - f / dens
            bad = ~np.isfinite(step) | (step <= lo[idx]) | (step >= hi[idx])
            step = np.where(bad, 0.5 * (lo[idx] + hi[idx]), step)
            hit = np.abs(f) <= rel_tol * u[idx]
            scale = 4e-16 * (1.0 + np.abs(ti))
            done = hit | (np.abs(step - ti) <= scale) | (hi[idx] - lo[idx] <= scale)
            t[idx] = np.where(hit, ti, step)
            active[idx[done]] = False
        return t


@lru_cache(maxsize=256)
def margin_quadrature(mu: float, sigma2: float) -> MarginQuadrature:
    """Cached :class:`MarginQuadrature` for ``(mu, sigma2)``."""
    return MarginQuadrature(mu, sigma2)


def cdf(y, p: UniParams):
    """Simplex CDF; 0 for ``y <= 0`` and 1 for ``y >= 1``."""
    arr = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty_like(arr)
    low = arr <= 0.0
    high = arr >= 1.0
    out[low] = 0.0
    out[high] = 1.0
    mid = ~(low | high)
    if mid.any():
        mq = margin_quadrature(p.mu, p.sigma2)
        out[mid] = mq.cdf_logit(_logit(arr[mid]))
    return _scalar_or_array(out, y)


def quantile(u, p: UniParams):
    """Inverse CDF for ``u`` in (0, 1); the result is strictly inside (0, 1)."""
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("u must lie strictly inside (0, 1)")
    t = margin_quadrature(p.mu, p.sigma2).quantile_logit(arr)
    y = np.clip(expit(t), np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return _scalar_or_array(y, u)


# ---------------------------------------------------------------------------
# Univariate likelihood
# ---------------------------------------------------------------------------

def uni_fisher_info(p: UniParams, n: int) -> np.ndarray:
    """Expected information for ``(mu, sigma2)`` from ``n`` observations.

    ``K_mumu = 3n / [mu(1-mu)] + n / [sigma2 mu^3 (1-mu)^3]``,
    ``K_s2s2 = n / (2 sigma2^2)``; the off-diagonal vanishes.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    q = p.mu * (1.0 - p.mu)
    k_mm = 3.0 * n / q + n / (p.sigma2 * q ** 3)
    k_ss = n / (2.0 * p.sigma2 ** 2)
    return np.array([[k_mm, 0.0], [0.0, k_ss]])


def uni_loglik(p: UniParams, data) -> float:
    return math.fsum(np.atleast_1d(log_pdf(data, p)))


def uni_score(p: UniParams, data) -> np.ndarray:
    """Gradient of the univariate log-likelihood in ``(mu, sigma2)``."""
    y = _as_unit(np.atleast_1d(data))
    d, d1, _ = _deviance_derivs(y, 1.0 - y, p.mu)
    s2 = p.sigma2
    return np.array([math.fsum(-d1 / (2.0 * s2)),
                     math.fsum(-1.0 / (2.0 * s2) + d / (2.0 * s2 * s2))])


def uni_fit(data) -> tuple[UniParams, np.ndarray]:
    """Maximum likelihood fit of one Simplex sample.

    ``mu`` maximises the profile likelihood (equivalently minimises the total
    deviance) over the logit scale; ``sigma2`` is the mean deviance at that
    ``mu``.  Standard errors come from the expected information.
    """
    y = _as_unit(np.atleast_1d(data), "data")
    n = y.size
    if n < 3:
        raise EstimationError(f"need at least 3 observations, got {n}")
    if np.ptp(y) == 0.0:
        raise EstimationError("all observations are identical")
    ybar = 1.0 - y

    def total_dev(eta):
        return float(np.sum(_deviance(y, ybar, float(expit(eta)))))

    lo, hi = float(_logit(y.min())), float(_logit(y.max()))
    res = optimize.minimize_scalar(total_dev, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    mu_hat = float(expit(res.x))
    s2_hat = float(np.mean(_deviance(y, ybar, mu_hat)))
    p = UniParams(mu_hat, s2_hat)
    se = 1.0 / np.sqrt(np.diag(uni_fisher_info(p, n)))
    return p, se
