"""
Maximum likelihood for the five-parameter bivariate Simplex model.

The search runs on ``(logit mu1, logit mu2, log sigma2_1, log sigma2_2, lam)``
with ``lam`` box-constrained to ``[-1, 1]``; a Newton polish with the analytic
observed information finishes in the original coordinates.  Standard errors
come from the inverse observed information at the optimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats
from scipy.special import expit, logit

from . import bivariate
from .bivariate import PARAM_NAMES, REJECT, BivParams, as_dataset
from .errors import DomainError, EstimationError
from .simplex import _deviance

MIN_N = 5
SCORE_TOL = 1e-6          # per observation
STEP_TOL = 1e-9
LAMBDA_INIT_CAP = 0.95
BOUNDARY_EPS = 1e-6
MAX_NEWTON = 50
_PENALTY = 1e20


@dataclass
class FitResult:
    estimates: BivParams
    std_errors: np.ndarray
    vcov: np.ndarray
    ci: np.ndarray            # (5, 2) lower/upper
    loglik: float
    converged: bool
    iterations: int
    e_xy: float
    level: float
    n: int
    flags: dict = field(default_factory=dict)
    message: str = ""

    def table(self) -> list[dict]:
        """One row per parameter: name, estimate, se, lower, upper."""
        est = self.estimates.as_vector()
        return [dict(name=nm, estimate=float(est[j]), se=float(self.std_errors[j]),
                     lower=float(self.ci[j, 0]), upper=float(self.ci[j, 1]))
                for j, nm in enumerate(PARAM_NAMES)]


def wald_ci(est: float, se: float, level: float = 0.95) -> tuple[float, float]:
    """``est -+ z se`` with ``z`` the two-sided normal quantile for ``level``."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    if se < 0.0:
        raise DomainError("standard error must be nonnegative")
    if se == 0.0:
        return float(est), float(est)
    z = stats.norm.ppf(0.5 + 0.5 * level)
    return float(est - z * se), float(est + z * se)


def _check_columns(data: np.ndarray) -> None:
    if data.shape[0] < MIN_N:
        raise EstimationError(f"need at least {MIN_N} observations, got {data.shape[0]}")
    for m in range(2):
        if np.ptp(data[:, m]) == 0.0:
            raise EstimationError(f"column {m + 1} is constant")


def moment_init(data) -> BivParams:
    """Starting values: coordinate means, mean deviance, and ``3 x`` Spearman rho for ``lam``."""
    data = as_dataset(data)
    _check_columns(data)
    mus = [float(data[:, m].mean()) for m in range(2)]
    s2 = [float(np.mean(_deviance(data[:, m], 1.0 - data[:, m], mus[m]))) for m in range(2)]
    rho = stats.spearmanr(data[:, 0], data[:, 1])[0]
    lam0 = float(np.clip(3.0 * rho, -LAMBDA_INIT_CAP, LAMBDA_INIT_CAP))
    return BivParams.of(mus[0], mus[1], s2[0], s2[1], lam0)


# transformed coordinates: z = (logit mu1, logit mu2, log s1, log s2, lam)

def _to_z(th: BivParams) -> np.ndarray:
    x = th.as_vector()
    return np.array([logit(x[0]), logit(x[1]), math.log(x[2]), math.log(x[3]), x[4]])


def _from_z(z) -> BivParams:
    lam = float(np.clip(z[4], -1.0, 1.0))
    return BivParams.of(expit(z[0]), expit(z[1]), math.exp(z[2]), math.exp(z[3]), lam)


def _jacobian(th: BivParams) -> np.ndarray:
    """d(original) / d(z) as a diagonal vector."""
    x = th.as_vector()
    return np.array([x[0] * (1 - x[0]), x[1] * (1 - x[1]), x[2], x[3], 1.0])


def _projected_score(th: BivParams, g: np.ndarray) -> np.ndarray:
    g = g.copy()
    if (th.lam >= 1.0 and g[4] > 0) or (th.lam <= -1.0 and g[4] < 0):
        g[4] = 0.0
    return g


class _Objective:
    """Negative mean log-likelihood on the transformed scale, with evaluation count."""

    def __init__(self, data):
        self.data = data
        self.n = data.shape[0]
        self.calls = 0

    def __call__(self, z):
        self.calls += 1
        try:
            th = _from_z(z)
        except DomainError:
            return _PENALTY, np.zeros(5)
        ll = bivariate.log_lik(th, self.data)
        if ll == REJECT or not math.isfinite(ll):
            return _PENALTY, np.zeros(5)
        g = bivariate.score(th, self.data) * _jacobian(th)
        return -ll / self.n, np.nan_to_num(-g / self.n)

    def value(self, z):
        return self(z)[0]


def _newton_polish(th: BivParams, data, tol_score: float):
    """Damped Newton ascent in original coordinates.

    Returns ``(theta, converged, steps)``.  ``lam`` is held on the boundary when
    the score pushes it outward.
    """
    ll = bivariate.log_lik(th, data)
    for it in range(1, MAX_NEWTON + 1):
        g = bivariate.score(th, data)
        J = bivariate.observed_info(th, data)
        gp = _projected_score(th, g)
        free = np.ones(5, dtype=bool)
        if gp[4] == 0.0 and abs(th.lam) >= 1.0:
            free[4] = False
        try:
            step = np.zeros(5)
            step[free] = np.linalg.solve(J[np.ix_(free, free)], g[free])
        except np.linalg.LinAlgError:
            return th, False, it
        if not np.all(np.isfinite(step)):
            return th, False, it
        x = th.as_vector()
        t = 1.0
        accepted = False
        while t > 1e-6:
            cand = x + t * step
            cand[4] = min(1.0, max(-1.0, cand[4]))
            if 0 < cand[0] < 1 and 0 < cand[1] < 1 and cand[2] > 0 and cand[3] > 0:
                nth = BivParams.from_vector(cand)
                nll = bivariate.log_lik(nth, data)
                if nll >= ll - 1e-12 * abs(ll):
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            ok = np.max(np.abs(gp)) <= tol_score
            return th, ok, it
        moved = np.max(np.abs(cand - x) / np.maximum(np.abs(x), 1.0))
        th, ll = nth, nll
        gp = _projected_score(th, bivariate.score(th, data))
        if np.max(np.abs(gp)) <= tol_score and moved < STEP_TOL:
            return th, True, it
        if np.max(np.abs(gp)) <= tol_score and moved < 1e-6:
            # one more step would move less than STEP_TOL; accept
            return th, True, it
    return th, False, MAX_NEWTON


def _standard_errors(th: BivParams, data, flags: dict):
    J = bivariate.observed_info(th, data)
    se = np.full(5, np.nan)
    vcov = np.full((5, 5), np.nan)
    try:
        np.linalg.cholesky(J)
        vcov = np.linalg.inv(J)
        vcov = 0.5 * (vcov + vcov.T)
        se = np.sqrt(np.diag(vcov))
    except np.linalg.LinAlgError:
        for nm in PARAM_NAMES:
            flags[nm] = "observed information not positive definite"
    if 1.0 - abs(th.lam) <= BOUNDARY_EPS:
        flags["lambda"] = "estimate on the boundary; Wald standard error unreliable"
    return se, vcov


def fit(data, level: float = 0.95, init: BivParams | None = None) -> FitResult:
    """Maximum likelihood fit.

    Parameters
    ----------
    data : array_like, shape (n, 2)
        Pairs strictly inside the unit square, ``n >= 5``.
    level : float
        Confidence level of the Wald intervals.
    init : BivParams, optional
        Starting point; :func:`moment_init` when omitted.

    Returns
    -------
    FitResult
        ``converged`` is False when the projected score could not be driven
        below ``1e-6 n``; the estimates are then the best point found.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    data = as_dataset(data)
    _check_columns(data)
    n = data.shape[0]
    start = init if init is not None else moment_init(data)
    obj = _Objective(data)
    bounds = [(None, None)] * 4 + [(-1.0, 1.0)]
    res = optimize.minimize(obj, _to_z(start), jac=True, method="L-BFGS-B", bounds=bounds,
                            options=dict(maxiter=500, ftol=1e-15, gtol=1e-10))
    iterations = int(res.nit)
    z = res.x
    tol_score = SCORE_TOL * n
    th, converged, k = _newton_polish(_from_z(z), data, tol_score)
    iterations += k
    message = "L-BFGS-B + Newton"
    if not converged:
        nm = optimize.minimize(obj.value, z, method="Nelder-Mead",
                               options=dict(maxiter=4000, xatol=1e-10, fatol=1e-14))
        iterations += int(nm.nit)
        th, converged, k = _newton_polish(_from_z(nm.x), data, tol_score)
        iterations += k
        message = "Nelder-Mead fallback + Newton"
    flags: dict = {}
    se, vcov = _standard_errors(th, data, flags)
    est = th.as_vector()
    ci = np.array([wald_ci(est[j], se[j], level) if np.isfinite(se[j]) else (np.nan, np.nan)
                   for j in range(5)])
    ci[4] = np.clip(ci[4], -1.0, 1.0)
    try:
        e_xy = bivariate.joint_moment(th)
    except Exception:  # noqa: BLE001 - reported, not fatal
        e_xy = float("nan")
        flags["e_xy"] = "joint moment could not be evaluated"
    if not converged:
        message += ": score tolerance not reached"
    return FitResult(th, se, vcov, ci, bivariate.log_lik(th, data), converged,
                     iterations, e_xy, level, n, flags, message)
