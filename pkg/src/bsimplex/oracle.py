"""
Brute-force validators.

Nothing here reuses the logit-space Gauss-Legendre CDF engine: double
integrals use a tanh-sinh rule directly in ``y`` and the marginal CDF at the
rule's nodes is accumulated interval by interval with ``scipy.integrate.quad``.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import expit

from . import bivariate, specfun
from .bivariate import BivParams
from .errors import AccuracyError, DomainError, NumericError

TS_T_MAX = 6.2          # pi sinh(6.2) ~ 1550: nodes beyond round to 0 or 1
TS_H0 = 0.125
TS_LEVELS = 8


def _ts_nodes(h: float):
    """tanh-sinh nodes on (0, 1): ``y = expit(pi sinh t)``, weights ``h dy/dt``."""
    t = np.arange(-TS_T_MAX, TS_T_MAX + 0.5 * h, h)
    s = math.pi * np.sinh(t)
    y = expit(s)
    ybar = expit(-s)
    w = h * y * ybar * math.pi * np.cosh(t)
    keep = (y > 0.0) & (ybar > 0.0) & (w > 0.0)
    return y[keep], ybar[keep], w[keep]


def _density(y, ybar, mu, s2):
    with np.errstate(over="ignore"):
        d = (y - mu) ** 2 / (y * ybar * (mu * (1.0 - mu)) ** 2)
    return np.exp(-0.5 * math.log(2.0 * math.pi * s2) - 1.5 * np.log(y * ybar) - d / (2.0 * s2))


def _cdf_at(y, mu, s2):
    """Marginal CDF at sorted nodes by summing ``quad`` over consecutive gaps."""
    def f(x):
        if x <= 0.0 or x >= 1.0:
            return 0.0
        return float(_density(np.array(x), np.array(1.0 - x), mu, s2))

    out = np.empty_like(y)
    acc = 0.0
    prev = 0.0
    for i, x in enumerate(y):
        pts = [mu] if prev < mu < x else None
        val, _ = integrate.quad(f, prev, x, points=pts, epsabs=1e-15, epsrel=1e-13, limit=200)
        acc += val
        out[i] = acc
        prev = x
    tail, _ = integrate.quad(f, prev, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    return out / (acc + tail)


def _margin_rule(p, h):
    y, ybar, w = _ts_nodes(h)
    f = _density(y, ybar, p.mu, p.sigma2)
    return y, w * f, 2.0 * _cdf_at(y, p.mu, p.sigma2) - 1.0


def _double_integral(th: BivParams, weight_x: bool, tol: float):
    prev = None
    h = TS_H0
    for _ in range(TS_LEVELS):
        y1, wf1, c1 = _margin_rule(th.m1, h)
        y2, wf2, c2 = _margin_rule(th.m2, h)
        g1 = wf1 * (y1 if weight_x else 1.0)
        g2 = wf2 * (y2 if weight_x else 1.0)
        # full tensor product of the rule with the copula-weighted density
        grid = np.outer(g1, g2) * (1.0 + th.lam * np.outer(c1, c2))
        val = float(np.sum(grid))
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
        h *= 0.5
    raise AccuracyError(f"tanh-sinh refinement did not settle for {th}")


def numeric_joint_moment(th: BivParams, tol: float = 1e-10) -> float:
    """``E[Y1 Y2]`` by tensor-product tanh-sinh quadrature of ``y1 y2 f(y1, y2)``."""
    return _double_integral(th, True, tol)


def normalization_scan(th: BivParams, tol: float = 1e-10) -> float:
    """Total mass of the joint density over the unit square."""
    if not isinstance(th, BivParams):
        raise DomainError("normalization_scan needs a BivParams")
    return _double_integral(th, False, tol)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def _steps(at, h):
    if not h > 0.0:
        raise DomainError(f"step must be positive, got {h!r}")
    x = np.asarray(at, dtype=float)
    return x, h * np.maximum(np.abs(x), 1.0)


def _eval(f, x):
    v = f(x)
    if not math.isfinite(v):
        raise NumericError(f"non-finite function value at {x}")
    return v


def numeric_gradient(f: Callable, at, h: float = 1e-6) -> np.ndarray:
    """Central differences with step ``h max(|x_j|, 1)`` per coordinate."""
    x, hs = _steps(at, h)
    g = np.empty(x.size)
    for j in range(x.size):
        e = np.zeros(x.size)
        e[j] = hs[j]
        g[j] = (_eval(f, x + e) - _eval(f, x - e)) / (2.0 * hs[j])
    return g


def numeric_hessian(f: Callable, at, h: float = 1e-3) -> np.ndarray:
    """Central second differences, symmetrised."""
    x, hs = _steps(at, h)
    k = x.size
    f0 = _eval(f, x)
    H = np.empty((k, k))
    for i in range(k):
        ei = np.zeros(k)
        ei[i] = hs[i]
        H[i, i] = (_eval(f, x + ei) - 2.0 * f0 + _eval(f, x - ei)) / hs[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros(k)
            ej[j] = hs[j]
            v = (_eval(f, x + ei + ej) - _eval(f, x + ei - ej)
                 - _eval(f, x - ei + ej) + _eval(f, x - ei - ej)) / (4.0 * hs[i] * hs[j])
            H[i, j] = H[j, i] = v
    return 0.5 * (H + H.T)


# ---------------------------------------------------------------------------
# Bessel / Struve identities
# ---------------------------------------------------------------------------

def _quad_inf(g) -> float:
    val, err = integrate.quad(g, 1.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=500)
    return val


def j1_integral(a: float) -> float:
    """``int_1^inf K1(a (q^2 + 1)/q) / q dq`` by adaptive quadrature."""
    return _quad_inf(lambda q: specfun.bessel_k1(a * (q * q + 1.0) / q) / q)


def j0_integral(a: float) -> float:
    """``int_1^inf K0(a (q^2 + 1)/q) dq`` by adaptive quadrature."""
    return _quad_inf(lambda q: specfun.bessel_k0(a * (q * q + 1.0) / q))


def j1_closed(a: float) -> float:
    return math.pi / (4.0 * a) * math.exp(-2.0 * a)


def j0_closed(a: float) -> float:
    """``pi/(4a) e^{-2a} + pi/(4a) (1 - 2a P(2a))``, ``P(z) = K0 L_{-1} + K1 L0``."""
    return math.pi / (4.0 * a) * (math.exp(-2.0 * a) + 1.0 - 2.0 * a * specfun.bessel_struve_product(2.0 * a))


def j0_closed_uncorrected(a: float) -> float:
    """``pi/(4a) e^{-2a} + (pi/4) A(a)``: agrees with :func:`j0_integral` only at ``a = 1``."""
    return math.pi / (4.0 * a) * math.exp(-2.0 * a) + math.pi / 4.0 * specfun.bessel_struve_A(a)


def k0_antiderivative(z: float) -> float:
    """``(pi/2) z (K0 L_{-1} + K1 L0)(z)``; its derivative is ``K0(z)``."""
    return specfun.k0_integral(z)


def product_deviation(z: float) -> float:
    """``1 - z P(z)`` evaluated as ``(2/pi) int_z^inf K0``, free of cancellation."""
    return 2.0 / math.pi * math.exp(-z) * specfun.k0_tail_scaled(z)


def antiderivative_residual(z: float, h: float = 1e-5) -> float:
    """Central-difference derivative of :func:`k0_antiderivative` minus ``K0(z)``."""
    d = (k0_antiderivative(z + h) - k0_antiderivative(z - h)) / (2.0 * h)
    return d - specfun.bessel_k0(z)


# ---------------------------------------------------------------------------
# Battery
# ---------------------------------------------------------------------------

def run_checks(include_slow: bool = True) -> list[tuple[str, bool, str]]:
    """Run the oracle battery; returns ``(name, passed, detail)`` triples."""
    out: list[tuple[str, bool, str]] = []

    def record(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))

    grid_a = (0.5, 1.0, 2.0, 5.0)
    for a in grid_a:
        def j1(a=a):
            r = abs(j1_integral(a) / j1_closed(a) - 1.0)
            return r <= 1e-6, f"rel err {r:.2e}"
        record(f"J1 identity a={a:g}", j1)
    for a in grid_a:
        def j0(a=a):
            r = abs(j0_integral(a) / j0_closed(a) - 1.0)
            return r <= 1e-6, f"rel err {r:.2e}"
        record(f"J0 identity a={a:g}", j0)
    for z in (1.0, 2.0, 5.0):
        def anti(z=z):
            r = abs(antiderivative_residual(z))
            return r <= 1e-6, f"abs residual {r:.2e}"
        record(f"K0 antiderivative z={z:g}", anti)

    def product():
        zs = (50.0, 100.0, 200.0)
        direct = abs(200.0 * specfun.bessel_struve_product(200.0) - 1.0)
        devs = [product_deviation(z) for z in zs]
        ok = direct <= 0.01 and devs[0] > devs[1] > devs[2] > 0.0
        return ok, f"|200 P(200) - 1| = {direct:.1e}; tails " + ", ".join(f"{d:.2e}" for d in devs)
    record("z P(z) -> 1", product)

    def k0_values():
        r = max(abs(specfun.bessel_k0(1.0) / 0.42102443824070834 - 1.0),
                abs(specfun.bessel_k1(1.0) / 0.60190723019723457 - 1.0),
                abs(specfun.bessel_k0(0.1) / 2.4270690247020166 - 1.0))
        return r <= 1e-10, f"rel err {r:.2e}"
    record("Bessel reference values", k0_values)

    if include_slow:
        from .montecarlo import SCENARIOS
        for name in ("s1_theta1", "s2_theta2", "s3_theta3"):
            th = BivParams.of(*SCENARIOS[name])
            def moment(th=th):
                a, b = bivariate.joint_moment(th), numeric_joint_moment(th)
                r = abs(a / b - 1.0)
                return r <= 1e-5, f"closed {a:.10f} numeric {b:.10f}"
            record(f"joint moment {name}", moment)
            def norm(th=th):
                m = normalization_scan(th)
                return abs(m - 1.0) <= 1e-6, f"mass {m:.12f}"
            record(f"normalization {name}", norm)

        def derivs():
            from .sampler import sample_matrix
            th = BivParams.of(0.5, 0.5, 2.0, 2.0, 0.3)
            data = sample_matrix(th, 50, 11)
            f = lambda x: bivariate.log_lik(BivParams.from_vector(x), data)  # noqa: E731
            x0 = th.as_vector()
            g = numeric_gradient(f, x0)
            H = numeric_hessian(f, x0)
            rg = np.max(np.abs(bivariate.score(th, data) - g) / np.maximum(np.abs(g), 1e-3 * np.linalg.norm(g)))
            rh = np.linalg.norm(bivariate.observed_info(th, data) + H) / np.linalg.norm(H)
            return rg <= 1e-4 and rh <= 1e-3, f"score rel {rg:.1e}, info rel {rh:.1e}"
        record("score / information vs finite differences", derivs)
    return out
