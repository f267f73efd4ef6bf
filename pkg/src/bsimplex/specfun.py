"""
Special functions on the positive real axis.

Modified Bessel functions K0, K1, K_{1/2}; modified Struve functions L0 and
L_{-1}; the upper incomplete gamma function and the error function.  Only the
orders needed by the Simplex moment formulas are provided.

Evaluation strategy
-------------------
K0, K1
    ascending series for ``x <= 2``; Steed's continued fraction (the
    Thompson-Barnett CF2 recurrence) for ``x > 2``, which yields the
    exponentially scaled values ``e^x K(x)`` without overflow.
L0, L_{-1}
    ascending series for ``x <= 30``; above that ``L = I + M`` with the
    Hankel expansion of ``I`` and the large-argument expansion of the
    Struve remainder ``M = L - I``.
M0, M_{-1}
    Laplace integrals ``M0(z) = -(2/pi) int_0^{pi/2} exp(-z sin t) dt`` and
    ``M_{-1}(z) = (2/pi) int_0^{pi/2} exp(-z sin t) sin t dt`` (Gauss-Legendre
    on geometrically graded panels) for ``z <= 30``, asymptotic series beyond.
    The remainder is what makes ``int_z^inf K0`` computable without the
    catastrophic cancellation hidden in ``1 - z (K0 L_{-1} + K1 L0)``.

All functions are scalar, pure and reentrant.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import AccuracyError, DomainError, NumericError

EULER_GAMMA = 0.57721566490153286061
SERIES_TOL = 1e-16
SERIES_CAP = 500
K_SERIES_MAX = 2.0
K_UNDERFLOW = 700.0
STRUVE_ASYMPTOTIC_MIN = 30.0
A_FLOOR = 1e-100

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(30)


def _check_positive(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {x!r}")
    return x


def _check_nonnegative(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"{name} must be non-negative and finite, got {x!r}")
    return x


# ---------------------------------------------------------------------------
# Modified Bessel functions
# ---------------------------------------------------------------------------

def _k01_series(x: float) -> tuple[float, float]:
    """K0 and K1 from their ascending series (small x)."""
    q = 0.25 * x * x
    log_half = math.log(0.5 * x)
    term0 = 1.0          # q^k / (k!)^2
    term1 = 1.0          # q^k / (k! (k+1)!)
    harmonic = 0.0       # H_k
    i0 = 1.0
    i1 = 1.0
    k0_tail = 0.0
    k1_tail = 2.0 * (-EULER_GAMMA) + 1.0   # psi(1) + psi(2) at k = 0
    for k in range(1, SERIES_CAP):
        term0 *= q / (k * k)
        term1 *= q / (k * (k + 1))
        harmonic += 1.0 / k
        i0 += term0
        i1 += term1
        k0_tail += term0 * harmonic
        psi_sum = 2.0 * (-EULER_GAMMA) + 2.0 * harmonic + 1.0 / (k + 1)
        k1_tail += term1 * psi_sum
        if term0 < SERIES_TOL * i0 and term1 < SERIES_TOL * i1:
            break
    else:
        raise AccuracyError(f"K series did not converge at x={x}")
    i1 *= 0.5 * x
    k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_tail
    return k0, k1


def _k01_scaled_cf(x: float) -> tuple[float, float]:
    # Steed's algorithm for order 0; returns e^x K0(x), e^x K1(x).
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, SERIES_CAP):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < SERIES_TOL:
            break
    else:
        raise AccuracyError(f"K continued fraction did not converge at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _k01_scaled(x: float) -> tuple[float, float]:
    """Return ``(e^x K0(x), e^x K1(x))`` for ``x > 0``."""
    if x <= K_SERIES_MAX:
        k0, k1 = _k01_series(x)
        e = math.exp(x)
        return k0 * e, k1 * e
    return _k01_scaled_cf(x)


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order 0.

    Returns 0.0 for ``x > 700`` where the value underflows.
    """
    x = _check_positive(x)
    if x > K_UNDERFLOW:
        return 0.0
    if x <= K_SERIES_MAX:
        return _k01_series(x)[0]
    return _k01_scaled_cf(x)[0] * math.exp(-x)


def bessel_k1(x: float) -> float:
    """Modified Bessel function of the second kind, order 1 (0.0 beyond 700)."""
    x = _check_positive(x)
    if x > K_UNDERFLOW:
        return 0.0
    if x <= K_SERIES_MAX:
        return _k01_series(x)[1]
    return _k01_scaled_cf(x)[1] * math.exp(-x)


def bessel_k_half(x: float) -> float:
    """K_{1/2}(x) = sqrt(pi / (2x)) exp(-x), in closed form."""
    x = _check_positive(x)
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)


def _i01_scaled(x: float) -> tuple[float, float]:
    """Return ``(e^-x I0(x), e^-x I1(x))`` for ``x >= 0``."""
    if x <= STRUVE_ASYMPTOTIC_MIN:
        q = 0.25 * x * x
        t0 = t1 = 1.0
        i0 = i1 = 1.0
        for k in range(1, SERIES_CAP):
            t0 *= q / (k * k)
            t1 *= q / (k * (k + 1))
            i0 += t0
            i1 += t1
            if t0 < SERIES_TOL * i0 and t1 < SERIES_TOL * i1:
                break
        else:
            raise AccuracyError(f"I series did not converge at x={x}")
        e = math.exp(-x)
        return i0 * e, 0.5 * x * i1 * e
    out = []
    for nu in (0, 1):
        mu4 = 4.0 * nu * nu
        term = 1.0
        total = 1.0
        for k in range(SERIES_CAP):
            nxt = term * ((2 * k + 1) ** 2 - mu4) / (8.0 * (k + 1) * x)
            if abs(nxt) >= abs(term):
                break
            term = nxt
            total += term
            if abs(term) < SERIES_TOL * abs(total):
                break
        out.append(total / math.sqrt(2.0 * math.pi * x))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Modified Struve functions
# ---------------------------------------------------------------------------

def _struve_series(nu: int, x: float) -> float:
    half = 0.5 * x
    if nu == 0:
        term = half / (0.25 * math.pi)          # Gamma(3/2)^2 = pi/4
    else:
        term = 2.0 / math.pi                    # Gamma(3/2) Gamma(1/2) = pi/2
    total = term
    q = half * half
    for k in range(SERIES_CAP):
        term *= q / ((k + 1.5) * (k + nu + 1.5))
        total += term
        if term < SERIES_TOL * total:
            return total
    raise AccuracyError(f"Struve series did not converge at x={x}")


def _struve_m_asymptotic(x: float) -> tuple[float, float]:
    """Large-argument expansions of M0 = L0 - I0 and M_{-1} = L_{-1} - I1."""
    r = (2.0 / x) ** 2
    term0 = -2.0 / (math.pi * x)
    termm1 = 2.0 / (math.pi * x * x)
    m0, mm1 = term0, termm1
    done0 = donem1 = False
    for k in range(SERIES_CAP):
        if not done0:
            nxt = term0 * (k + 0.5) ** 2 * r
            if abs(nxt) >= abs(term0) or abs(nxt) < SERIES_TOL * abs(m0):
                done0 = True
            else:
                term0 = nxt
                m0 += nxt
        if not donem1:
            nxt = termm1 * (k + 0.5) * (k + 1.5) * r
            if abs(nxt) >= abs(termm1) or abs(nxt) < SERIES_TOL * abs(mm1):
                donem1 = True
            else:
                termm1 = nxt
                mm1 += nxt
        if done0 and donem1:
            return m0, mm1
    raise AccuracyError(f"Struve remainder expansion did not settle at x={x}")


def _struve_m_laplace(x: float) -> tuple[float, float]:
    edges = [0.0]
    width = min(1.0 / x, 0.25) if x > 0.0 else 0.25
    half_pi = 0.5 * math.pi
    while edges[-1] + width < half_pi:
        edges.append(edges[-1] + width)
        width *= 2.0
    edges.append(half_pi)
    e = np.asarray(edges)
    lo, hi = e[:-1, None], e[1:, None]
    t = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * _GL_WEIGHTS
    s = np.sin(t)
    f = np.exp(-x * s)
    m0 = -2.0 / math.pi * float(np.sum(w * f))
    mm1 = 2.0 / math.pi * float(np.sum(w * f * s))
    return m0, mm1


def struve_m(x: float) -> tuple[float, float]:
    """Struve remainders ``(L0 - I0, L_{-1} - I1)`` at ``x >= 0``."""
    x = _check_nonnegative(x)
    if x > STRUVE_ASYMPTOTIC_MIN:
        return _struve_m_asymptotic(x)
    return _struve_m_laplace(x)


def _struve_scaled(nu: int, x: float) -> float:
    """``e^-x L_nu(x)`` for ``nu in (0, -1)``."""
    if x <= STRUVE_ASYMPTOTIC_MIN:
        return _struve_series(nu, x) * math.exp(-x)
    i0s, i1s = _i01_scaled(x)
    m0, mm1 = _struve_m_asymptotic(x)
    e = math.exp(-x)
    return i0s + m0 * e if nu == 0 else i1s + mm1 * e


def _struve(nu: int, x: float) -> float:
    if x == 0.0:
        return 0.0 if nu == 0 else 2.0 / math.pi
    if x <= STRUVE_ASYMPTOTIC_MIN:
        return _struve_series(nu, x)
    try:
        return _struve_scaled(nu, x) * math.exp(x)
    except OverflowError as exc:
        raise NumericError(f"L_{nu}({x}) overflows") from exc


def struve_l0(x: float) -> float:
    """Modified Struve function L0 for ``x >= 0``."""
    return _struve(0, _check_nonnegative(x))


def struve_lm1(x: float) -> float:
    """Modified Struve function L_{-1} for ``x >= 0``."""
    return _struve(-1, _check_nonnegative(x))


def bessel_struve_product(z: float) -> float:
    """``K0(z) L_{-1}(z) + K1(z) L0(z)``, evaluated with scaled factors."""
    z = _check_positive(z, "z")
    k0s, k1s = _k01_scaled(z)
    return k0s * _struve_scaled(-1, z) + k1s * _struve_scaled(0, z)


def k0_integral(z: float) -> float:
    """Antiderivative ``int_0^z K0(t) dt = (pi/2) z (K0 L_{-1} + K1 L0)(z)``."""
    z = _check_nonnegative(z, "z")
    if z == 0.0:
        return 0.0
    return 0.5 * math.pi * z * bessel_struve_product(z)


def k0_tail_scaled(z: float) -> float:
    """``e^z int_z^inf K0(t) dt`` for ``z > 0``.

    Uses ``1 - z (K0 L_{-1} + K1 L0) = -z (K0 M_{-1} + K1 M0)`` (the Wronskian
    ``K0 I1 + K1 I0 = 1/z`` absorbs the leading unit), so no cancellation
    occurs for large ``z``.
    """
    z = _check_positive(z, "z")
    k0s, k1s = _k01_scaled(z)
    m0, mm1 = struve_m(z)
    return -0.5 * math.pi * z * (k0s * mm1 + k1s * m0)


def bessel_struve_A(a: float) -> float:
    """``1 - 2 [K0(2a) L_{-1}(2a) + K1(2a) L0(2a)]``.

    Diverges to -inf as ``a -> 0``; arguments below ``A_FLOOR`` raise
    :class:`NumericError`.
    """
    a = _check_positive(a, "a")
    if a < A_FLOOR:
        raise NumericError(f"a={a} is below the floor {A_FLOOR}")
    return 1.0 - 2.0 * bessel_struve_product(2.0 * a)


# ---------------------------------------------------------------------------
# Incomplete gamma and error function
# ---------------------------------------------------------------------------

def log_upper_inc_gamma(s: float, x: float) -> float:
    """Natural log of the upper incomplete gamma function ``Gamma(s, x)``."""
    s = _check_positive(s, "s")
    x = _check_nonnegative(x)
    if x == 0.0:
        return math.lgamma(s)
    if x < s + 1.0:
        # lower series, Gamma(s, x) = Gamma(s) - gamma(s, x)
        term = total = 1.0 / s
        for n in range(1, SERIES_CAP):
            term *= x / (s + n)
            total += term
            if abs(term) < SERIES_TOL * abs(total):
                break
        else:
            raise AccuracyError(f"incomplete gamma series failed at s={s}, x={x}")
        lower = math.exp(-x + s * math.log(x) - math.lgamma(s)) * total
        return math.lgamma(s) + math.log1p(-lower)
    # Legendre continued fraction by the modified Lentz method
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, SERIES_CAP):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < SERIES_TOL:
            break
    else:
        raise AccuracyError(f"incomplete gamma fraction failed at s={s}, x={x}")
    return -x + s * math.log(x) + math.log(h)


def upper_inc_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma ``int_x^inf t^(s-1) e^-t dt``."""
    return math.exp(log_upper_inc_gamma(s, x))


def erf(x: float) -> float:
    """Error function (delegates to :func:`math.erf`)."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"erf needs a finite argument, got {x!r}")
    return math.erf(x)
