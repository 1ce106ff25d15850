"""CDFs and quantiles of the standard normal, Student t and F distributions.

Everything is built on ``ln_gamma`` and a continued-fraction evaluation of
the regularized incomplete beta function. Degrees of freedom are integers.
Quantiles are found by a bracketed Newton iteration that falls back to
bisection whenever a Newton step would leave the bracket.
"""

from __future__ import annotations

import math
from statistics import NormalDist
from typing import Callable

from .exceptions import DomainError
from .validation import check_dof, check_probability

__all__ = [
    "ln_gamma",
    "ln_beta",
    "regularized_incomplete_beta",
    "standard_normal_cdf",
    "standard_normal_quantile",
    "student_t_pdf",
    "student_t_cdf",
    "student_t_sf",
    "student_t_quantile",
    "f_pdf",
    "f_cdf",
    "f_quantile",
]

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 200_000
_NORMAL = NormalDist()


def ln_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``."""
    if isinstance(x, bool):
        raise DomainError("ln_gamma needs a real argument")
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"ln_gamma needs a real argument, got {x!r}") from None
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"ln_gamma is defined here for finite x > 0, got {x!r}")
    return math.lgamma(x)


def ln_beta(a: float, b: float) -> float:
    return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for I_x(a, b).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= _CF_EPS:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )


def _betainc(a: float, b: float, x: float, y: float) -> float:
    """I_x(a, b) given both ``x`` and ``y = 1 - x``.

    Callers pass ``y`` computed without cancellation, which matters in the
    far tails of the t and F distributions.
    """
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log(y) - ln_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, y) / b


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    for name, v in (("a", a), ("b", b)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be a finite positive number, got {v!r}")
    if not (isinstance(x, (int, float)) and 0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    x = float(x)
    return _betainc(float(a), float(b), x, 1.0 - x)


def standard_normal_cdf(z: float) -> float:
    z = _finite(z, "z")
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def standard_normal_quantile(p: float) -> float:
    return _NORMAL.inv_cdf(check_probability(p))


def _finite(v, name: str) -> float:
    if isinstance(v, bool):
        raise DomainError(f"{name} must be a real number")
    try:
        v = float(v)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {v!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


# -- Student t ---------------------------------------------------------------

def _t_log_norm(df: int) -> float:
    return ln_gamma((df + 1) / 2.0) - ln_gamma(df / 2.0) - 0.5 * math.log(df * math.pi)


def student_t_pdf(t: float, df: int) -> float:
    t = _finite(t, "t")
    df = check_dof(df)
    return math.exp(_t_log_norm(df) - (df + 1) / 2.0 * math.log1p(t * t / df))


def _t_upper_tail(t: float, df: int) -> float:
    """P(T > |t|)."""
    t2 = t * t
    if math.isinf(t2):
        return 0.0
    denom = df + t2
    return 0.5 * _betainc(df / 2.0, 0.5, df / denom, t2 / denom)


def student_t_cdf(t: float, df: int) -> float:
    """P(T <= t) for Student's t with ``df`` degrees of freedom."""
    t = _finite(t, "t")
    df = check_dof(df)
    tail = _t_upper_tail(t, df)
    return 1.0 - tail if t > 0 else tail


def student_t_sf(t: float, df: int) -> float:
    t = _finite(t, "t")
    df = check_dof(df)
    tail = _t_upper_tail(t, df)
    return tail if t > 0 else 1.0 - tail


def _solve_decreasing(
    g: Callable[[float], float],
    dg: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float,
) -> float:
    """Root of a decreasing function bracketed by ``g(lo) > 0 >= g(hi)``."""
    x = min(max(x0, lo), hi)
    if not (lo < x < hi):
        x = 0.5 * (lo + hi)
    for _ in range(500):
        gx = g(x)
        if gx == 0.0:
            return x
        if gx > 0.0:
            lo = x
        else:
            hi = x
        slope = dg(x)
        candidate = x - gx / slope if slope != 0.0 else math.nan
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if abs(candidate - x) <= 1e-15 * max(abs(x), 1e-300) or hi - lo <= 1e-15 * hi:
            return candidate
        x = candidate
    return x


def _expand_upper(g: Callable[[float], float], start: float) -> float:
    hi = start
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("could not bracket quantile")
    return hi


def student_t_quantile(p: float, df: int) -> float:
    """The value q with P(T <= q) = p."""
    p = check_probability(p)
    df = check_dof(df)
    if p == 0.5:
        return 0.0
    tail = p if p < 0.5 else 1.0 - p

    def g(t: float) -> float:
        return _t_upper_tail(t, df) - tail

    def dg(t: float) -> float:
        return -student_t_pdf(t, df)

    hi = _expand_upper(g, 1.0)
    guess = -_NORMAL.inv_cdf(tail)
    q = _solve_decreasing(g, dg, 0.0, hi, guess)
    return q if p > 0.5 else -q


# -- F -----------------------------------------------------------------------

def f_pdf(x: float, df1: int, df2: int) -> float:
    x = _finite(x, "x")
    df1 = check_dof(df1, "df1")
    df2 = check_dof(df2, "df2")
    if x < 0:
        raise DomainError(f"F density is defined for x >= 0, got {x!r}")
    if x == 0.0:
        if df1 == 1:
            return math.inf
        return 1.0 if df1 == 2 else 0.0
    a, b = df1 / 2.0, df2 / 2.0
    log_pdf = (
        a * math.log(df1 / df2)
        + (a - 1.0) * math.log(x)
        - (a + b) * math.log1p(df1 * x / df2)
        - ln_beta(a, b)
    )
    return math.exp(log_pdf)


def _f_cdf(x: float, df1: int, df2: int) -> float:
    if x <= 0.0:
        return 0.0
    u = df1 * x
    if math.isinf(u):
        return 1.0
    denom = u + df2
    return _betainc(df1 / 2.0, df2 / 2.0, u / denom, df2 / denom)


def f_cdf(x: float, df1: int, df2: int) -> float:
    """P(F <= x) for the F(df1, df2) distribution."""
    x = _finite(x, "x")
    if x < 0:
        raise DomainError(f"F cdf is defined for x >= 0, got {x!r}")
    return _f_cdf(x, check_dof(df1, "df1"), check_dof(df2, "df2"))


def f_quantile(p: float, df1: int, df2: int) -> float:
    """The value q with P(F <= q) = p."""
    p = check_probability(p)
    df1 = check_dof(df1, "df1")
    df2 = check_dof(df2, "df2")
    if df1 == df2 and p == 0.5:
        return 1.0

    def g(x: float) -> float:
        return p - _f_cdf(x, df1, df2)

    def dg(x: float) -> float:
        return -f_pdf(x, df1, df2)

    hi = _expand_upper(g, 1.0)
    return _solve_decreasing(g, dg, 0.0, hi, 0.5 * hi)
