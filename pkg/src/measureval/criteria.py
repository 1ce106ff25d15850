"""Acceptance criteria for a measurement run under test.

Five criteria are available:

* ``REFERENCE_MEAN``: the test mean must fall in an interval built from the
  reference run alone, ``m_R +/- t(1 - alpha/2, N-1) * sqrt(1/N + 1/n) * s_R``.
* ``CLASSICAL``: the true value must fall in the test run's own scaled error
  interval ``m_T +/- a * s_T / sqrt(n)``.
* ``WELCH``: the unequal-variance two-sample t-test with ceiling-rounded
  Welch-Satterthwaite degrees of freedom.
* ``VARIANCE_F``: the variance ratio ``s_T^2 / s_R^2`` against F(n-1, N-1).
* ``COMBINED``: reference mean and variance tests, each at ``alpha / 2``.

All intervals are closed: a statistic on an endpoint is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .descriptive import SampleSummary
from .distributions import f_quantile, student_t_quantile
from .exceptions import DegenerateReferenceError, DomainError, InsufficientDataError
from .validation import check_alpha, check_count, check_finite


class Criterion(str, Enum):
    REFERENCE_MEAN = "mean"
    CLASSICAL = "classical"
    WELCH = "welch"
    VARIANCE_F = "variance"
    COMBINED = "combined"


class TailMode(str, Enum):
    UPPER = "upper"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class AcceptanceInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise DomainError(f"interval lower bound {self.lower} exceeds upper {self.upper}")

    @classmethod
    def centred(cls, center: float, half_width: float) -> "AcceptanceInterval":
        return cls(center - half_width, center + half_width)

    @property
    def center(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.upper - self.lower)

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class Verdict:
    """Outcome of one criterion, with everything needed to audit it.

    ``accepted`` is always ``interval.contains(statistic)``. For the
    variance criterion ``sd_interval`` restates the bounds on the scale of
    the test standard deviation. A combined verdict keeps its constituents
    in ``components``; its statistic is the number of rejecting components
    and its interval is ``[0, 0]``.
    """

    criterion: Criterion
    accepted: bool
    statistic: float
    interval: AcceptanceInterval
    alpha: float
    df: tuple[int, ...]
    critical: tuple[float, ...] = ()
    sd_interval: Optional[AcceptanceInterval] = None
    components: tuple["Verdict", ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {
            "criterion": self.criterion.value,
            "accepted": self.accepted,
            "statistic": self.statistic,
            "interval": self.interval.to_dict(),
            "alpha": self.alpha,
            "df": list(self.df),
            "critical": list(self.critical),
        }
        if self.sd_interval is not None:
            out["sd_interval"] = self.sd_interval.to_dict()
        if self.components:
            out["components"] = [c.to_dict() for c in self.components]
        return out


def _make_verdict(criterion, statistic, interval, alpha, df, critical, **extra) -> Verdict:
    return Verdict(
        criterion=criterion,
        accepted=interval.contains(statistic),
        statistic=statistic,
        interval=interval,
        alpha=alpha,
        df=tuple(df),
        critical=tuple(critical),
        **extra,
    )


def _reference_sd(ref: SampleSummary, allow_zero: bool = False) -> float:
    if ref.count < 2:
        raise InsufficientDataError("the reference run needs at least 2 measurements")
    sd = ref.require_sd()
    if sd == 0.0 and not allow_zero:
        raise DegenerateReferenceError("reference run has zero standard deviation")
    return sd


def reference_t_statistic(ref: SampleSummary, test_mean: float, n: int) -> float:
    """``sqrt(N n / (N + n)) * (m_R - m_T) / s_R``, t-distributed with N - 1 df."""
    s_ref = _reference_sd(ref)
    n = check_count(n, "n")
    test_mean = check_finite(test_mean, "test_mean")
    big_n = ref.count
    return math.sqrt(big_n * n / (big_n + n)) * (ref.mean - test_mean) / s_ref


def reference_critical_value(n_ref: int, alpha: float) -> float:
    return student_t_quantile(1.0 - check_alpha(alpha) / 2.0, n_ref - 1)


def reference_half_width(s_ref: float, n_ref: int, n: int, critical: float) -> float:
    return critical * math.sqrt(1.0 / n_ref + 1.0 / n) * s_ref


def reference_acceptance_interval(
    ref: SampleSummary, n: int, alpha: float
) -> AcceptanceInterval:
    """Acceptance interval for the test mean. Depends on the reference run only."""
    alpha = check_alpha(alpha)
    n = check_count(n, "n")
    s_ref = _reference_sd(ref, allow_zero=True)
    q = reference_critical_value(ref.count, alpha)
    return AcceptanceInterval.centred(ref.mean, reference_half_width(s_ref, ref.count, n, q))


def evaluate_reference_mean(
    ref: SampleSummary, test: SampleSummary, alpha: float
) -> Verdict:
    alpha = check_alpha(alpha)
    _reference_sd(ref)
    interval = reference_acceptance_interval(ref, test.count, alpha)
    q = reference_critical_value(ref.count, alpha)
    return _make_verdict(
        Criterion.REFERENCE_MEAN, test.mean, interval, alpha, (ref.count - 1,), (q,)
    )


def scale_factor_for_alpha(alpha: float, n: int) -> float:
    """Multiplier ``a`` with P(|t_m| <= a) = 1 - alpha, t_m having n - 1 df."""
    alpha = check_alpha(alpha)
    n = check_count(n, "n", minimum=2)
    return student_t_quantile(1.0 - alpha / 2.0, n - 1)


def classical_error_interval_criterion(
    test: SampleSummary, mu_true: float, alpha: float
) -> Verdict:
    """Accept when ``mu_true`` lies in ``m_T +/- a * s_m``."""
    alpha = check_alpha(alpha)
    mu_true = check_finite(mu_true, "mu_true")
    if test.count < 2:
        raise InsufficientDataError("the classical criterion needs at least 2 test measurements")
    a = scale_factor_for_alpha(alpha, test.count)
    s_m = test.require_sd() / math.sqrt(test.count)
    interval = AcceptanceInterval.centred(test.mean, a * s_m)
    return _make_verdict(Criterion.CLASSICAL, mu_true, interval, alpha, (test.count - 1,), (a,))


def welch_degrees_of_freedom(ref: SampleSummary, test: SampleSummary) -> float:
    """Welch-Satterthwaite degrees of freedom, before rounding."""
    vr = ref.variance / ref.count
    vt = test.variance / test.count
    return (vr + vt) ** 2 / (vr * vr / (ref.count - 1) + vt * vt / (test.count - 1))


def welch_t_test(ref: SampleSummary, test: SampleSummary, alpha: float) -> Verdict:
    alpha = check_alpha(alpha)
    if ref.count < 2 or test.count < 2:
        raise InsufficientDataError("the Welch test needs at least 2 measurements per run")
    if ref.require_sd() == 0.0 and test.require_sd() == 0.0:
        raise DegenerateReferenceError("both runs have zero standard deviation")
    t = (ref.mean - test.mean) / math.sqrt(ref.variance / ref.count + test.variance / test.count)
    df = math.ceil(welch_degrees_of_freedom(ref, test))
    q = student_t_quantile(1.0 - alpha / 2.0, df)
    return _make_verdict(
        Criterion.WELCH, t, AcceptanceInterval(-q, q), alpha, (df,), (q,)
    )


def variance_bounds(n_ref: int, n: int, alpha: float, tail: TailMode) -> tuple[float, float]:
    """Acceptance bounds for ``s_T^2 / s_R^2``."""
    tail = TailMode(tail)
    if tail is TailMode.UPPER:
        return 0.0, f_quantile(1.0 - alpha, n - 1, n_ref - 1)
    return (
        f_quantile(alpha / 2.0, n - 1, n_ref - 1),
        f_quantile(1.0 - alpha / 2.0, n - 1, n_ref - 1),
    )


def variance_f_criterion(
    ref: SampleSummary,
    test: SampleSummary,
    alpha: float,
    tail: TailMode = TailMode.UPPER,
) -> Verdict:
    """Variance-ratio test of the run under test against the reference run.

    In ``UPPER`` mode only an inflated variance is rejected. ``TWO_SIDED``
    also rejects a suspiciously small one, e.g. when readings are
    systematically rounded to the same value.
    """
    alpha = check_alpha(alpha)
    tail = TailMode(tail)
    s_ref = _reference_sd(ref)
    if test.count < 2:
        raise InsufficientDataError("the variance test needs at least 2 test measurements")
    ratio = test.variance / ref.variance
    lo, hi = variance_bounds(ref.count, test.count, alpha, tail)
    critical = (hi,) if tail is TailMode.UPPER else (lo, hi)
    return _make_verdict(
        Criterion.VARIANCE_F,
        ratio,
        AcceptanceInterval(lo, hi),
        alpha,
        (test.count - 1, ref.count - 1),
        critical,
        sd_interval=AcceptanceInterval(s_ref * math.sqrt(lo), s_ref * math.sqrt(hi)),
    )


def combined_criterion(
    ref: SampleSummary,
    test: SampleSummary,
    alpha: float,
    tail: TailMode = TailMode.UPPER,
) -> Verdict:
    """Mean and variance tests at ``alpha / 2`` each (Bonferroni)."""
    alpha = check_alpha(alpha)
    mean_v = evaluate_reference_mean(ref, test, alpha / 2.0)
    var_v = variance_f_criterion(ref, test, alpha / 2.0, tail)
    rejections = float((not mean_v.accepted) + (not var_v.accepted))
    return _make_verdict(
        Criterion.COMBINED,
        rejections,
        AcceptanceInterval(0.0, 0.0),
        alpha,
        mean_v.df + var_v.df,
        mean_v.critical + var_v.critical,
        components=(mean_v, var_v),
    )


def evaluate(
    criterion: Criterion,
    ref: Optional[SampleSummary],
    test: SampleSummary,
    alpha: float,
    tail: TailMode = TailMode.UPPER,
    mu_true: Optional[float] = None,
) -> Verdict:
    """Dispatch to one criterion by selector."""
    criterion = Criterion(criterion)
    if criterion is Criterion.CLASSICAL:
        if mu_true is None:
            raise DomainError("the classical criterion needs the true value mu_true")
        return classical_error_interval_criterion(test, mu_true, alpha)
    if ref is None:
        raise DomainError(f"criterion {criterion.value!r} needs a reference run")
    if criterion is Criterion.REFERENCE_MEAN:
        return evaluate_reference_mean(ref, test, alpha)
    if criterion is Criterion.WELCH:
        return welch_t_test(ref, test, alpha)
    if criterion is Criterion.VARIANCE_F:
        return variance_f_criterion(ref, test, alpha, tail)
    return combined_criterion(ref, test, alpha, tail)
