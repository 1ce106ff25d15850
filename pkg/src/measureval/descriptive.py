"""Summary statistics of one measurement run."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .exceptions import DomainError, InsufficientDataError
from .validation import check_run


@dataclass(frozen=True)
class SampleSummary:
    """Count, mean and sample standard deviation of a measurement run.

    ``sd`` is the square root of the unbiased (n - 1 divisor) variance. It
    may be ``None`` for a single measurement, in which case only the mean
    is usable.
    """

    count: int
    mean: float
    sd: Optional[float] = None

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count}")
        if not math.isfinite(self.mean):
            raise DomainError(f"mean must be finite, got {self.mean}")
        if self.sd is not None:
            if self.count < 2:
                raise DomainError("a standard deviation needs at least 2 measurements")
            if not (math.isfinite(self.sd) and self.sd >= 0):
                raise DomainError(f"sd must be finite and >= 0, got {self.sd}")

    @property
    def variance(self) -> float:
        return self.require_sd() ** 2

    def require_sd(self) -> float:
        if self.sd is None:
            raise InsufficientDataError(
                f"the summary of {self.count} measurement(s) carries no standard deviation"
            )
        return self.sd

    def to_dict(self) -> dict:
        return {"count": self.count, "mean": self.mean, "sd": self.sd}


def summarize(run: Iterable[float]) -> SampleSummary:
    """Mean and n - 1 divisor standard deviation, by the two-pass method.

    The one-pass sum-of-squares formula cancels catastrophically when the
    mean is large compared with the spread (21.35 vs 0.01, say), so the
    variance is accumulated from centred values.
    """
    x = check_run(run, min_length=2)
    n = x.size
    values = x.tolist()
    mean = math.fsum(values) / n
    centred = [v - mean for v in values]
    # Correction term absorbs the rounding error left in ``mean``.
    corr = math.fsum(centred)
    ss = math.fsum(c * c for c in centred) - corr * corr / n
    var = max(ss, 0.0) / (n - 1)
    return SampleSummary(count=n, mean=mean, sd=math.sqrt(var))


def summarize_mean_only(run: Iterable[float]) -> SampleSummary:
    x = check_run(run, min_length=1)
    if x.size == 1:
        return SampleSummary(count=1, mean=float(x[0]))
    return summarize(x)


def standard_error(summary: SampleSummary) -> float:
    """Standard deviation of the mean, ``sd / sqrt(count)``."""
    if summary.count < 2:
        raise InsufficientDataError("standard error needs at least 2 measurements")
    return summary.require_sd() / math.sqrt(summary.count)
