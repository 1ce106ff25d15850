"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import math
import numbers
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DataError, DomainError, InsufficientDataError


def check_alpha(alpha) -> float:
    """Return ``alpha`` as a float, requiring ``0 < alpha < 1``."""
    try:
        value = float(alpha)
    except (TypeError, ValueError):
        raise DomainError(f"alpha must be a number, got {alpha!r}") from None
    if not (0.0 < value < 1.0):
        raise DomainError(f"alpha must lie strictly between 0 and 1, got {alpha!r}")
    return value


def check_probability(p, *, open_interval: bool = True) -> float:
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"probability must be a number, got {p!r}") from None
    if open_interval:
        if not (0.0 < value < 1.0):
            raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    elif not (0.0 <= value <= 1.0):
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    return value


def check_dof(df, name: str = "df") -> int:
    """Degrees of freedom are positive integers. Integral floats are accepted."""
    if isinstance(df, bool):
        raise DomainError(f"{name} must be a positive integer, got {df!r}")
    if isinstance(df, numbers.Integral):
        value = int(df)
    elif isinstance(df, numbers.Real) and math.isfinite(df) and float(df).is_integer():
        value = int(df)
    else:
        raise DomainError(f"{name} must be a positive integer, got {df!r}")
    if value < 1:
        raise DomainError(f"{name} must be >= 1, got {df!r}")
    return value


def check_count(n, name: str = "n", minimum: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n!r}")
    return int(n)


def check_finite(x, name: str = "x") -> float:
    try:
        value = float(x)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {x!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return value


def check_run(values: Iterable[float], min_length: int = 2) -> np.ndarray:
    """Validate one measurement run and return it as a 1-D float array."""
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=float)
    if arr.ndim != 1:
        raise DataError(f"a measurement run must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise DataError(f"measurement {bad} is not finite ({arr[bad]!r})")
    if arr.size < min_length:
        raise InsufficientDataError(
            f"need at least {min_length} measurements, got {arr.size}"
        )
    return arr


def as_runs(X, min_length: int = 2) -> list[np.ndarray]:
    """Split estimator input into validated runs.

    A 2-D array is read row-wise (one run per row). A sequence of sequences
    may be ragged, so runs of different lengths can be evaluated together.
    """
    if isinstance(X, np.ndarray):
        if X.ndim == 1:
            return [check_run(X, min_length)]
        if X.ndim != 2:
            raise DataError(f"expected a 2-D array of runs, got shape {X.shape}")
        return [check_run(row, min_length) for row in X]
    if not isinstance(X, Sequence) or len(X) == 0:
        raise DataError("expected a non-empty sequence of measurement runs")
    if all(isinstance(v, numbers.Real) for v in X):
        return [check_run(X, min_length)]
    return [check_run(run, min_length) for run in X]
