"""Seeded Monte Carlo estimation of rejection ratios.

Replications are grouped in fixed-size blocks. Block ``b`` draws all of its
variates from its own Philox substream keyed on ``(seed, b + 1)``, so the
result depends only on the configuration and never on how blocks are spread
over worker threads. Counts are summed and turned into a point estimate and
a 95% Wilson score interval.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from enum import Enum
from statistics import NormalDist
from typing import Optional

import numpy as np

from .criteria import (
    Criterion,
    TailMode,
    reference_critical_value,
    scale_factor_for_alpha,
    variance_bounds,
)
from .distributions import student_t_quantile
from .exceptions import DomainError, SimulationError
from .validation import check_alpha, check_count

BLOCK_SIZE = 1 << 14
THREADS_ENV = "MEASUREVAL_THREADS"
_FIXED_REFERENCE_STREAM = 0


class ReferenceMode(str, Enum):
    FRESH = "fresh"
    FIXED = "fixed"


class SeededGenerator:
    """Normal variates from a counter-based stream identified by (seed, stream)."""

    def __init__(self, seed: int, stream: int = 0):
        if not (0 <= seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self._rng = np.random.Generator(np.random.Philox(ss))

    def standard_normal(self, shape) -> np.ndarray:
        return self._rng.standard_normal(shape)

    def __repr__(self):
        return f"SeededGenerator(seed={self.seed}, stream={self.stream})"


def sample_normal(gen: SeededGenerator, mu: float, sigma: float, count: int) -> np.ndarray:
    """``count`` independent draws from N(mu, sigma^2)."""
    count = check_count(count, "count")
    if not sigma >= 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return np.full(count, float(mu))
    return mu + sigma * gen.standard_normal(count)


@dataclass(frozen=True)
class SimulationConfig:
    mu_test: float = 21.35
    sigma_test: float = 0.01
    alpha: float = 0.05
    criterion: Criterion = Criterion.REFERENCE_MEAN
    tail: TailMode = TailMode.UPPER
    mu_ref: float = 21.35
    sigma_ref: float = 0.01
    n_ref: int = 10
    n_test: int = 3
    replications: int = 1_000_000
    seed: int = 0
    reference_mode: ReferenceMode = ReferenceMode.FRESH

    def __post_init__(self):
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        object.__setattr__(self, "tail", TailMode(self.tail))
        object.__setattr__(self, "reference_mode", ReferenceMode(self.reference_mode))
        check_alpha(self.alpha)
        if not (self.sigma_ref > 0 and self.sigma_test > 0):
            raise DomainError("sigma_ref and sigma_test must be positive")
        for name in ("mu_ref", "mu_test", "sigma_ref", "sigma_test"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        check_count(self.replications, "replications")
        check_count(self.n_ref, "n_ref", minimum=2)
        min_test = 1 if self.criterion is Criterion.REFERENCE_MEAN else 2
        check_count(self.n_test, "n_test", minimum=min_test)
        if not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("criterion", "tail", "reference_mode"):
            d[key] = d[key].value
        return d


@dataclass(frozen=True)
class RejectionEstimate:
    point: float
    lower: float
    upper: float
    rejections: int
    replications: int

    def to_dict(self) -> dict:
        return asdict(self)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not (0 <= successes <= trials):
        raise DomainError(f"need 0 <= successes <= trials, trials >= 1 (got {successes}/{trials})")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = successes / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    center = (p + z2n / 2.0) / denom
    margin = z / denom * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials))
    lower = min(max(0.0, center - margin), p)
    upper = max(min(1.0, center + margin), p)
    return lower, upper


def row_summaries(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise mean and n - 1 divisor standard deviation (two-pass)."""
    mean = x.mean(axis=1)
    if x.shape[1] < 2:
        return mean, np.full(x.shape[0], np.nan)
    dev = x - mean[:, None]
    sd = np.sqrt(np.einsum("ij,ij->i", dev, dev) / (x.shape[1] - 1))
    return mean, sd


class _Decider:
    """Vectorised accept/reject for one configuration.

    Performs the same floating-point operations, in the same order, as the
    scalar functions in :mod:`measureval.criteria`, so verdicts agree
    exactly when both are handed the same summaries.
    """

    def __init__(self, config: SimulationConfig):
        self.config = config
        c = config
        self.mean_q = reference_critical_value(c.n_ref, c.alpha)
        self.mean_q_half = reference_critical_value(c.n_ref, c.alpha / 2.0)
        if c.criterion is Criterion.CLASSICAL:
            self.scale = scale_factor_for_alpha(c.alpha, c.n_test)
        if c.criterion is Criterion.VARIANCE_F:
            self.var_bounds = variance_bounds(c.n_ref, c.n_test, c.alpha, c.tail)
        if c.criterion is Criterion.COMBINED:
            self.var_bounds_half = variance_bounds(c.n_ref, c.n_test, c.alpha / 2.0, c.tail)
        self._welch_q: dict[int, float] = {}

    def _mean_accept(self, m_r, s_r, m_t, q):
        c = self.config
        h = q * math.sqrt(1.0 / c.n_ref + 1.0 / c.n_test) * s_r
        return (m_r - h <= m_t) & (m_t <= m_r + h)

    def _variance_accept(self, s_r, s_t, bounds):
        ratio = s_t**2 / s_r**2
        return (bounds[0] <= ratio) & (ratio <= bounds[1])

    def _welch_accept(self, m_r, s_r, m_t, s_t):
        c = self.config
        vr = s_r**2 / c.n_ref
        vt = s_t**2 / c.n_test
        t = (m_r - m_t) / np.sqrt(vr + vt)
        df = np.ceil((vr + vt) ** 2 / (vr * vr / (c.n_ref - 1) + vt * vt / (c.n_test - 1)))
        df = df.astype(np.int64)
        q = np.empty(t.shape)
        for d in np.unique(df):
            d = int(d)
            if d not in self._welch_q:
                self._welch_q[d] = student_t_quantile(1.0 - c.alpha / 2.0, d)
            q[df == d] = self._welch_q[d]
        return (-q <= t) & (t <= q)

    def accept(self, m_r, s_r, m_t, s_t) -> np.ndarray:
        c = self.config
        crit = c.criterion
        if crit is Criterion.REFERENCE_MEAN:
            return self._mean_accept(m_r, s_r, m_t, self.mean_q)
        if crit is Criterion.CLASSICAL:
            half = self.scale * (s_t / math.sqrt(c.n_test))
            return (m_t - half <= c.mu_ref) & (c.mu_ref <= m_t + half)
        if crit is Criterion.WELCH:
            return self._welch_accept(m_r, s_r, m_t, s_t)
        if crit is Criterion.VARIANCE_F:
            return self._variance_accept(s_r, s_t, self.var_bounds)
        return self._mean_accept(m_r, s_r, m_t, self.mean_q_half) & self._variance_accept(
            s_r, s_t, self.var_bounds_half
        )

    def check(self, start: int, s_r, s_t) -> None:
        crit = self.config.criterion
        if crit is Criterion.CLASSICAL:
            return
        if crit is Criterion.WELCH:
            bad = (s_r == 0) & (s_t == 0)
        else:
            bad = s_r == 0
        if np.any(bad):
            idx = start + int(np.flatnonzero(bad)[0])
            raise SimulationError(
                f"replication {idx}: degenerate run (zero standard deviation)", replication=idx
            )


def _block_bounds(replications: int) -> list[tuple[int, int]]:
    return [
        (start, min(start + BLOCK_SIZE, replications))
        for start in range(0, replications, BLOCK_SIZE)
    ]


def _fixed_reference(config: SimulationConfig) -> tuple[float, float]:
    gen = SeededGenerator(config.seed, _FIXED_REFERENCE_STREAM)
    ref = sample_normal(gen, config.mu_ref, config.sigma_ref, config.n_ref)
    m, s = row_summaries(ref[None, :])
    return float(m[0]), float(s[0])


def _draw_block(config: SimulationConfig, block: int, size: int, fixed_ref):
    gen = SeededGenerator(config.seed, block + 1)
    if fixed_ref is None:
        ref = config.mu_ref + config.sigma_ref * gen.standard_normal((size, config.n_ref))
        m_r, s_r = row_summaries(ref)
    else:
        m_r = np.full(size, fixed_ref[0])
        s_r = np.full(size, fixed_ref[1])
    test = config.mu_test + config.sigma_test * gen.standard_normal((size, config.n_test))
    m_t, s_t = row_summaries(test)
    return m_r, s_r, m_t, s_t


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        else:
            threads = os.cpu_count() or 1
    return max(1, int(threads))


def _run_blocks(fn, replications: int, threads: Optional[int]):
    bounds = _block_bounds(replications)
    jobs = [(b, start, stop) for b, (start, stop) in enumerate(bounds)]
    workers = min(resolve_threads(threads), len(jobs))
    if workers == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def estimate_rejection_ratio(
    config: SimulationConfig, threads: Optional[int] = None
) -> RejectionEstimate:
    """Fraction of simulated experiments in which the criterion rejects.

    Each replication draws a reference run from N(mu_ref, sigma_ref^2)
    (once for the whole study in ``FIXED`` mode) and a test run from
    N(mu_test, sigma_test^2), then applies ``config.criterion``.
    """
    decider = _Decider(config)
    fixed = _fixed_reference(config) if config.reference_mode is ReferenceMode.FIXED else None
    if fixed is not None:
        decider.check(0, np.array([fixed[1]]), np.array([1.0]))

    def run(block: int, start: int, stop: int) -> int:
        m_r, s_r, m_t, s_t = _draw_block(config, block, stop - start, fixed)
        decider.check(start, s_r, s_t)
        return int(np.count_nonzero(~decider.accept(m_r, s_r, m_t, s_t)))

    rejections = sum(_run_blocks(run, config.replications, threads))
    lower, upper = wilson_interval(rejections, config.replications)
    return RejectionEstimate(
        point=rejections / config.replications,
        lower=lower,
        upper=upper,
        rejections=rejections,
        replications=config.replications,
    )


def empirical_statistic_distribution(
    config: SimulationConfig, reps: int, threads: Optional[int] = None
) -> np.ndarray:
    """Simulated values of the reference t statistic under the null hypothesis.

    Under a correct test process, ``sqrt(N n/(N+n)) (m_R - m_T) / s_R``
    follows Student's t with N - 1 degrees of freedom; the returned sample
    is meant for goodness-of-fit checks of that claim.
    """
    reps = check_count(reps, "reps")
    if config.mu_test != config.mu_ref or config.sigma_test != config.sigma_ref:
        raise DomainError("the null distribution needs mu_test == mu_ref and sigma_test == sigma_ref")
    config = replace(config, replications=reps)
    fixed = _fixed_reference(config) if config.reference_mode is ReferenceMode.FIXED else None
    factor = math.sqrt(config.n_ref * config.n_test / (config.n_ref + config.n_test))

    def run(block: int, start: int, stop: int) -> np.ndarray:
        m_r, s_r, m_t, _ = _draw_block(config, block, stop - start, fixed)
        if np.any(s_r == 0):
            idx = start + int(np.flatnonzero(s_r == 0)[0])
            raise SimulationError(f"replication {idx}: zero reference spread", replication=idx)
        return factor * (m_r - m_t) / s_r

    return np.concatenate(_run_blocks(run, reps, threads))


# Parameter grids of the three published tables: (mu_test, sigma_test, alpha).
PAPER_TABLES: dict[int, tuple[Criterion, list[tuple[float, float, float]]]] = {
    1: (
        Criterion.REFERENCE_MEAN,
        [
            (mu, sd, a)
            for mu, sd in ((21.35, 0.01), (21.37, 0.01), (21.35, 0.02))
            for a in (0.001, 0.010, 0.050)
        ],
    ),
    2: (
        Criterion.CLASSICAL,
        [(21.35, 0.01, 0.010), (21.37, 0.01, 0.010), (21.35, 0.02, 0.010)],
    ),
    3: (
        Criterion.WELCH,
        [(21.35, 0.01, 0.001), (21.35, 0.01, 0.010), (21.35, 0.01, 0.050)],
    ),
}


def table_configs(table: int, seed: int = 0, replications: int = 1_000_000) -> list[SimulationConfig]:
    """Configurations reproducing one of the published tables.

    All rows share ``seed``; reference parameters are mu=21.35, sigma=0.01,
    N=10 and n=3.
    """
    if table not in PAPER_TABLES:
        raise DomainError(f"unknown table {table!r}; choose 1, 2 or 3")
    criterion, rows = PAPER_TABLES[table]
    return [
        SimulationConfig(
            mu_test=mu, sigma_test=sd, alpha=a, criterion=criterion,
            replications=replications, seed=seed,
        )
        for mu, sd, a in rows
    ]
