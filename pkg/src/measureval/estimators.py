"""scikit-learn style wrappers around the criteria.

``fit`` learns the reference run, ``predict`` returns one accept flag per
run under test. Because the reference-mean interval depends only on the
reference run and n, one fitted estimator can judge any number of runs::

    test = ReferenceMeanTest(alpha=0.01).fit(technician_values)
    test.predict([[21.36, 21.35, 21.37], [21.40, 21.41, 21.39]])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import criteria
from .criteria import AcceptanceInterval, TailMode, Verdict
from .descriptive import SampleSummary, summarize, summarize_mean_only
from .validation import as_runs, check_alpha, check_finite, check_run


class _ReferenceCriterion(BaseEstimator):
    _min_test_length = 2

    def fit(self, X, y=None):
        """Summarize the reference run ``X`` (1-D, at least 2 values)."""
        check_alpha(self.alpha)
        self.reference_ = summarize(check_run(np.ravel(np.asarray(X, dtype=float))))
        self.n_reference_ = self.reference_.count
        return self

    def _summarize_test(self, run) -> SampleSummary:
        if self._min_test_length == 1:
            return summarize_mean_only(run)
        return summarize(run)

    def _verdict(self, test: SampleSummary) -> Verdict:
        raise NotImplementedError

    def evaluate(self, run) -> Verdict:
        check_is_fitted(self, "reference_")
        return self._verdict(self._summarize_test(check_run(run, self._min_test_length)))

    def evaluate_many(self, X) -> list[Verdict]:
        check_is_fitted(self, "reference_")
        return [self._verdict(self._summarize_test(r)) for r in as_runs(X, self._min_test_length)]

    def predict(self, X) -> np.ndarray:
        """Boolean array, True where the run is accepted."""
        return np.array([v.accepted for v in self.evaluate_many(X)], dtype=bool)

    def decision_function(self, X) -> np.ndarray:
        """The tested statistic of each run."""
        return np.array([v.statistic for v in self.evaluate_many(X)], dtype=float)


class ReferenceMeanTest(_ReferenceCriterion):
    """Accept a run when its mean lies in the reference acceptance interval."""

    _min_test_length = 1

    def __init__(self, alpha: float = 0.05):
        self.alpha = alpha

    def acceptance_interval(self, n: int) -> AcceptanceInterval:
        check_is_fitted(self, "reference_")
        return criteria.reference_acceptance_interval(self.reference_, n, self.alpha)

    def _verdict(self, test):
        return criteria.evaluate_reference_mean(self.reference_, test, self.alpha)


class WelchTest(_ReferenceCriterion):
    def __init__(self, alpha: float = 0.05):
        self.alpha = alpha

    def _verdict(self, test):
        return criteria.welch_t_test(self.reference_, test, self.alpha)


class VarianceFTest(_ReferenceCriterion):
    def __init__(self, alpha: float = 0.05, tail: str = "upper"):
        self.alpha = alpha
        self.tail = tail

    def _verdict(self, test):
        return criteria.variance_f_criterion(self.reference_, test, self.alpha, TailMode(self.tail))


class CombinedTest(_ReferenceCriterion):
    """Mean and variance tests at half the significance level each."""

    def __init__(self, alpha: float = 0.05, tail: str = "upper"):
        self.alpha = alpha
        self.tail = tail

    def _verdict(self, test):
        return criteria.combined_criterion(self.reference_, test, self.alpha, TailMode(self.tail))


class ClassicalErrorIntervalTest(BaseEstimator):
    """Scaled error interval check against a known true value.

    Needs no reference run; ``fit`` only validates parameters and exists
    so the estimator composes with pipelines and model-selection tools.
    """

    def __init__(self, mu_true: float = 0.0, alpha: float = 0.05):
        self.mu_true = mu_true
        self.alpha = alpha

    def fit(self, X=None, y=None):
        check_alpha(self.alpha)
        self.mu_true_ = check_finite(self.mu_true, "mu_true")
        return self

    def evaluate(self, run) -> Verdict:
        return criteria.classical_error_interval_criterion(
            summarize(check_run(run)), self.mu_true, self.alpha
        )

    def evaluate_many(self, X) -> list[Verdict]:
        return [
            criteria.classical_error_interval_criterion(summarize(r), self.mu_true, self.alpha)
            for r in as_runs(X)
        ]

    def predict(self, X) -> np.ndarray:
        return np.array([v.accepted for v in self.evaluate_many(X)], dtype=bool)
