import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from measureval import criteria
from measureval.descriptive import summarize
from measureval.estimators import (
    ClassicalErrorIntervalTest,
    CombinedTest,
    ReferenceMeanTest,
    VarianceFTest,
    WelchTest,
)
from measureval.exceptions import DataError, DomainError, InsufficientDataError

REFERENCE = 21.35 + 0.01 * np.random.default_rng(0).standard_normal(10)


def test_params_roundtrip():
    est = VarianceFTest(alpha=0.01, tail="two-sided")
    assert est.get_params() == {"alpha": 0.01, "tail": "two-sided"}
    est.set_params(alpha=0.2)
    assert est.alpha == 0.2
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_fit_learns_reference():
    est = ReferenceMeanTest(alpha=0.05).fit(REFERENCE)
    assert est.reference_ == summarize(REFERENCE)
    assert est.n_reference_ == 10


def test_predict_rows_and_ragged_runs():
    est = ReferenceMeanTest(alpha=0.05).fit(REFERENCE)
    m = est.reference_.mean
    X = np.array([[m, m, m], [m + 0.05, m + 0.05, m + 0.05]])
    assert est.predict(X).tolist() == [True, False]
    assert est.predict([[m], [m, m + 0.001, m - 0.001, m], [m + 1.0] * 2]).tolist() == [True, True, False]


def test_matches_functional_api():
    rng = np.random.default_rng(4)
    runs = 21.35 + 0.015 * rng.standard_normal((50, 3))
    ref = summarize(REFERENCE)
    for est, fn in [
        (ReferenceMeanTest(0.05), lambda t: criteria.evaluate_reference_mean(ref, t, 0.05)),
        (WelchTest(0.05), lambda t: criteria.welch_t_test(ref, t, 0.05)),
        (VarianceFTest(0.05, "two-sided"), lambda t: criteria.variance_f_criterion(ref, t, 0.05, "two-sided")),
        (CombinedTest(0.05), lambda t: criteria.combined_criterion(ref, t, 0.05)),
    ]:
        est.fit(REFERENCE)
        expected = [fn(summarize(r)).accepted for r in runs]
        assert est.predict(runs).tolist() == expected
        assert est.decision_function(runs).tolist() == [fn(summarize(r)).statistic for r in runs]


def test_interval_computed_from_reference_only():
    est = ReferenceMeanTest(alpha=0.01).fit(REFERENCE)
    iv = est.acceptance_interval(3)
    assert iv == criteria.reference_acceptance_interval(summarize(REFERENCE), 3, 0.01)
    v = est.evaluate([21.0, 21.1, 21.2])
    assert v.interval == iv


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ReferenceMeanTest().predict([[21.35, 21.35]])


def test_invalid_inputs():
    with pytest.raises(DomainError):
        ReferenceMeanTest(alpha=1.2).fit(REFERENCE)
    with pytest.raises(InsufficientDataError):
        ReferenceMeanTest().fit([21.35])
    with pytest.raises(DataError):
        ReferenceMeanTest().fit([21.35, np.nan])
    with pytest.raises(InsufficientDataError):
        WelchTest().fit(REFERENCE).predict([[21.35]])


def test_classical_needs_no_reference():
    est = ClassicalErrorIntervalTest(mu_true=21.35, alpha=0.01)
    assert est.fit() is est
    out = est.predict([[21.36, 21.35, 21.37], [30.0, 30.0001, 30.0002]])
    assert out.tolist() == [True, False]
    assert est.evaluate([21.36, 21.35, 21.37]).criterion is criteria.Criterion.CLASSICAL
