"""Reference-based quality assessment of measurement processes."""

__version__ = "0.1.0"

from .criteria import (
    AcceptanceInterval,
    Criterion,
    TailMode,
    Verdict,
    classical_error_interval_criterion,
    combined_criterion,
    evaluate,
    evaluate_reference_mean,
    reference_acceptance_interval,
    reference_t_statistic,
    scale_factor_for_alpha,
    variance_f_criterion,
    welch_t_test,
)
from .descriptive import SampleSummary, standard_error, summarize
from .estimators import (
    ClassicalErrorIntervalTest,
    CombinedTest,
    ReferenceMeanTest,
    VarianceFTest,
    WelchTest,
)
from .exceptions import (
    DataError,
    DegenerateReferenceError,
    DomainError,
    InsufficientDataError,
    MeasurevalError,
    SimulationError,
)
from .simulation import (
    ReferenceMode,
    RejectionEstimate,
    SeededGenerator,
    SimulationConfig,
    empirical_statistic_distribution,
    estimate_rejection_ratio,
    sample_normal,
    table_configs,
    wilson_interval,
)
