"""Exception hierarchy. Everything derives from ValueError so callers that
only care about "bad input" can catch that."""


class MeasurevalError(ValueError):
    pass


class DomainError(MeasurevalError):
    """An argument lies outside the mathematical domain of the operation."""


class DataError(MeasurevalError):
    """Measurement data contain non-finite or unparseable values."""


class InsufficientDataError(MeasurevalError):
    """Too few measurements for the requested statistic."""


class DegenerateReferenceError(MeasurevalError):
    """The reference run has zero spread, so the reference statistic is undefined."""


class SimulationError(MeasurevalError):
    """A Monte Carlo replication could not be evaluated."""

    def __init__(self, message, replication=None):
        super().__init__(message)
        self.replication = replication
