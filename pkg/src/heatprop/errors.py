"""Exception hierarchy.

Two branches matter for the CLI exit-code contract: DataError (bad input,
exit 3) and NumericalError (solver/regime failures, exit 4).
"""


class HeatpropError(Exception):
    """Base class for all package errors."""


class DataError(HeatpropError):
    """Invalid input data or parameters."""


class NumericalError(HeatpropError):
    """Solver or numerical-regime failure."""


class ConstructionError(DataError):
    """Graph construction rejected the input (zero-degree node, negative weight)."""


class ParamError(DataError):
    """Invalid block-model parameters."""


class InvalidSeedsError(DataError):
    """Seed labels do not span {1..K} or a class has zero seeds."""


class SamplingError(DataError):
    """Seed-sampling rule unsatisfiable or retries exhausted."""


class GenerationError(DataError):
    """Random graph generation produced an unusable graph."""


class EvaluationError(DataError):
    """Mismatched node sets between truth and prediction."""


class EmptySetError(DataError):
    """An operation was asked to aggregate over an empty node set."""


class SingularSystemError(NumericalError):
    """A connected component contains no seed; the Dirichlet problem is undefined."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ConvergenceError(NumericalError):
    """Iteration budget exhausted before reaching tolerance.

    Carries the best iterate and the residual it achieved.
    """

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations


class DegenerateParamsError(NumericalError):
    """Closed-form denominator vanished; parameters outside the analyzed regime."""
