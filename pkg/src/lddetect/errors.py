"""Exception hierarchy shared across the package.

Two broad families matter to callers (and to the CLI's exit codes):
``InputError`` for invalid inputs or violated preconditions, and
``ComputeError`` for failures that arise during computation.
"""


class DetectError(Exception):
    """Base class for all lddetect errors."""


class InputError(DetectError):
    """Invalid input data or violated precondition (CLI exit code 1)."""


class DegenerateInputError(InputError):
    """Input carries no usable signal (e.g. a text with no letters)."""


class ComputeError(DetectError):
    """Numeric or runtime failure during computation (CLI exit code 2)."""


class ConvergenceError(ComputeError):
    """Optimizer hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, kkt_residual: float):
        super().__init__(message)
        self.kkt_residual = kkt_residual
