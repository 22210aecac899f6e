"""Exception hierarchy for cifboot.

The CLI maps these onto exit codes: input problems exit with 2,
statistical inadmissibility exits with 3.
"""


class CifbootError(Exception):
    """Base class for all cifboot errors."""


class DataValidationError(CifbootError, ValueError):
    """Input data is malformed or violates the observation model.

    Attributes:
        line: 1-based line number in the source file, if known
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InadmissibleIntervalError(CifbootError, ValueError):
    """The requested time interval does not support the requested inference."""


class CalibrationError(CifbootError, ValueError):
    """No constant-hazard model reproduces the requested event mix."""
