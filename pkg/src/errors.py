"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to.
"""

from typing import Optional

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class BSeriesError(Exception):
    exit_code: int = EXIT_USAGE


class ParseError(BSeriesError, ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at offset {offset} in {text!r}")


class MixedVariantError(BSeriesError, TypeError):
    """Exact and float scalars (or different radicands) met without promotion."""


class DivisionByZeroError(BSeriesError, ZeroDivisionError):
    pass


class TruncationExceeded(BSeriesError):
    def __init__(self, degree: int, truncation: int):
        self.degree = degree
        self.truncation = truncation
        super().__init__(
            f"tree of degree {degree} exceeds character truncation {truncation}"
        )


class PoleParameter(BSeriesError, ValueError):
    pass


class InvalidTheta(BSeriesError, ValueError):
    pass


class PoleInBracket(BSeriesError, ValueError):
    pass


class FormulaInconsistency(BSeriesError):
    exit_code = EXIT_NUMERICAL


class ImplicitSolveDiverged(BSeriesError, ArithmeticError):
    exit_code = EXIT_NUMERICAL

    def __init__(self, residual: float, iterations: int, step_index: Optional[int] = None):
        self.residual = residual
        self.iterations = iterations
        self.step_index = step_index
        where = "" if step_index is None else f" at step {step_index}"
        super().__init__(
            f"stage iteration did not converge{where}: "
            f"update {residual:.3e} after {iterations} iterations"
        )


class RootFindingFailure(BSeriesError, ArithmeticError):
    exit_code = EXIT_NUMERICAL
