"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FermiSimError(Exception):
    exit_code = 1
    kind = "error"


class ParseError(FermiSimError):
    exit_code = 1
    kind = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ValidationError(FermiSimError, ValueError):
    exit_code = 2
    kind = "validation"


class ShapeError(ValidationError):
    pass


class UsageError(ValidationError):
    """Bad command-line arguments."""
    kind = "usage"


class NumericalIntegrityError(FermiSimError, ArithmeticError):
    exit_code = 3
    kind = "numerical"


class ConsistencyError(NumericalIntegrityError):
    """Two routes that must agree (e.g. canonical vs exponential R) did not."""


class DegenerateDistributionError(NumericalIntegrityError):
    pass


class OracleMismatchError(FermiSimError):
    exit_code = 4
    kind = "oracle-mismatch"
