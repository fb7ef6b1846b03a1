"""
Exception hierarchy
Every error carries the process exit code the command-line front end uses.
"""


class TraceNormError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 1


class InputError(TraceNormError, ValueError):
    """Bad vertex, missing arc, malformed sequence, guard exceeded, usage error"""
    exit_code = 2


class DigraphParseError(InputError):
    """Digraph text that does not follow the `n m` / `u v` format"""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DomainError(TraceNormError, ValueError):
    """Alpha outside [0, 1) or a non-symmetric eigensolver input"""
    exit_code = 2


class NumericalError(TraceNormError, ArithmeticError):
    """Eigensolver failed to converge or produced an indefinite Gram matrix"""
    exit_code = 3
