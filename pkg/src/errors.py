"""Exception hierarchy; every error carries the CLI exit code it maps to."""
from typing import Any, Optional


class NonharmonicError(Exception):
    """Base class for toolkit errors."""
    exit_code: int = 1


class ConfigError(NonharmonicError, ValueError):
    """Experiment configuration could not be parsed or validated."""
    exit_code = 2


class ParseError(NonharmonicError, ValueError):
    """An input file or shorthand string is malformed."""
    exit_code = 2


class AliasingError(NonharmonicError, ValueError):
    """Grid too coarse for the requested truncation."""
    exit_code = 4


class ResolutionError(NonharmonicError):
    """Oversampling or grid-doubling convergence check failed."""
    exit_code = 4


class InadmissibleDatumError(NonharmonicError, ValueError):
    """Right-hand side is not admissible for the symbol (nonzero on its zero set)."""
    exit_code = 3

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class GrowthGuardError(NonharmonicError):
    """Solution coefficients exceeded the configured polynomial growth guard."""
    exit_code = 1

    def __init__(self, message: str, witness: Optional[tuple] = None):
        super().__init__(message)
        self.witness = witness


class InvariantFailure(NonharmonicError):
    """A validation check exceeded its tolerance."""
    exit_code = 1
