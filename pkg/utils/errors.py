"""
Exception types shared by the services, the JSON API and the CLI.

Each error carries the process exit code the CLI maps it to.
"""


class RangeEqError(Exception):
    exit_code = 3
    http_status = 400


class ConfigurationError(RangeEqError):
    """Scenario file or command-line options are invalid."""
    exit_code = 1


class DomainError(RangeEqError, ValueError):
    """Inputs outside the model's domain (bad parameters, degenerate range, non-finite values)."""
    exit_code = 1


class OutOfImageError(DomainError):
    """A price that J cannot produce: outside the open disclosed range."""


class BracketError(RangeEqError):
    """A search bracket does not contain the optimum or the root."""
    http_status = 422


class NumericalFailure(RangeEqError):
    http_status = 422
