"""Shared exception types.

ValueError keeps its usual role for contract violations (bad domains,
imprimitive characters where primitivity is required, and so on). The two
classes here exist because the command-line layer maps them to distinct
exit codes.
"""


class ConfigError(Exception):
    """Malformed or out-of-range run configuration."""


class AccuracyUnattainableError(Exception):
    """The requested evaluation sits outside the supported accuracy envelope."""


class PoleError(ValueError):
    """Evaluation requested at a pole (principal character at s = 1)."""


class ConvergenceError(ValueError):
    """Evaluation requested left of a stream's convergence abscissa."""


class SearchCapError(RuntimeError):
    """A bounded search exhausted its cap without finding a witness."""
