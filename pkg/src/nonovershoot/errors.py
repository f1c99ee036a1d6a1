"""Exception types shared across the package.

The CLI maps these onto exit codes: numerical failures exit 2, usage and
config problems exit 3, statistical FAILs exit 1 (those are reported, not
raised).
"""


class NoRootError(ValueError):
    """Calibration target cannot be reached; carries the bracket tried."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class UnboundedError(ValueError):
    """No finite tilt rate below the search cap."""


class ExhaustedError(ValueError):
    """Time change asked for a point beyond the finite skeleton's support."""


class BudgetExceeded(RuntimeError):
    """A replica hit its step cap before finishing."""


class AttemptsExhausted(RuntimeError):
    """Rejection sampler ran out of attempts; carries the observed rate."""

    def __init__(self, message, acceptance_rate=None):
        super().__init__(message)
        self.acceptance_rate = acceptance_rate


class DegenerateWeights(ValueError):
    """All importance weights vanished (guards 0/0)."""


class LatticeMisaligned(ValueError):
    """A level not on the lattice was requested for a lattice model."""


class OutOfRange(ValueError):
    """Argument outside the domain of a closed-form bound."""


class ConfigError(ValueError):
    """Malformed config file; carries the offending line number."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no
