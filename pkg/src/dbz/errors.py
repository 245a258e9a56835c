"""Exception hierarchy shared by the numeric modules and the CLI."""


class NumericalError(Exception):
    """Base class for failures of a numerical procedure (CLI exit status 3)."""


class DomainError(NumericalError, ValueError):
    """Argument outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole; ``location`` carries the pole."""

    def __init__(self, location, message=None):
        self.location = location
        super().__init__(message or f"pole at s = {location!r}")


class ParameterError(NumericalError, ValueError):
    """Evaluation parameters that cannot deliver the requested accuracy."""


class ScaledRangeError(NumericalError, OverflowError):
    """Binary exponent of a scaled value left the representable range."""


class ConsistencyError(NumericalError):
    """A value that must be real up to a fixed phase was not."""


class RefinementError(NumericalError):
    """A sign-change bracket could not be refined."""


class ZeroRangeError(NumericalError):
    """Zero enumeration exceeded its height ceiling."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach its error target."""
