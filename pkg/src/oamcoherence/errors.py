"""Exception hierarchy.

Everything raised on purpose by this package derives from ``OamError`` so
callers (and the CLI) can separate configuration problems from numerical ones.
"""


class OamError(Exception):
    """Base class for all package errors."""


class ConfigError(OamError, ValueError):
    """Invalid user configuration. ``field`` names the offending key."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalFailure(OamError):
    """Base for errors that signal a numerical or physicality problem."""


class DimensionMismatch(NumericalFailure, ValueError):
    pass


class NonPhysicalCovariance(NumericalFailure, ValueError):
    pass


class DomainError(NumericalFailure, ValueError):
    pass


class NumericalError(NumericalFailure, ArithmeticError):
    pass


class UnphysicalSource(NumericalFailure, ValueError):
    pass


class NotEntangledAtUnity(NumericalFailure, ValueError):
    pass


class DuplicateCharge(OamError, ValueError):
    pass


class DegenerateSubmatrix(NumericalFailure, ValueError):
    pass


class MissingPair(OamError, KeyError):
    pass


class TooFewSamples(OamError, ValueError):
    pass


class UnphysicalEstimate(NumericalFailure, ValueError):
    pass
