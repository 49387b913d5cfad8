"""Exception hierarchy.

Errors split into two families that the command line maps to different exit
codes: malformed input (exit 3) and numerical breakdown (exit 4).
"""


class PresymError(Exception):
    """Base class for all package errors."""


class InputError(PresymError, ValueError):
    """Malformed or inconsistent input (shapes, degrees, grids, files)."""


class DegreeError(InputError):
    pass


class GridMismatchError(InputError):
    pass


class SizeError(InputError):
    """A grid or truncated complex would exceed the memory budget."""


class NumericalError(PresymError, ArithmeticError):
    """A computation left its domain of validity."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularityError(NumericalError):
    """``id + Z beta`` (or another required inverse) is numerically singular."""

    def __init__(self, message, cond=None, witness=None):
        super().__init__(message, witness)
        self.cond = cond


class RankError(NumericalError):
    pass


class FrameError(NumericalError):
    pass


class SolvabilityError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass


class TransversalityError(NumericalError):
    """A deformed distribution stopped being transverse to the complement."""

    def __init__(self, message, t=None, witness=None):
        super().__init__(message, witness)
        self.t = t
