"""
Exception hierarchy for the group mirror descent library
"""
from typing import Optional


class GroupMDError(Exception):
    """Base error; carries the iteration index when raised inside a run"""

    def __init__(self, message: str = "", iteration: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.iteration = iteration

    def __str__(self) -> str:
        if self.iteration is None:
            return self.message
        return f"{self.message} (at iteration {self.iteration})"


class ParamError(GroupMDError, ValueError):
    """Link or algorithm parameters violate their invariants"""


class DomainError(GroupMDError, ValueError):
    """Evaluation point outside the domain of a link function"""


class ArgumentError(GroupMDError, ValueError):
    """Invalid size, count or index argument"""


class LengthMismatch(GroupMDError, ValueError):
    """Vector lengths disagree"""


class UnsupportedFamily(GroupMDError, ValueError):
    """Operation has no implementation for the requested link family"""


class ParseError(GroupMDError, ValueError):
    """Malformed descriptor or input file"""


class ConvergenceError(GroupMDError, RuntimeError):
    """Numeric inversion did not reach its tolerance"""


class NonFiniteGradient(GroupMDError, RuntimeError):
    """Gradient contains NaN or infinite entries"""


class DegenerateState(GroupMDError, RuntimeError):
    """All weights vanished before normalization (step size too large)"""


class DegenerateStart(GroupMDError, RuntimeError):
    """Initial FW gap is not positive, so relative stopping is undefined"""


class KKTViolation(GroupMDError, RuntimeError):
    """Planted instance failed its optimality certificate"""


class PlotError(GroupMDError, RuntimeError):
    """Plot input is empty or unusable"""
