"""
Base interface for group-logarithm / group-exponential link functions
"""
from abc import ABC, abstractmethod
from typing import ClassVar, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import DomainError
from group_md.models.link_family import LinkFamily, LinkRole

Scalar = Union[float, np.ndarray]

FD_RELATIVE_STEP = 1e-7


def _as_array(x: ArrayLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _as_output(arr: np.ndarray, scalar: bool) -> Scalar:
    return float(arr) if scalar else arr


class LinkFunction(ABC):
    """
    Abstract base class for link functions (mirror maps)

    A link pairs a deformed logarithm log_G with its inverse exp_G. Concrete
    families implement the vectorized kernels `_log` and `_exp`; derivatives
    default to central differences and are overridden where closed forms
    exist. Instances are immutable and safe to share across threads.
    """

    family_id: ClassVar[str] = ""
    default_domain: ClassVar[Tuple[float, float]] = (0.0, 1.0)

    def __init__(self, family: LinkFamily, domain_lo: Optional[float] = None,
                 domain_hi: Optional[float] = None):
        self.family = family
        self.domain_lo = self.default_domain[0] if domain_lo is None else float(domain_lo)
        self.domain_hi = self.default_domain[1] if domain_hi is None else float(domain_hi)
        self._validate()

    @abstractmethod
    def _validate(self) -> None:
        """
        Check family parameters and cache derived constants

        Raises:
            ParamError: If parameters violate the family invariants
        """
        pass

    @abstractmethod
    def _log(self, w: np.ndarray) -> np.ndarray:
        """Vectorized log_G on validated input"""
        pass

    @abstractmethod
    def _exp(self, x: np.ndarray) -> np.ndarray:
        """Vectorized exp_G on validated input"""
        pass

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        return self._central_difference(self._log, w, nonnegative=True)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        return self._central_difference(self._exp, x, nonnegative=False)

    def finite_at_zero(self) -> bool:
        """Whether log_G(0) has a finite limit"""
        return False

    def potential(self, w: np.ndarray) -> Optional[np.ndarray]:
        """Closed-form antiderivative of log_G, or None if unavailable"""
        return None

    @property
    def descriptor(self) -> str:
        return self.family.descriptor

    def eval_log(self, w: ArrayLike) -> Scalar:
        """
        Evaluate log_G

        Args:
            w: Nonnegative point(s)

        Returns:
            log_G(w), scalar or array matching the input

        Raises:
            DomainError: If w < 0, or w = 0 where log_G diverges
        """
        arr, scalar = _as_array(w)
        if np.isnan(arr).any():
            raise DomainError(f"{self.descriptor}: log of NaN")
        if (arr < 0).any():
            raise DomainError(f"{self.descriptor}: log undefined for negative input {arr.min()!r}")
        if not self.finite_at_zero() and (arr == 0).any():
            raise DomainError(f"{self.descriptor}: log diverges at 0")
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            out = self._log(arr)
        return _as_output(out, scalar)

    def eval_exp(self, x: ArrayLike) -> Scalar:
        """
        Evaluate exp_G, the compositional inverse of log_G

        Args:
            x: Real point(s)

        Returns:
            exp_G(x) >= 0
        """
        arr, scalar = _as_array(x)
        if np.isnan(arr).any():
            raise DomainError(f"{self.descriptor}: exp of NaN")
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            out = self._exp(arr)
        return _as_output(out, scalar)

    def eval_dlink(self, w: ArrayLike, which: Union[LinkRole, str]) -> Scalar:
        """
        Derivative of the log or exp branch

        Args:
            w: Evaluation point(s)
            which: LinkRole.LOG for d log_G/dw, LinkRole.EXP for d exp_G/dw

        Raises:
            DomainError: At singular points (non-finite derivative)
        """
        role = LinkRole(which)
        arr, scalar = _as_array(w)
        if np.isnan(arr).any():
            raise DomainError(f"{self.descriptor}: derivative at NaN")
        if role is LinkRole.LOG and (arr < 0).any():
            raise DomainError(f"{self.descriptor}: log derivative undefined for negative input")
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            out = self._dlog(arr) if role is LinkRole.LOG else self._dexp(arr)
        out = np.asarray(out, dtype=float)
        if not np.all(np.isfinite(out)):
            bad = np.ravel(arr[~np.isfinite(out)] if arr.ndim else arr)
            raise DomainError(f"{self.descriptor}: {role.value} derivative singular at {bad[:3]}")
        return _as_output(out, scalar)

    def _central_difference(self, func, x: np.ndarray, nonnegative: bool) -> np.ndarray:
        h = np.maximum(FD_RELATIVE_STEP, FD_RELATIVE_STEP * np.abs(x))
        lower = x - h
        if nonnegative:
            # one-sided step where the left point would leave the domain
            one_sided = lower <= 0
            lower = np.where(one_sided, x, lower)
            span = np.where(one_sided, h, 2 * h)
        else:
            span = 2 * h
        return (func(x + h) - func(lower)) / span

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor!r})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinkFunction) and other.family == self.family
                and other.domain_lo == self.domain_lo and other.domain_hi == self.domain_hi)

    def __hash__(self) -> int:
        return hash((self.family, self.domain_lo, self.domain_hi))


def eval_log(link: LinkFunction, w: ArrayLike) -> Scalar:
    """log_G(w)"""
    return link.eval_log(w)


def eval_exp(link: LinkFunction, x: ArrayLike) -> Scalar:
    """exp_G(x)"""
    return link.eval_exp(x)


def eval_dlink(link: LinkFunction, w: ArrayLike, which: Union[LinkRole, str]) -> Scalar:
    """Derivative of the chosen branch"""
    return link.eval_dlink(w, which)
