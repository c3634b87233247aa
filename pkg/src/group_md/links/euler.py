"""
Euler generalized logarithm (a, b)
"""
import math

import numpy as np

from group_md.exceptions import ParamError
from group_md.links.base import LinkFunction
from group_md.links.inversion import invert_increasing


class EulerLink(LinkFunction):
    """
    log(w) = (w^a - w^b)/(a - b)

    Monotone on (0, 1] when a > 0 > b (or b > 0 > a); other parameter
    choices are accepted and reported by validate_params. The inverse is
    computed numerically.
    """

    family_id = "euler"

    def _validate(self) -> None:
        a, b = self.family.param('a'), self.family.param('b')
        if not (math.isfinite(a) and math.isfinite(b)) or a == b:
            raise ParamError(f"Euler logarithm requires finite a != b, got a={a!r}, b={b!r}")
        self.a, self.b = a, b

    def finite_at_zero(self) -> bool:
        return min(self.a, self.b) >= 0

    def _log(self, w: np.ndarray) -> np.ndarray:
        a, b = self.a, self.b
        t = np.log(w)
        interior = (np.expm1(a * t) - np.expm1(b * t)) / (a - b)
        at_zero = (np.power(w, a) - np.power(w, b)) / (a - b)
        return np.where(w > 0, interior, at_zero)

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        a, b = self.a, self.b
        return (a * np.power(w, a - 1) - b * np.power(w, b - 1)) / (a - b)

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return invert_increasing(lambda w: float(self._log(np.float64(w))), x, self.descriptor)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        return 1.0 / self._dlog(self._exp(x))
