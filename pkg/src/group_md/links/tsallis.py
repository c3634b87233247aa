"""
Tsallis q-logarithm link
"""
import math
from typing import Optional

import numpy as np

from group_md.exceptions import DomainError, ParamError
from group_md.links.base import LinkFunction


class TsallisLink(LinkFunction):
    """
    log_q(w) = (w^{1-q} - 1)/(1-q), exp_q(x) = [1 + (1-q)x]_+^{1/(1-q)}

    Both branches are evaluated through expm1/log1p so the q -> 1 limit
    stays accurate. For q < 1 the log has the finite limit -1/(1-q) at 0 and
    the exponential clips to 0 below 1 + (1-q)x = 0.
    """

    family_id = "tsallis"

    def _validate(self) -> None:
        q = self.family.param('q')
        if not (math.isfinite(q) and q > 0 and q != 1.0):
            raise ParamError(f"Tsallis requires q > 0 and q != 1, got q={q!r}")
        self.q = q
        self._omq = 1.0 - q

    def finite_at_zero(self) -> bool:
        return self.q < 1.0

    def _log(self, w: np.ndarray) -> np.ndarray:
        return np.expm1(self._omq * np.log(w)) / self._omq

    def _exp(self, x: np.ndarray) -> np.ndarray:
        base = 1.0 + self._omq * x
        if self.q > 1.0 and (base <= 0).any():
            raise DomainError(
                f"{self.descriptor}: exp_q undefined for x >= 1/(q-1) = {1.0 / (self.q - 1.0)!r}"
            )
        value = np.exp(np.log1p(self._omq * x) / self._omq)
        return np.where(base > 0, value, 0.0)

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        return np.power(w, -self.q)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        base = 1.0 + self._omq * x
        value = np.exp(np.log1p(self._omq * x) * self.q / self._omq)
        return np.where(base > 0, value, 0.0)

    def potential(self, w: np.ndarray) -> Optional[np.ndarray]:
        if self.q == 2.0:
            return None
        return (np.power(w, 2.0 - self.q) / (2.0 - self.q) - w) / self._omq
