"""
Kaniadakis links: the one-parameter kappa-logarithm and the
three-parameter (kappa, r, lambda) generalization
"""
import math
from typing import Optional

import numpy as np

from group_md.exceptions import ParamError
from group_md.links.base import LinkFunction
from group_md.links.inversion import invert_increasing


class KaniadakisLink(LinkFunction):
    """
    log_k(w) = (w^k - w^{-k})/(2k) = sinh(k ln w)/k
    exp_k(x) = (sqrt(1 + k^2 x^2) + k x)^{1/k} = exp(arcsinh(k x)/k)
    """

    family_id = "kaniadakis1"

    def _validate(self) -> None:
        kappa = self.family.param('kappa')
        if not (math.isfinite(kappa) and -1.0 <= kappa <= 1.0 and kappa != 0.0):
            raise ParamError(f"Kaniadakis requires kappa in [-1, 1], kappa != 0, got {kappa!r}")
        self.kappa = kappa

    def _log(self, w: np.ndarray) -> np.ndarray:
        return np.sinh(self.kappa * np.log(w)) / self.kappa

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return np.exp(np.arcsinh(self.kappa * x) / self.kappa)

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        return np.cosh(self.kappa * np.log(w)) / w

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        k = self.kappa
        return np.exp(np.arcsinh(k * x) / k) / np.sqrt(1.0 + (k * x) ** 2)

    def potential(self, w: np.ndarray) -> Optional[np.ndarray]:
        k = abs(self.kappa)
        if k == 1.0:
            return None
        return (np.power(w, 1 + k) / (1 + k) - np.power(w, 1 - k) / (1 - k)) / (2 * k)


class Kaniadakis3Link(LinkFunction):
    """
    Three-parameter Kaniadakis logarithm

        log(w) = (l^k w^{r+k} - l^{-k} w^{r-k} - l^k + l^{-k})
                 / ((r+k) l^k - (r-k) l^{-k})

    with l > 0, k in [-1, 1] and -|k| < r < |k|. No closed-form inverse,
    so exp_G is computed by bracketed root finding.
    """

    family_id = "kaniadakis3"

    def _validate(self) -> None:
        kappa = self.family.param('kappa')
        r = self.family.param('r')
        lam = self.family.param('lam')
        if not all(math.isfinite(v) for v in (kappa, r, lam)):
            raise ParamError(f"Kaniadakis3 parameters must be finite: {self.descriptor}")
        if lam <= 0:
            raise ParamError(f"Kaniadakis3 requires lambda > 0, got {lam!r}")
        if not -1.0 <= kappa <= 1.0:
            raise ParamError(f"Kaniadakis3 requires kappa in [-1, 1], got {kappa!r}")
        if not -abs(kappa) < r < abs(kappa):
            raise ParamError(f"Kaniadakis3 requires -|kappa| < r < |kappa|, got r={r!r}, kappa={kappa!r}")
        self.kappa, self.r, self.lam = kappa, r, lam
        self._up = lam ** kappa
        self._down = lam ** (-kappa)
        self._norm = (r + kappa) * self._up - (r - kappa) * self._down

    def _log(self, w: np.ndarray) -> np.ndarray:
        t = np.log(w)
        k, r = self.kappa, self.r
        return (self._up * np.expm1((r + k) * t) - self._down * np.expm1((r - k) * t)) / self._norm

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        k, r = self.kappa, self.r
        return (self._up * (r + k) * np.power(w, r + k - 1)
                - self._down * (r - k) * np.power(w, r - k - 1)) / self._norm

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return invert_increasing(lambda w: float(self._log(np.float64(w))), x, self.descriptor)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        return 1.0 / self._dlog(self._exp(x))
