"""
Stretched-exponential and super-exponential links
"""
import math

import numpy as np
from scipy.special import lambertw

from group_md.exceptions import DomainError, ParamError
from group_md.links.base import LinkFunction

# Principal Lambert branch is real for t >= -1/e
LAMBERT_BRANCH_POINT = -1.0 / math.e
LAMBERT_TOLERANCE = 1e-15


def _spow(u: np.ndarray, p: float) -> np.ndarray:
    """Signed power sign(u)|u|^p"""
    return np.sign(u) * np.power(np.abs(u), p)


class StretchedExpLink(LinkFunction):
    """
    log(x) = (1-a) * spow(ln x / (1-a), 1/g)
    exp(y) = exp((1-a) * spow(y / (1-a), g))

    spow is the signed power, which keeps the map continuous and increasing
    through x = 1 for any fixed g.
    """

    family_id = "stretched_exp"

    def _validate(self) -> None:
        alpha, gamma = self.family.param('alpha'), self.family.param('gamma')
        if not (math.isfinite(alpha) and alpha < 1.0):
            raise ParamError(f"Stretched exponential requires alpha < 1, got {alpha!r}")
        if not (math.isfinite(gamma) and gamma > 0):
            raise ParamError(f"Stretched exponential requires gamma > 0, got {gamma!r}")
        self.alpha, self.gamma = alpha, gamma
        self._oma = 1.0 - alpha

    def _log(self, w: np.ndarray) -> np.ndarray:
        return self._oma * _spow(np.log(w) / self._oma, 1.0 / self.gamma)

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self._oma * _spow(x / self._oma, self.gamma))

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        u = np.abs(np.log(w) / self._oma)
        return np.power(u, 1.0 / self.gamma - 1.0) / (self.gamma * w)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        u = np.abs(x / self._oma)
        return self._exp(x) * self.gamma * np.power(u, self.gamma - 1.0)


class SuperExpLink(LinkFunction):
    """
    log(x) = (1-a) * (exp(W(ln x) / (g (1-a))) - 1)

    W is the principal Lambert branch, so the log is defined for
    ln x >= -1/e. The inverse is closed form: with
    u = g (1-a) log1p(y / (1-a)), exp(y) = exp(u e^u) for u >= -1.
    """

    family_id = "super_exp"
    default_domain = (math.exp(LAMBERT_BRANCH_POINT), 1.0)

    def _validate(self) -> None:
        alpha, gamma = self.family.param('alpha'), self.family.param('gamma')
        if not (math.isfinite(alpha) and alpha > 0 and alpha != 1.0):
            raise ParamError(f"Super exponential requires alpha > 0, alpha != 1, got {alpha!r}")
        if not (math.isfinite(gamma) and gamma >= 1.0):
            raise ParamError(f"Super exponential requires gamma >= 1, got {gamma!r}")
        self.alpha, self.gamma = alpha, gamma
        self._oma = 1.0 - alpha
        self._scale = gamma * self._oma

    def _lambert(self, w: np.ndarray) -> np.ndarray:
        t = np.log(w)
        if (t < LAMBERT_BRANCH_POINT - 1e-12).any():
            raise DomainError(
                f"{self.descriptor}: log requires w >= exp(-1/e), got {np.min(w)!r}"
            )
        t = np.maximum(t, LAMBERT_BRANCH_POINT)
        return lambertw(t, 0, tol=LAMBERT_TOLERANCE).real

    def _inner(self, x: np.ndarray) -> np.ndarray:
        ratio = x / self._oma
        if (ratio <= -1.0).any():
            raise DomainError(f"{self.descriptor}: exp undefined for 1 + y/(1-alpha) <= 0")
        u = self._scale * np.log1p(ratio)
        if (u < -1.0 - 1e-12).any():
            raise DomainError(f"{self.descriptor}: exp argument below the Lambert branch point")
        return np.maximum(u, -1.0)

    def _log(self, w: np.ndarray) -> np.ndarray:
        return self._oma * np.expm1(self._lambert(w) / self._scale)

    def _exp(self, x: np.ndarray) -> np.ndarray:
        u = self._inner(x)
        return np.exp(u * np.exp(u))

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        lw = self._lambert(w)
        dlambert = 1.0 / (np.exp(lw) * (1.0 + lw))
        return np.exp(lw / self._scale) * dlambert / (self.gamma * w)

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        u = self._inner(x)
        du = self.gamma / (1.0 + x / self._oma)
        return np.exp(u * np.exp(u)) * (1.0 + u) * np.exp(u) * du
