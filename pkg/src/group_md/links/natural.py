"""
Natural logarithm link (standard EG geometry)
"""
import numpy as np
from scipy.special import xlogy

from group_md.links.base import LinkFunction


class NaturalLink(LinkFunction):
    """log_G = ln, exp_G = exp"""

    family_id = "natural"

    def _validate(self) -> None:
        pass

    def _log(self, w: np.ndarray) -> np.ndarray:
        return np.log(w)

    def _exp(self, x: np.ndarray) -> np.ndarray:
        return np.exp(x)

    def _dlog(self, w: np.ndarray) -> np.ndarray:
        return 1.0 / w

    def _dexp(self, x: np.ndarray) -> np.ndarray:
        return np.exp(x)

    def potential(self, w: np.ndarray) -> np.ndarray:
        # w ln w - w, with 0 ln 0 = 0
        return xlogy(w, w) - w
