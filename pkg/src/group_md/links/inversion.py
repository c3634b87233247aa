"""
Bracketed numeric inversion for link families without a closed-form exp_G
"""
import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from group_md.exceptions import ConvergenceError, DomainError


BRACKET_LO = 1e-12
BRACKET_HI = 1e6
LOG_TOLERANCE = 1e-13
MAX_ITERATIONS = 200


def invert_increasing(func: Callable[[float], float], targets: np.ndarray,
                      label: str = "link") -> np.ndarray:
    """
    Invert a strictly increasing scalar function on [BRACKET_LO, BRACKET_HI]

    The root is searched in u = ln w so the tolerance is relative in w.

    Args:
        func: Increasing map w -> log_G(w)
        targets: Values y to invert
        label: Name used in error messages

    Returns:
        Array w with func(w) = y

    Raises:
        DomainError: If a target lies outside func's image of the bracket
        ConvergenceError: If the solver does not converge within the cap
    """
    u_lo, u_hi = math.log(BRACKET_LO), math.log(BRACKET_HI)
    f_lo, f_hi = func(BRACKET_LO), func(BRACKET_HI)
    out = np.empty(targets.shape, dtype=float)

    for idx, y in np.ndenumerate(targets):
        if y == 0.0:
            out[idx] = 1.0
            continue
        if not (f_lo <= y <= f_hi):
            raise DomainError(
                f"{label}: cannot invert {y!r}, outside [{f_lo!r}, {f_hi!r}] "
                f"on the bracket [{BRACKET_LO}, {BRACKET_HI}]"
            )
        root, info = brentq(
            lambda u: func(math.exp(u)) - y, u_lo, u_hi,
            xtol=LOG_TOLERANCE, maxiter=MAX_ITERATIONS,
            full_output=True, disp=False,
        )
        if not info.converged:
            raise ConvergenceError(
                f"{label}: inversion of {y!r} stopped after {info.iterations} iterations ({info.flag})"
            )
        out[idx] = math.exp(root)

    return out
