"""
Optimality certificates: primal gap, Frank-Wolfe duality gap, stopping ratio
"""
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import DegenerateStart, LengthMismatch
from group_md.models.trace import IterationTrace

CERTIFICATE_TOLERANCE = 1e-9


def rel_primal_gap(loss_w: float, loss_star: float) -> float:
    """(L(w) - L*)/max(1, |L*|)"""
    return (loss_w - loss_star) / max(1.0, abs(loss_star))


def fw_gap(w: ArrayLike, g: ArrayLike) -> float:
    """
    <w, g> - min_i g_i; nonnegative (to rounding) for any simplex w

    Raises:
        LengthMismatch: If w and g differ in length
    """
    w = np.asarray(w, dtype=float)
    g = np.asarray(g, dtype=float)
    if w.shape != g.shape:
        raise LengthMismatch(f"fw_gap: w has shape {w.shape}, g has shape {g.shape}")
    return float(np.dot(w, g) - g.min())


def rel_fw_gap(w: ArrayLike, g: ArrayLike, loss_w: float) -> float:
    """g_FW(w)/max(1, |L(w)|)"""
    return fw_gap(w, g) / max(1.0, abs(loss_w))


def stopping_delta(fw_now: float, fw_init: float) -> float:
    """
    delta_t = g_FW(w_t)/g_FW(w_0)

    Raises:
        DegenerateStart: If the initial gap is not positive
    """
    if not fw_init > 0:
        raise DegenerateStart(f"Initial FW gap is {fw_init!r}; w0 is already optimal")
    return fw_now / fw_init


def certificate_violations(trace: IterationTrace, loss_star: Optional[float] = None,
                           tol: float = CERTIFICATE_TOLERANCE) -> int:
    """
    Count logged iterates whose FW lower bound exceeds the optimum

    L(w_t) - g_FW(w_t) must not exceed L*; returns 0 when L* is unknown.
    """
    if loss_star is None:
        loss_star = trace.header.get('loss_star')
    if loss_star is None:
        return 0
    return sum(1 for row in trace.rows if row.loss - row.fw_gap > loss_star + tol)
