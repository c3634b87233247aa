"""
Mirror-descent update steps over the probability simplex

Each step is a pure function (w, g, eta, ...) -> (w', diagnostics).
"""
import logging
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import LengthMismatch, NonFiniteGradient, ParamError
from group_md.links.base import LinkFunction
from group_md.models.link_family import LinkRole
from group_md.models.simplex import SimplexVector, StepDiagnostics

logger = logging.getLogger(__name__)

StepResult = Tuple[SimplexVector, StepDiagnostics]

MMD_LINKS = ('geg_link', 'dmd_link')


def _check_gradient(w: SimplexVector, g: ArrayLike) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.shape != (w.n,):
        raise LengthMismatch(f"Gradient has shape {g.shape}, iterate has length {w.n}")
    if not np.all(np.isfinite(g)):
        raise NonFiniteGradient(f"Gradient has {int(np.sum(~np.isfinite(g)))} non-finite entries")
    return g


def centred_gradient(w: SimplexVector, g: ArrayLike) -> np.ndarray:
    """
    g - (w^T g) 1, orthogonal to w

    Raises:
        LengthMismatch: If len(g) != len(w)
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (w.n,):
        raise LengthMismatch(f"Gradient has shape {g.shape}, iterate has length {w.n}")
    return g - np.dot(w.values, g)


def _direction(w: SimplexVector, g: np.ndarray, centred: bool) -> np.ndarray:
    return centred_gradient(w, g) if centred else g


def _newly_zero(w: SimplexVector, raw: np.ndarray) -> int:
    return int(np.count_nonzero((raw == 0) & (w.values > 0)))


def _geg_map(link: LinkFunction, w: np.ndarray, step: np.ndarray) -> np.ndarray:
    """exp_G(log_G(w) - step), with zero weights of a divergent log kept at 0"""
    if link.finite_at_zero():
        return np.asarray(link.eval_exp(link.eval_log(w) - step), dtype=float)
    out = np.zeros_like(w)
    alive = w > 0
    if alive.any():
        out[alive] = link.eval_exp(link.eval_log(w[alive]) - step[alive])
    return out


def step_eg(w: SimplexVector, g: ArrayLike, eta: float, centred: bool = False) -> StepResult:
    """
    Exponentiated gradient: w_i exp(-eta g_i) / sum_j w_j exp(-eta g_j)

    The exponent is shifted by min_j(eta g_j) so every factor is <= 1.

    Raises:
        NonFiniteGradient: If g has NaN or infinite entries
    """
    g = _direction(w, _check_gradient(w, g), centred)
    scaled = eta * g
    raw = w.values * np.exp(-(scaled - scaled.min()))
    return SimplexVector.normalized(raw), StepDiagnostics(n_clipped=_newly_zero(w, raw))


def step_geg(w: SimplexVector, g: ArrayLike, eta: float, link: LinkFunction,
             centred: bool = True) -> StepResult:
    """
    Generalized EG: w'_i = exp_G(log_G(w_i) - eta g_i), then l1-normalize

    Raises:
        DomainError: From link evaluation
        DegenerateState: If every coordinate vanished before normalization
    """
    g = _direction(w, _check_gradient(w, g), centred)
    raw = _geg_map(link, w.values, eta * g)
    return SimplexVector.normalized(raw), StepDiagnostics(n_clipped=_newly_zero(w, raw))


def step_dmd(w: SimplexVector, g: ArrayLike, eta: float, link: LinkFunction,
             centred: bool = True, guard: str = 'centred') -> StepResult:
    """
    Dual mirror descent

    Per coordinate z_i = exp_G(w_i) - eta g_i. Where the guard z_i > 0 holds
    the dual branch sets w'_i = [log_G(z_i)]_+, which is exactly 0 for
    z_i <= 1 (hard thresholding); elsewhere the GEG fallback
    exp_G(log_G(w_i) - eta g_i) applies. The result is |w'|/||w'||_1.

    Args:
        guard: "centred" tests z_i built from the update direction, "raw"
            tests the uncentred gradient while the branch still uses the
            update direction

    Raises:
        DomainError: From link evaluation
        DegenerateState: If every coordinate vanished before normalization
    """
    raw_g = _check_gradient(w, g)
    ghat = _direction(w, raw_g, centred)
    expw = np.asarray(link.eval_exp(w.values), dtype=float)

    z = expw - eta * ghat
    if guard == 'centred':
        dual = z > 0
    elif guard == 'raw':
        dual = (expw - eta * raw_g) > 0
    else:
        raise ParamError(f"Unknown DMD guard {guard!r}")

    out = np.zeros(w.n)
    lifted = dual & (z > 1.0)
    if lifted.any():
        out[lifted] = link.eval_log(z[lifted])
    fallback = ~dual
    if fallback.any():
        out[fallback] = _geg_map(link, w.values[fallback], eta * ghat[fallback])
    out = np.maximum(out, 0.0)

    n_dual = int(np.count_nonzero(dual))
    diagnostics = StepDiagnostics(
        n_dual_branch=n_dual,
        n_fallback=w.n - n_dual,
        n_clipped=_newly_zero(w, out),
    )
    return SimplexVector.normalized(out), diagnostics


def step_mmd(w: SimplexVector, g: ArrayLike, eta: float, link: LinkFunction,
             which: str = 'geg_link', centred: bool = True) -> StepResult:
    """
    Mirrorless mirror descent: w'_i = [w_i - eta g_i / d_i]_+, then l1-normalize

    d_i is the log derivative at w_i (geg_link) or the exp derivative at w_i
    (dmd_link). Under geg_link a zero weight has d_i = +inf and stays 0.

    Raises:
        DomainError: If a derivative is singular at an active weight
        DegenerateState: If every coordinate vanished before normalization
    """
    if which not in MMD_LINKS:
        raise ParamError(f"Unknown MMD link {which!r}, expected one of {MMD_LINKS}")
    ghat = _direction(w, _check_gradient(w, g), centred)

    step = np.zeros(w.n)
    if which == 'geg_link':
        alive = w.values > 0
        if alive.any():
            d = np.asarray(link.eval_dlink(w.values[alive], LinkRole.LOG), dtype=float)
            step[alive] = eta * ghat[alive] / d
    else:
        d = np.asarray(link.eval_dlink(w.values, LinkRole.EXP), dtype=float)
        step = eta * ghat / d

    raw = np.maximum(w.values - step, 0.0)
    return SimplexVector.normalized(raw), StepDiagnostics(n_clipped=_newly_zero(w, raw))
