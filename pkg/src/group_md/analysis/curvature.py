"""
Curvature of the mirror potentials and the step-size guidelines it implies

For DMD the potential's curvature is the exp-branch derivative,
h''(w) = [1 + (1-q) w]^{q/(1-q)} for Tsallis; for GEG it is the
log-branch derivative, h''(w) = w^{-q}.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import DomainError, ParamError
from group_md.links.base import LinkFunction
from group_md.models.link_family import LinkRole

CURVATURE_KINDS = ('dmd', 'geg')


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    """h'' on a grid and its extrema"""
    descriptor: str
    which: str
    grid: np.ndarray
    h2: np.ndarray
    mu_F: float
    L_F: float

    @property
    def kappa_F(self) -> float:
        return self.L_F / self.mu_F

    def to_dict(self) -> dict:
        return {
            'descriptor': self.descriptor,
            'which': self.which,
            'mu_F': self.mu_F,
            'L_F': self.L_F,
            'kappa_F': self.kappa_F,
            'grid_size': int(self.grid.size),
        }


def _check_q(q: float) -> None:
    if not (math.isfinite(q) and 0 < q < 1):
        raise ParamError(f"q must lie in (0, 1), got {q!r}")


def curvature_profile(link: LinkFunction, which: str, grid: ArrayLike) -> CurvatureReport:
    """
    Evaluate h'' of the DMD or GEG potential on a grid

    Args:
        link: Link function
        which: "dmd" (exp-branch derivative, grid in [0, 1]) or
            "geg" (log-branch derivative, grid in (0, 1])
        grid: Evaluation points

    Raises:
        DomainError: For grid points outside the potential's domain
    """
    if which not in CURVATURE_KINDS:
        raise ParamError(f"Unknown curvature kind {which!r}, expected one of {CURVATURE_KINDS}")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("Curvature grid is empty")
    lo_ok = grid >= 0 if which == 'dmd' else grid > 0
    if not np.all(lo_ok & (grid <= 1.0)):
        raise DomainError(f"Curvature grid for {which} must lie in {'[0, 1]' if which == 'dmd' else '(0, 1]'}")

    role = LinkRole.EXP if which == 'dmd' else LinkRole.LOG
    h2 = np.atleast_1d(np.asarray(link.eval_dlink(grid, role), dtype=float))
    return CurvatureReport(
        descriptor=link.descriptor,
        which=which,
        grid=grid,
        h2=h2,
        mu_F=float(h2.min()),
        L_F=float(h2.max()),
    )


def dmd_condition_bound(q: float) -> float:
    """(2 - q)^{q/(1-q)}, the DMD condition number on the simplex (<= e)"""
    _check_q(q)
    return (2.0 - q) ** (q / (1.0 - q))


def geg_truncated_condition(q: float, delta: float) -> float:
    """delta^{-q}, the GEG condition number on {w >= delta}"""
    _check_q(q)
    if not (math.isfinite(delta) and 0 < delta <= 1):
        raise ParamError(f"Truncation level must lie in (0, 1], got delta={delta!r}")
    return delta ** (-q)


def max_stable_step(kind: str, q: float, w_min: Optional[float] = None) -> float:
    """
    Curvature-based step-size guideline

    dmd: 2/(2-q)^{q/(1-q)}; geg: 2 w_min^q, limited by the smallest active
    weight.

    Raises:
        ParamError: If geg is asked without a w_min in (0, 1]
    """
    if kind == 'dmd':
        return 2.0 / dmd_condition_bound(q)
    if kind == 'geg':
        _check_q(q)
        if w_min is None or not 0 < w_min <= 1:
            raise ParamError(f"GEG step bound needs w_min in (0, 1], got {w_min!r}")
        return 2.0 * w_min ** q
    raise ParamError(f"Unknown step kind {kind!r}, expected one of {CURVATURE_KINDS}")
