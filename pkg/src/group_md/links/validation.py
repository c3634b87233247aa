"""
Numerical admissibility checks for link functions
"""
import logging
from dataclasses import asdict, dataclass

import numpy as np

from group_md.exceptions import ArgumentError, GroupMDError
from group_md.links.base import LinkFunction

logger = logging.getLogger(__name__)

MIN_GRID_SIZE = 16
ROUNDTRIP_TOLERANCE = 1e-9
GRID_FLOOR = 1e-6


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a grid scan over a link's validated domain"""
    descriptor: str
    grid_size: int
    monotone: bool
    concave_log: bool
    convex_exp: bool
    roundtrip_error: float

    @property
    def admissible(self) -> bool:
        return self.monotone and self.roundtrip_error <= ROUNDTRIP_TOLERANCE

    def to_dict(self) -> dict:
        return {**asdict(self), 'admissible': self.admissible}


def validation_grid(link: LinkFunction, grid_size: int) -> np.ndarray:
    """Log-spaced grid over the validated domain, open at a zero lower end"""
    lo = link.domain_lo * (1 + 1e-6) if link.domain_lo > 0 else GRID_FLOOR
    return np.geomspace(lo, link.domain_hi, grid_size)


def _strictly_decreasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) < 0))


def validate_params(link: LinkFunction, grid_size: int = 256) -> ValidityReport:
    """
    Scan a link on a log-spaced grid

    Monotonicity uses first differences of log_G. Concavity of the log (and
    convexity of the exp, scanned on the image of the grid) compares
    successive divided-difference slopes, which handles the uneven spacing.
    Evaluation failures are reported as a failed property, never raised.

    Args:
        link: Link to check
        grid_size: Number of grid points (>= 16)

    Returns:
        ValidityReport
    """
    if grid_size < MIN_GRID_SIZE:
        raise ArgumentError(f"grid_size must be at least {MIN_GRID_SIZE}, got {grid_size}")

    grid = validation_grid(link, grid_size)
    monotone = concave_log = convex_exp = False
    roundtrip_error = float('inf')

    try:
        logs = np.asarray(link.eval_log(grid), dtype=float)
        if np.all(np.isfinite(logs)):
            monotone = bool(np.all(np.diff(logs) > 0))
            concave_log = _strictly_decreasing(np.diff(logs) / np.diff(grid))
            back = np.asarray(link.eval_exp(logs), dtype=float)
            roundtrip_error = float(np.max(np.abs(back - grid) / grid))
            if monotone:
                exps = back
                convex_exp = _strictly_decreasing(-np.diff(exps) / np.diff(logs))
    except GroupMDError as e:
        logger.warning(f"Validation of {link.descriptor} stopped early: {e}")

    report = ValidityReport(
        descriptor=link.descriptor,
        grid_size=grid_size,
        monotone=monotone,
        concave_log=concave_log,
        convex_exp=convex_exp,
        roundtrip_error=roundtrip_error,
    )
    logger.debug(f"Validity of {link.descriptor}: {report.to_dict()}")
    return report
