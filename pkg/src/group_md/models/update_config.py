"""
Update and stopping configuration consumed by the run loop
"""
import math
from dataclasses import dataclass
from typing import Optional

from group_md.exceptions import ParamError

ALGORITHMS = ('eg', 'geg', 'dmd', 'mmd-geg', 'mmd-dmd')
SCHEDULES = ('constant', 'inv_sqrt')
GUARDS = ('centred', 'raw')


def normalize_algorithm(name: str) -> str:
    """Canonical algorithm key ("mmd_geg" -> "mmd-geg")"""
    key = name.strip().lower().replace('_', '-')
    if key not in ALGORITHMS:
        raise ParamError(
            f"Unsupported algorithm: {name}. Supported algorithms: {', '.join(ALGORITHMS)}"
        )
    return key


@dataclass(frozen=True)
class UpdateConfig:
    """
    Stepper selection and step-size policy

    centred=None means the per-algorithm default: raw gradient for EG,
    centred gradient for every other update.
    """
    algorithm: str
    link: str = "natural"
    eta: float = 1.0
    centred: Optional[bool] = None
    schedule: str = "constant"
    guard: str = "centred"

    def __post_init__(self):
        object.__setattr__(self, 'algorithm', normalize_algorithm(self.algorithm))
        if self.algorithm == 'eg':
            object.__setattr__(self, 'link', 'natural')
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise ParamError(f"Learning rate must be positive, got eta={self.eta!r}")
        if self.schedule not in SCHEDULES:
            raise ParamError(f"Unknown schedule {self.schedule!r}, expected one of {SCHEDULES}")
        if self.guard not in GUARDS:
            raise ParamError(f"Unknown DMD guard {self.guard!r}, expected one of {GUARDS}")

    @property
    def use_centred(self) -> bool:
        if self.centred is None:
            return self.algorithm != 'eg'
        return self.centred

    def eta_at(self, step: int) -> float:
        """Learning rate of the step taken from iterate `step` (0-based)"""
        if self.schedule == 'inv_sqrt':
            return self.eta / math.sqrt(step + 1)
        return self.eta

    def to_dict(self) -> dict:
        return {
            'algorithm': self.algorithm,
            'link': self.link,
            'eta': self.eta,
            'centred': self.use_centred,
            'schedule': self.schedule,
            'guard': self.guard,
        }


@dataclass(frozen=True)
class StoppingRule:
    """Relative FW-gap stopping: fire once g_FW(w_t)/g_FW(w_0) <= threshold"""
    threshold: float = 1e-4
    atol: float = 1e-12

    def __post_init__(self):
        if not self.threshold >= 0:
            raise ParamError(f"Stopping threshold must be nonnegative, got {self.threshold!r}")

    def fires(self, delta_t: float) -> bool:
        return delta_t <= self.threshold
