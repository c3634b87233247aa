"""
Simplex iterate and per-step diagnostics
"""
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import ArgumentError, DegenerateState

SUM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SimplexVector:
    """Nonnegative weight vector with unit l1 norm"""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ArgumentError(f"Simplex vector must be a nonempty 1-d array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ArgumentError("Simplex vector has non-finite entries")
        if values.min() < 0:
            raise ArgumentError(f"Simplex vector has negative entry {values.min():.3e}")
        total = values.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ArgumentError(f"Simplex vector sums to {total!r}, expected 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, n: int) -> "SimplexVector":
        """Uniform point 1/n"""
        if n < 1:
            raise ArgumentError(f"Dimension must be positive, got {n}")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def normalized(cls, raw: ArrayLike) -> "SimplexVector":
        """
        Project a nonnegative vector onto the simplex by l1 normalization

        Raises:
            DegenerateState: If every entry is zero (or the sum is not finite)
        """
        raw = np.abs(np.asarray(raw, dtype=float))
        total = raw.sum()
        if not np.isfinite(total) or total <= 0.0:
            raise DegenerateState(
                f"Cannot normalize: pre-normalization l1 norm is {total!r}"
            )
        return cls(raw / total)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.values))

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True)
class StepDiagnostics:
    """Branch statistics of one update step"""
    n_dual_branch: int = 0
    n_fallback: int = 0
    n_clipped: int = 0

    def to_dict(self) -> dict:
        return {
            'n_dual': self.n_dual_branch,
            'n_fallback': self.n_fallback,
            'n_clipped': self.n_clipped,
        }
