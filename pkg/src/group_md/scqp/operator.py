"""
Matrix-free spectral operator Q = U^T diag(lambda) U

U is an orthonormal DCT-II composed with random sign flips and a random
permutation: U w = DCT(signs * w[perm]). Applying Q costs O(n log n) and no
matrix is ever stored.
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.fft import dct, idct

from group_md.exceptions import ArgumentError, LengthMismatch
from group_md.scqp.streams import OPERATOR_STREAM, stream_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    """Eigenvalues and the random factors of U"""
    n: int
    kappa: float
    seed: int
    eigenvalues: np.ndarray
    signs: np.ndarray
    perm: np.ndarray

    def __post_init__(self):
        for name in ('eigenvalues', 'signs', 'perm'):
            arr = np.array(getattr(self, name))
            if arr.shape != (self.n,):
                raise ArgumentError(f"Operator {name} has shape {arr.shape}, expected ({self.n},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues.max())

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues.min())

    def spec(self) -> dict:
        return {'n': self.n, 'kappa': self.kappa, 'seed': self.seed}


def make_operator(n: int, kappa: float, seed: int) -> SpectralOperator:
    """
    Build an operator with eigenvalues kappa^(-(i-1)/(n-1)), i = 1..n

    Args:
        n: Dimension (>= 2)
        kappa: Condition number (>= 1)
        seed: Seed of the operator stream (signs, permutation)

    Raises:
        ArgumentError: On n < 2 or kappa < 1
    """
    if n < 2:
        raise ArgumentError(f"Operator dimension must be at least 2, got n={n}")
    if not (np.isfinite(kappa) and kappa >= 1):
        raise ArgumentError(f"Condition number must be >= 1, got kappa={kappa!r}")

    rng = stream_rng(seed, OPERATOR_STREAM)
    signs = rng.choice(np.array([-1.0, 1.0]), size=n)
    perm = rng.permutation(n)
    eigenvalues = float(kappa) ** (-np.arange(n) / (n - 1))

    logger.debug(f"Built operator n={n}, kappa={kappa}, seed={seed}")
    return SpectralOperator(n=n, kappa=float(kappa), seed=int(seed),
                            eigenvalues=eigenvalues, signs=signs, perm=perm)


def _check_length(op: SpectralOperator, w: ArrayLike) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (op.n,):
        raise LengthMismatch(f"Vector has shape {w.shape}, operator has n={op.n}")
    return w


def apply_u(op: SpectralOperator, w: ArrayLike) -> np.ndarray:
    """U w = DCT(signs * w[perm])"""
    w = _check_length(op, w)
    return dct(op.signs * w[op.perm], type=2, norm='ortho')


def apply_ut(op: SpectralOperator, y: ArrayLike) -> np.ndarray:
    """U^T y, the inverse of apply_u"""
    y = _check_length(op, y)
    x = op.signs * idct(y, type=2, norm='ortho')
    out = np.empty(op.n)
    out[op.perm] = x
    return out


def apply_q(op: SpectralOperator, w: ArrayLike) -> np.ndarray:
    """
    Q w = U^T diag(lambda) U w

    Raises:
        LengthMismatch: If len(w) != n
    """
    return apply_ut(op, op.eigenvalues * apply_u(op, w))


def estimate_norm(op: SpectralOperator, iterations: int = 500, seed: int = 0) -> float:
    """Power-iteration estimate of ||Q||_2 (Rayleigh quotient of the last iterate)"""
    if iterations < 1:
        raise ArgumentError(f"Power iteration needs at least one iteration, got {iterations}")
    v = np.random.default_rng(seed).standard_normal(op.n)
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        qv = apply_q(op, v)
        v = qv / np.linalg.norm(qv)
    return float(np.dot(v, apply_q(op, v)))


def materialize(op: SpectralOperator) -> np.ndarray:
    """Dense Q built column by column (small n only; used for cross-checks)"""
    return np.column_stack([apply_q(op, e) for e in np.eye(op.n)])
