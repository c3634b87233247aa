"""
Simplex-constrained quadratic program with a planted sparse optimum

    minimize 1/2 w^T Q w + c^T w  over the probability simplex
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import ArgumentError, KKTViolation
from group_md.models.simplex import SimplexVector
from group_md.scqp.noise import NoiseModel
from group_md.scqp.operator import SpectralOperator, apply_q, make_operator
from group_md.scqp.streams import PLANTING_STREAM, stream_rng

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 5e-4
KKT_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class ScqpInstance:
    """Operator, linear cost and the planted optimum with its support"""
    op: SpectralOperator
    c: np.ndarray
    w_star: SimplexVector
    support: Tuple[int, ...]
    delta: float
    seed: int
    loss_star: float

    @property
    def n(self) -> int:
        return self.op.n

    @property
    def k(self) -> int:
        return len(self.support)

    def evaluate(self, w: ArrayLike) -> Tuple[float, np.ndarray]:
        """(loss, gradient) sharing one operator application"""
        w = np.asarray(w, dtype=float)
        qw = apply_q(self.op, w)
        return float(0.5 * np.dot(w, qw) + np.dot(self.c, w)), qw + self.c

    def loss(self, w: ArrayLike) -> float:
        return loss(self, w)

    def gradient(self, w: ArrayLike) -> np.ndarray:
        return gradient(self, w)

    def noisy_gradient(self, w: ArrayLike, noise: NoiseModel,
                       rng: np.random.Generator) -> np.ndarray:
        return noisy_gradient(self, w, noise, rng)

    def spec(self) -> dict:
        """JSON-serializable description; the instance is rebuilt from it"""
        return {
            'n': self.n,
            'kappa': self.op.kappa,
            'K': self.k,
            'delta': self.delta,
            'seed': self.seed,
        }


def plant_instance(op: SpectralOperator, K: int, delta: float = DEFAULT_DELTA,
                   seed: Optional[int] = None) -> ScqpInstance:
    """
    Plant a K-sparse optimum w* = 1/K on a random support S*

    c = -Q w* on S* and -Q w* + delta off S*, so the gradient at w* is 0 on
    the support and delta elsewhere (strict complementarity).

    Args:
        op: Spectral operator
        K: Support size, 1 <= K <= n
        delta: Complementarity margin (> 0)
        seed: Seed of the planting stream (defaults to the operator seed)

    Raises:
        ArgumentError: On K out of range or delta <= 0
        KKTViolation: If the planted point fails its certificate
    """
    if not 1 <= K <= op.n:
        raise ArgumentError(f"Support size K={K} out of range [1, {op.n}]")
    if not delta > 0:
        raise ArgumentError(f"Complementarity margin must be positive, got delta={delta!r}")
    seed = op.seed if seed is None else int(seed)

    rng = stream_rng(seed, PLANTING_STREAM)
    support = np.sort(rng.choice(op.n, size=K, replace=False))
    w_star = np.zeros(op.n)
    w_star[support] = 1.0 / K

    v = apply_q(op, w_star)
    c = -v
    off = np.ones(op.n, dtype=bool)
    off[support] = False
    c[off] += delta

    g = apply_q(op, w_star) + c
    if np.max(np.abs(g[support])) > KKT_TOLERANCE or (
            off.any() and np.max(np.abs(g[off] - delta)) > KKT_TOLERANCE):
        raise KKTViolation(f"Planted instance (n={op.n}, K={K}, seed={seed}) fails its KKT check")

    c.setflags(write=False)
    loss_star = float(-0.5 * np.dot(w_star, v))
    logger.debug(f"Planted K={K} optimum on n={op.n}, L*={loss_star:.6e}")
    return ScqpInstance(
        op=op,
        c=c,
        w_star=SimplexVector(w_star),
        support=tuple(int(i) for i in support),
        delta=float(delta),
        seed=seed,
        loss_star=loss_star,
    )


def make_instance(n: int, kappa: float, K: int, delta: float = DEFAULT_DELTA,
                  seed: int = 0) -> ScqpInstance:
    """Operator and planted optimum from one seed"""
    return plant_instance(make_operator(n, kappa, seed), K, delta, seed)


def loss(inst: ScqpInstance, w: ArrayLike) -> float:
    """
    1/2 w^T Q w + c^T w

    Raises:
        LengthMismatch: If len(w) != n
    """
    return inst.evaluate(w)[0]


def gradient(inst: ScqpInstance, w: ArrayLike) -> np.ndarray:
    """Q w + c"""
    return inst.evaluate(w)[1]


def noisy_gradient(inst: ScqpInstance, w: ArrayLike, noise: NoiseModel,
                   rng: np.random.Generator) -> np.ndarray:
    """
    Clean gradient plus noise calibrated on it

    rng is the run's noise stream (NoiseModel.make_rng); one stream per run
    gives independent draws per iteration and a reproducible sequence.
    """
    return noise.perturb(gradient(inst, w), rng)
