"""
SNR-calibrated Gaussian gradient noise
"""
import math
from dataclasses import dataclass
import numpy as np
from numpy.typing import ArrayLike

from group_md.scqp.streams import NOISE_STREAM, stream_rng


@dataclass(frozen=True)
class NoiseModel:
    """
    Additive noise with sigma_t = (||g||_2 / sqrt(n)) * 10^(-snr_db/20)

    snr_db = +inf means exact gradients.
    """
    snr_db: float = math.inf
    rng_seed: int = 0

    @property
    def is_exact(self) -> bool:
        return math.isinf(self.snr_db) and self.snr_db > 0

    def sigma(self, g: ArrayLike) -> float:
        """Noise level calibrated on the clean gradient g"""
        if self.is_exact:
            return 0.0
        g = np.asarray(g, dtype=float)
        return float(np.linalg.norm(g) / math.sqrt(g.size) * 10.0 ** (-self.snr_db / 20.0))

    def make_rng(self) -> np.random.Generator:
        """Fresh generator for one run"""
        return stream_rng(self.rng_seed, NOISE_STREAM)

    def perturb(self, g: ArrayLike, rng: np.random.Generator) -> np.ndarray:
        """
        g + xi with xi ~ N(0, sigma(g)^2 I)

        rng is the caller-owned stream of the run (see make_rng); successive
        calls on one stream draw independent xi.
        """
        g = np.asarray(g, dtype=float)
        if self.is_exact:
            return g
        return g + rng.normal(0.0, self.sigma(g), size=g.size)
