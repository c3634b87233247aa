"""
Run loop: drives a configured stepper against an objective oracle
"""
import logging
from typing import Any, Dict, Optional, Protocol, Sequence, Tuple

import numpy as np

from group_md.exceptions import ArgumentError, GroupMDError
from group_md.metrics.certificates import fw_gap, rel_fw_gap, rel_primal_gap, stopping_delta
from group_md.metrics.support import iou_topk
from group_md.models.simplex import SimplexVector, StepDiagnostics
from group_md.models.trace import IterationTrace, TraceRow
from group_md.models.update_config import StoppingRule, UpdateConfig
from group_md.scqp.noise import NoiseModel
from group_md.updates.factory import StepperFactory

logger = logging.getLogger(__name__)


class Objective(Protocol):
    """
    Gradient oracle

    support and loss_star may be None when the optimum is unknown; rel_primal
    and iou are then left empty in the trace.
    """
    support: Optional[Sequence[int]]
    loss_star: Optional[float]

    def evaluate(self, w: np.ndarray) -> Tuple[float, np.ndarray]:
        ...

    def noisy_gradient(self, w: np.ndarray, noise: NoiseModel,
                       rng: np.random.Generator) -> np.ndarray:
        ...


def _row(objective: Objective, t: int, w: SimplexVector, loss: float, g: np.ndarray,
         delta_t: float, diagnostics: StepDiagnostics) -> TraceRow:
    loss_star = getattr(objective, 'loss_star', None)
    support = getattr(objective, 'support', None)
    return TraceRow(
        t=t,
        loss=loss,
        rel_primal=None if loss_star is None else rel_primal_gap(loss, loss_star),
        fw_gap=fw_gap(w.values, g),
        rel_fw=rel_fw_gap(w.values, g, loss),
        delta_t=delta_t,
        iou=None if not support else iou_topk(w.values, support),
        nnz=w.nnz,
        **diagnostics.to_dict(),
    )


def run(objective: Objective, w0: SimplexVector, cfg: UpdateConfig, t_max: int,
        stop: Optional[StoppingRule] = None, noise: Optional[NoiseModel] = None,
        stride: int = 1, header: Optional[Dict[str, Any]] = None) -> IterationTrace:
    """
    Iterate the configured update until the stopping rule fires or t_max

    Metrics are always computed on the clean gradient; the stepper sees the
    noisy one when a finite-SNR noise model is given.

    Args:
        objective: Gradient oracle
        w0: Starting iterate
        cfg: Update configuration
        t_max: Iteration budget (>= 1)
        stop: Stopping rule (relative FW gap <= 1e-4 by default)
        noise: Gradient noise model (exact gradients when None)
        stride: Record every stride-th iterate; the first, the stopping and
            the last iterate are always recorded
        header: Extra header fields for the trace

    Returns:
        IterationTrace with rows in increasing t

    Raises:
        ArgumentError: If t_max < 1 or stride < 1
        GroupMDError: Any stepper error, with the iteration index attached
    """
    if t_max < 1:
        raise ArgumentError(f"t_max must be at least 1, got {t_max}")
    if stride < 1:
        raise ArgumentError(f"stride must be at least 1, got {stride}")
    stop = stop or StoppingRule()
    stepper = StepperFactory.create_stepper(cfg)
    rng = noise.make_rng() if noise is not None and not noise.is_exact else None

    trace = IterationTrace(header={
        'config': cfg.to_dict(),
        't_max': t_max,
        'stop_threshold': stop.threshold,
        'snr_db': None if noise is None or noise.is_exact else noise.snr_db,
        'loss_star': getattr(objective, 'loss_star', None),
        **(header or {}),
    })

    w = w0
    loss, g = objective.evaluate(w.values)
    fw_init = fw_gap(w.values, g)
    if fw_init <= stop.atol:
        logger.info(f"{cfg.algorithm}: start is already optimal (FW gap {fw_init:.3e}), stopping at t=0")
        trace.append(_row(objective, 0, w, loss, g, 0.0, StepDiagnostics()))
        trace.stopped_at = 0
        return trace

    trace.append(_row(objective, 0, w, loss, g, 1.0, StepDiagnostics()))

    for t in range(1, t_max + 1):
        g_step = g if rng is None else objective.noisy_gradient(w.values, noise, rng)
        try:
            w, diagnostics = stepper.step(w, g_step, cfg.eta_at(t - 1))
        except GroupMDError as e:
            e.iteration = t
            raise

        loss, g = objective.evaluate(w.values)
        delta_t = stopping_delta(fw_gap(w.values, g), fw_init)
        fired = stop.fires(delta_t)

        if fired or t % stride == 0 or t == t_max:
            trace.append(_row(objective, t, w, loss, g, delta_t, diagnostics))
        logger.debug(f"{cfg.algorithm} t={t} loss={loss:.6e} delta={delta_t:.3e} nnz={w.nnz}")

        if fired:
            trace.stopped_at = t
            break

    logger.info(
        f"{cfg.algorithm} ({cfg.link}) finished at t={trace.final.t}: "
        f"delta={trace.final.delta_t:.3e}, stopped={trace.stopped_at is not None}"
    )
    return trace
