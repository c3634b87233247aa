"""
Per-run summaries and their aggregation across seeds
"""
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from group_md.metrics.certificates import certificate_violations
from group_md.metrics.support import first_iter_at_iou, recovery_delay
from group_md.models.trace import IterationTrace

CI_Z = 1.96

# Metrics reported per cell, in summary order
SUMMARY_METRICS = (
    'iterations',
    'final_rel_primal',
    'final_rel_fw',
    'final_delta',
    'final_iou',
    'first_iter_iou',
    'recovery_delay',
    'final_nnz',
    'certificate_violations',
)


@dataclass
class RunSummary:
    """
    Scalar outcomes of one run

    Iteration counts not reached within the budget are censored to the
    budget and flagged in `censored`.
    """
    algorithm: str
    run_index: int
    iterations: int
    converged: bool
    final_rel_primal: Optional[float]
    final_rel_fw: float
    final_delta: float
    final_iou: Optional[float]
    first_iter_iou: Optional[int]
    recovery_delay: Optional[int]
    final_nnz: int
    certificate_violations: int
    censored: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def summarize_run(trace: IterationTrace, run_index: int = 0,
                  iou_threshold: float = 0.9) -> RunSummary:
    """
    Reduce a trace to its summary

    Args:
        trace: Completed run trace
        run_index: Index of the run within its cell
        iou_threshold: Threshold of the first-iteration-to-IoU metric
    """
    budget = int(trace.header.get('t_max', trace.final.t))
    final = trace.final
    censored = []

    iterations = trace.stopped_at
    if iterations is None:
        iterations = budget
        censored.append('iterations')

    has_iou = final.iou is not None
    first_hit = delay = None
    if has_iou:
        first_hit = first_iter_at_iou(trace, iou_threshold)
        if first_hit is None:
            first_hit = budget
            censored.append('first_iter_iou')
        delay = recovery_delay(trace)
        if delay is None:
            delay = budget
            censored.append('recovery_delay')

    return RunSummary(
        algorithm=trace.algorithm or "",
        run_index=run_index,
        iterations=iterations,
        converged=trace.stopped_at is not None,
        final_rel_primal=final.rel_primal,
        final_rel_fw=final.rel_fw,
        final_delta=final.delta_t,
        final_iou=final.iou,
        first_iter_iou=first_hit,
        recovery_delay=delay,
        final_nnz=final.nnz,
        certificate_violations=certificate_violations(trace),
        censored=censored,
    )


@dataclass
class MetricSummary:
    """mean, sample std and the 95% interval mean +- 1.96 SE"""
    n: int
    mean: float
    std: float
    se: float
    ci_low: float
    ci_high: float
    n_censored: int = 0

    @property
    def ci_half_width(self) -> float:
        return self.ci_high - self.mean

    def to_dict(self) -> dict:
        return asdict(self)


def summarize_metric(values: Sequence[float], n_censored: int = 0) -> Optional[MetricSummary]:
    """Statistics of one metric; None when no run reported it"""
    arr = np.asarray([v for v in values if v is not None], dtype=float)
    if arr.size == 0:
        return None
    mean = float(np.mean(arr))
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    se = std / math.sqrt(arr.size)
    return MetricSummary(
        n=int(arr.size),
        mean=mean,
        std=std,
        se=se,
        ci_low=mean - CI_Z * se,
        ci_high=mean + CI_Z * se,
        n_censored=n_censored,
    )


@dataclass
class AggregateResult:
    """One (algorithm, axis value) row"""
    algorithm: str
    axis: Optional[str]
    value: Optional[float]
    n_runs: int
    metrics: Dict[str, MetricSummary]
    failures: List[Dict[str, str]] = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return len(self.failures)

    def mean(self, metric: str) -> Optional[float]:
        summary = self.metrics.get(metric)
        return None if summary is None else summary.mean

    def to_dict(self) -> dict:
        return {
            'algorithm': self.algorithm,
            'axis': self.axis,
            'value': self.value,
            'n_runs': self.n_runs,
            'n_failed': self.n_failed,
            'failures': self.failures,
            'metrics': {k: v.to_dict() for k, v in self.metrics.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AggregateResult":
        return cls(
            algorithm=data['algorithm'],
            axis=data.get('axis'),
            value=data.get('value'),
            n_runs=data['n_runs'],
            metrics={k: MetricSummary(**v) for k, v in data.get('metrics', {}).items()},
            failures=list(data.get('failures', [])),
        )


def aggregate(algorithm: str, summaries: Sequence[RunSummary], axis: Optional[str] = None,
              value: Optional[float] = None,
              failures: Optional[List[Dict[str, str]]] = None) -> AggregateResult:
    """Fold run summaries (in the given order) into one row"""
    metrics = {}
    for name in SUMMARY_METRICS:
        n_censored = sum(1 for s in summaries if name in s.censored)
        stats = summarize_metric([getattr(s, name) for s in summaries], n_censored)
        if stats is not None:
            metrics[name] = stats
    return AggregateResult(
        algorithm=algorithm,
        axis=axis,
        value=value,
        n_runs=len(summaries),
        metrics=metrics,
        failures=list(failures or []),
    )
