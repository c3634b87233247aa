"""
Support recovery metrics
"""
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike

from group_md.exceptions import ArgumentError
from group_md.models.trace import IterationTrace

IouSeries = Union[IterationTrace, Sequence[Optional[float]]]


def top_k(w: ArrayLike, k: int) -> np.ndarray:
    """Indices of the k largest entries, ties broken by lowest index"""
    w = np.asarray(w, dtype=float)
    if not 0 <= k <= w.size:
        raise ArgumentError(f"K={k} out of range for n={w.size}")
    # stable sort on -w keeps lower indices first among equal values
    return np.argsort(-w, kind='stable')[:k]


def iou_topk(w: ArrayLike, support: Iterable[int], k: Optional[int] = None) -> float:
    """
    Jaccard index between the planted support and the top-K entries of w

    Args:
        w: Iterate
        support: Planted support indices
        k: Size of the estimated support (defaults to |support|)

    Raises:
        ArgumentError: If k exceeds the dimension
    """
    truth = {int(i) for i in support}
    k = len(truth) if k is None else int(k)
    estimate = {int(i) for i in top_k(w, k)}
    union = truth | estimate
    if not union:
        return 1.0
    return len(truth & estimate) / len(union)


def _iou_column(series: IouSeries) -> list:
    if isinstance(series, IterationTrace):
        return list(zip(series.column('t'), series.column('iou')))
    return list(enumerate(series))


def recovery_delay(series: IouSeries) -> Optional[int]:
    """
    Smallest T with IoU = 1 at every logged t >= T, or None

    Accepts a trace or a plain per-iteration IoU sequence.
    """
    points = _iou_column(series)
    delay = None
    for t, iou in reversed(points):
        if iou is None or iou < 1.0:
            break
        delay = t
    return delay


def first_iter_at_iou(series: IouSeries, threshold: float,
                      budget: Optional[int] = None) -> Optional[int]:
    """
    First logged t with IoU >= threshold

    Unattained thresholds return `budget` (censored) when given, else None.
    """
    for t, iou in _iou_column(series):
        if iou is not None and iou >= threshold:
            return t
    return budget
