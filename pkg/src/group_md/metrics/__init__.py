"""Optimality certificates and support recovery metrics"""
from group_md.metrics.bregman import bregman_divergence
from group_md.metrics.certificates import (
    certificate_violations,
    fw_gap,
    rel_fw_gap,
    rel_primal_gap,
    stopping_delta,
)
from group_md.metrics.support import first_iter_at_iou, iou_topk, recovery_delay, top_k

__all__ = [
    'bregman_divergence',
    'certificate_violations',
    'first_iter_at_iou',
    'fw_gap',
    'iou_topk',
    'recovery_delay',
    'rel_fw_gap',
    'rel_primal_gap',
    'stopping_delta',
    'top_k',
]
