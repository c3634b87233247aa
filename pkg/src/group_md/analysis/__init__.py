"""Curvature, conditioning and group-law analysis"""
from group_md.analysis.curvature import (
    CurvatureReport,
    curvature_profile,
    dmd_condition_bound,
    geg_truncated_condition,
    max_stable_step,
)
from group_md.analysis.group_law import group_law_check
from group_md.analysis.verify import CheckResult, VerifyReport, run_verification

__all__ = [
    'CheckResult',
    'CurvatureReport',
    'VerifyReport',
    'curvature_profile',
    'dmd_condition_bound',
    'geg_truncated_condition',
    'group_law_check',
    'max_stable_step',
    'run_verification',
]
