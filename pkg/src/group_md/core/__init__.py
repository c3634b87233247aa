"""Experiment configuration, engine, storage and plotting"""
from group_md.core.aggregate import AggregateResult, MetricSummary, RunSummary, aggregate, summarize_run
from group_md.core.config import RunConfig
from group_md.core.engine import ExperimentEngine, ExperimentResult

__all__ = [
    'AggregateResult',
    'ExperimentEngine',
    'ExperimentResult',
    'MetricSummary',
    'RunConfig',
    'RunSummary',
    'aggregate',
    'summarize_run',
]
