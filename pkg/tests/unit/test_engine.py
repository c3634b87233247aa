"""
Unit tests for aggregation and the experiment engine
"""
import json
import math
from unittest.mock import patch

import pytest

from group_md.core.aggregate import AggregateResult, aggregate, summarize_metric, summarize_run
from group_md.core.engine import ExperimentEngine
from group_md.exceptions import ArgumentError, DegenerateState, ParamError


class TestSummaries:
    """Test per-run summaries and metric statistics"""

    def test_summarize_run(self, sample_trace):
        """Test a trace that used its whole budget"""
        summary = summarize_run(sample_trace, run_index=3)
        assert summary.algorithm == 'dmd'
        assert summary.run_index == 3
        assert summary.iterations == 4
        assert not summary.converged
        assert summary.censored == ['iterations']
        assert summary.first_iter_iou == 2
        assert summary.recovery_delay == 2
        assert summary.final_nnz == 7
        assert summary.final_rel_primal == pytest.approx(0.01)
        assert summary.certificate_violations == 0

    def test_summarize_stopped_run(self, sample_trace):
        """Test the stopping iterate is the iteration count"""
        sample_trace.stopped_at = 3
        summary = summarize_run(sample_trace)
        assert summary.iterations == 3
        assert summary.converged
        assert summary.censored == []

    def test_unreached_iou_is_censored(self, sample_trace):
        """Test an unattained IoU threshold reports the budget"""
        summary = summarize_run(sample_trace, iou_threshold=1.0)
        assert summary.first_iter_iou == 2
        unreached = summarize_run(sample_trace.__class__(header=sample_trace.header,
                                                         rows=sample_trace.rows[:2]))
        assert unreached.first_iter_iou == 4
        assert unreached.recovery_delay == 4
        assert 'first_iter_iou' in unreached.censored

    def test_summarize_metric(self):
        """Test mean, sample std and the 95% interval"""
        stats = summarize_metric([1.0, 2.0, 3.0], n_censored=1)
        assert stats.mean == 2.0
        assert stats.std == pytest.approx(1.0)
        assert stats.se == pytest.approx(1 / math.sqrt(3))
        assert stats.ci_low == pytest.approx(2.0 - 1.96 / math.sqrt(3))
        assert stats.ci_half_width == pytest.approx(1.96 / math.sqrt(3))
        assert stats.n_censored == 1

    def test_single_run_has_zero_spread(self):
        """Test n = 1 gives std 0 and a degenerate interval"""
        stats = summarize_metric([5.0])
        assert stats.std == 0.0
        assert stats.ci_low == stats.ci_high == 5.0

    def test_missing_values(self):
        """Test None values are skipped"""
        assert summarize_metric([None, None]) is None
        assert summarize_metric([None, 4.0]).n == 1

    def test_aggregate_roundtrip(self, sample_trace):
        """Test rows rebuild from their dict form"""
        row = aggregate('dmd', [summarize_run(sample_trace, i) for i in range(3)], 'q', 0.25)
        assert row.n_runs == 3
        assert row.mean('iterations') == 4.0
        assert row.metrics['iterations'].n_censored == 3
        rebuilt = AggregateResult.from_dict(json.loads(json.dumps(row.to_dict())))
        assert rebuilt.to_dict() == row.to_dict()


class TestBuildCells:
    """Test ExperimentEngine.build_cells"""

    def test_single_cell_order(self, small_config):
        """Test cells are ordered by algorithm then run"""
        cells = ExperimentEngine(small_config).build_cells()
        assert [(c.algorithm, c.run_index) for c in cells] == [
            ('eg', 0), ('eg', 1), ('geg', 0), ('geg', 1), ('dmd', 0), ('dmd', 1)]
        assert [c.index for c in cells] == list(range(6))
        assert [c.instance_seed for c in cells[:2]] == [0, 1]
        assert [c.noise_seed for c in cells[:2]] == [100, 101]

    def test_q_sweep(self, small_config):
        """Test q values rewrite the link descriptor"""
        cells = ExperimentEngine(small_config).build_cells('q', [0.1, 0.3])
        assert len(cells) == 12
        assert cells[0].value == 0.1
        assert {c.update.link for c in cells if c.algorithm == 'dmd'} == {'tsallis:q=0.1', 'tsallis:q=0.3'}
        assert {c.update.link for c in cells if c.algorithm == 'eg'} == {'natural'}

    def test_q_sweep_needs_q_link(self, small_config):
        """Test a q sweep over a link without q"""
        config = small_config.model_copy(update={'update': small_config.update.model_copy(
            update={'link': 'kaniadakis1:kappa=0.5'})})
        with pytest.raises(ParamError):
            ExperimentEngine(config).build_cells('q', [0.1])

    def test_instance_axes(self, small_config):
        """Test n, kappa, K and snr_db sweeps"""
        engine = ExperimentEngine(small_config)
        assert engine.build_cells('kappa', [10.0])[0].kappa == 10.0
        assert engine.build_cells('K', [4])[0].K == 4
        assert engine.build_cells('n', [128])[0].n == 128
        assert engine.build_cells('snr_db', [20])[0].snr_db == 20.0

    def test_invalid_sweeps(self, small_config):
        """Test unknown axes, empty values and K > n"""
        engine = ExperimentEngine(small_config)
        with pytest.raises(ArgumentError):
            engine.build_cells('eta', [1.0])
        with pytest.raises(ArgumentError):
            engine.build_cells('kappa', [])
        with pytest.raises(ParamError):
            engine.build_cells('K', [65])


class TestExperimentEngine:
    """Test running, folding and saving"""

    def test_run_all(self, small_config):
        """Test one row per algorithm with every run folded in"""
        result = ExperimentEngine(small_config).run_all(parallel=1)
        assert [row.algorithm for row in result.rows] == ['eg', 'geg', 'dmd']
        assert not result.failed
        assert not result.degenerate
        for row in result.rows:
            assert row.n_runs == 2
            assert row.metrics['certificate_violations'].mean == 0.0
            assert 0.0 <= row.mean('final_iou') <= 1.0

    def test_parallel_matches_serial(self, small_config):
        """Test the thread pool gives the same rows as the serial loop"""
        serial = ExperimentEngine(small_config).run_all(parallel=1)
        threaded = ExperimentEngine(small_config).run_all(parallel=4)
        assert serial.to_dict() == threaded.to_dict()

    def test_sweep_rows(self, small_config):
        """Test one row per (value, algorithm)"""
        result = ExperimentEngine(small_config).sweep('kappa', [1.0, 10.0], parallel=2)
        assert [(row.value, row.algorithm) for row in result.rows] == [
            (1.0, 'eg'), (1.0, 'geg'), (1.0, 'dmd'), (10.0, 'eg'), (10.0, 'geg'), (10.0, 'dmd')]
        assert result.row('dmd', 10.0).axis == 'kappa'
        with pytest.raises(KeyError):
            result.row('mmd-geg')

    def test_failures_are_recorded(self, small_config):
        """Test failed cells land in the row instead of aborting"""
        with patch('group_md.core.engine.run', side_effect=DegenerateState("all weights vanished")):
            result = ExperimentEngine(small_config).run_all(parallel=1)
        assert len(result.failed) == 6
        assert result.degenerate
        row = result.row('geg')
        assert row.n_runs == 0
        assert row.n_failed == 2
        assert row.failures[0]['error_type'] == 'DegenerateState'

    def test_single_run(self, small_config):
        """Test n_runs = 1 gives zero spread"""
        config = small_config.model_copy(update={'seeds': small_config.seeds.model_copy(update={'n_runs': 1})})
        result = ExperimentEngine(config).run_all(parallel=1)
        assert result.row('dmd').metrics['final_rel_fw'].std == 0.0

    def test_save(self, small_config, temp_dir):
        """Test traces and summary.json are written"""
        out = temp_dir / "out"
        ExperimentEngine(small_config, str(out)).run_all(parallel=2)
        traces = sorted(p.name for p in (out / "traces").glob("*.csv"))
        assert traces[0] == 'dmd_run000.csv'
        assert len(traces) == 6
        with open(out / "summary.json") as f:
            summary = json.load(f)
        assert summary['name'] == 'unit'
        assert 'parallel' not in summary['config']
        assert len(summary['rows']) == 3
