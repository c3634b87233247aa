"""
Unit tests for trace and summary files
"""
import json

import pytest

from group_md.core.storage import (
    list_trace_files,
    read_summary_json,
    read_trace_csv,
    trace_filename,
    write_summary_json,
    write_trace_csv,
)
from group_md.exceptions import ParseError
from group_md.models.trace import TRACE_COLUMNS, IterationTrace, TraceRow


class TestTraceFiles:
    """Test trace CSV persistence"""

    def test_header_line(self, sample_trace, temp_dir):
        """Test the first line carries the header as sorted JSON"""
        sample_trace.stopped_at = 3
        path = write_trace_csv(sample_trace, temp_dir / "traces" / "dmd_run000.csv")
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# {")
        header = json.loads(lines[0][2:])
        assert list(header) == sorted(header)
        assert header['stopped_at'] == 3
        assert lines[1] == ",".join(TRACE_COLUMNS)
        assert len(lines) == 2 + len(sample_trace)

    def test_reload_is_exact(self, sample_trace, temp_dir):
        """Test rows and header survive a write and read"""
        sample_trace.stopped_at = 3
        path = write_trace_csv(sample_trace, temp_dir / "run.csv")
        loaded = read_trace_csv(path)
        assert loaded.header == sample_trace.header
        assert loaded.stopped_at == 3
        assert [r.to_dict() for r in loaded.rows] == [r.to_dict() for r in sample_trace.rows]

    def test_optional_columns(self, temp_dir):
        """Test empty optional cells load as None"""
        trace = IterationTrace(header={'t_max': 1})
        trace.append(TraceRow(t=0, loss=1.0, rel_primal=None, fw_gap=0.5, rel_fw=0.5,
                              delta_t=1.0, iou=None, nnz=4))
        loaded = read_trace_csv(write_trace_csv(trace, temp_dir / "bare.csv"))
        assert loaded.rows[0].iou is None
        assert loaded.rows[0].rel_primal is None

    def test_bad_number_reports_line(self, sample_trace, temp_dir):
        """Test malformed cells name the file and line"""
        path = write_trace_csv(sample_trace, temp_dir / "run.csv")
        lines = path.read_text().splitlines()
        lines[3] = lines[3].replace(lines[3].split(",")[1], "abc", 1)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError, match=r"run\.csv:4: column loss"):
            read_trace_csv(path)

    def test_missing_header(self, temp_dir):
        """Test files without the JSON header line"""
        path = temp_dir / "bad.csv"
        path.write_text(",".join(TRACE_COLUMNS) + "\n")
        with pytest.raises(ParseError, match=":1:"):
            read_trace_csv(path)

    def test_wrong_columns(self, temp_dir):
        """Test an unexpected column row"""
        path = temp_dir / "bad.csv"
        path.write_text('# {}\nt,loss\n0,1.0\n')
        with pytest.raises(ParseError, match=":2:"):
            read_trace_csv(path)

    def test_short_row(self, sample_trace, temp_dir):
        """Test rows with missing fields"""
        path = write_trace_csv(sample_trace, temp_dir / "run.csv")
        path.write_text(path.read_text() + "9,1.0\n")
        with pytest.raises(ParseError, match=":7: expected"):
            read_trace_csv(path)

    def test_missing_file(self, temp_dir):
        """Test a missing trace file"""
        with pytest.raises(FileNotFoundError):
            read_trace_csv(temp_dir / "none.csv")

    def test_trace_filename(self):
        """Test cell file names"""
        assert trace_filename('dmd', 3) == 'dmd_run003.csv'
        assert trace_filename('mmd-geg', 12, 'q', 0.25) == 'mmd-geg_q=0.25_run012.csv'
        assert trace_filename('eg', 0, 'kappa', 1e6) == 'eg_kappa=1e+06_run000.csv'

    def test_list_trace_files(self, sample_trace, temp_dir):
        """Test CSVs are listed by name"""
        for name in ('geg_run000.csv', 'dmd_run001.csv', 'dmd_run000.csv'):
            write_trace_csv(sample_trace, temp_dir / name)
        (temp_dir / "notes.txt").write_text("x")
        assert [p.name for p in list_trace_files(temp_dir)] == [
            'dmd_run000.csv', 'dmd_run001.csv', 'geg_run000.csv']


class TestSummaryFiles:
    """Test summary JSON persistence"""

    def test_roundtrip(self, temp_dir):
        """Test sorted keys and non-finite floats"""
        path = write_summary_json({'b': 1, 'a': [1.5, float('inf')], 'c': {'d': float('nan')}},
                                  temp_dir / "out" / "summary.json")
        assert read_summary_json(path) == {'a': [1.5, None], 'b': 1, 'c': {'d': None}}
        assert path.read_text().index('"a"') < path.read_text().index('"b"')

    def test_malformed(self, temp_dir):
        """Test malformed JSON names the line"""
        path = temp_dir / "summary.json"
        path.write_text('{\n  "a": 1,\n  oops\n}\n')
        with pytest.raises(ParseError, match=r"summary\.json:3"):
            read_summary_json(path)

    def test_missing(self, temp_dir):
        """Test a missing summary file"""
        with pytest.raises(FileNotFoundError):
            read_summary_json(temp_dir / "none.json")
