"""
Flat-file persistence: CSV traces and JSON summaries
"""
import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from group_md.exceptions import ParseError
from group_md.models.trace import TRACE_COLUMNS, IterationTrace, TraceRow

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
HEADER_PREFIX = "# "

_INT_COLUMNS = {'t', 'nnz', 'n_dual', 'n_fallback', 'n_clipped'}
_OPTIONAL_COLUMNS = {'rel_primal', 'iou'}


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


def write_trace_csv(trace: IterationTrace, path: PathLike) -> Path:
    """
    Write a trace as CSV

    The first line is "# " followed by the header as sorted-key JSON; floats
    use 17 significant digits so reloading is exact.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = dict(trace.header, stopped_at=trace.stopped_at)
    with open(path, 'w', newline='') as f:
        f.write(HEADER_PREFIX + json.dumps(header, sort_keys=True) + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in trace.rows:
            data = row.to_dict()
            writer.writerow([_format(data[col]) for col in TRACE_COLUMNS])
    logger.debug(f"Wrote {len(trace)} rows to {path}")
    return path


def _parse_cell(path: Path, line: int, column: str, text: str) -> Any:
    if text == "":
        if column in _OPTIONAL_COLUMNS:
            return None
        raise ParseError(f"{path}:{line}: column {column} is empty")
    try:
        return int(text) if column in _INT_COLUMNS else float(text)
    except ValueError:
        raise ParseError(f"{path}:{line}: column {column} is not a number: {text!r}")


def read_trace_csv(path: PathLike) -> IterationTrace:
    """
    Read a trace written by write_trace_csv

    Raises:
        FileNotFoundError: If the file does not exist
        ParseError: With file and line on malformed content
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Trace file not found: {path}")

    with open(path, 'r', newline='') as f:
        lines = f.read().splitlines()

    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise ParseError(f"{path}:1: missing '# {{json}}' header line")
    try:
        header = json.loads(lines[0][len(HEADER_PREFIX):])
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:1: header is not valid JSON ({e})")

    reader = csv.reader(lines[1:])
    columns = next(reader, None)
    if columns is None or tuple(columns) != TRACE_COLUMNS:
        raise ParseError(f"{path}:2: expected columns {','.join(TRACE_COLUMNS)}")

    stopped_at = header.pop('stopped_at', None)
    trace = IterationTrace(header=header, stopped_at=stopped_at)
    for offset, cells in enumerate(reader, start=3):
        if not cells:
            continue
        if len(cells) != len(TRACE_COLUMNS):
            raise ParseError(f"{path}:{offset}: expected {len(TRACE_COLUMNS)} fields, got {len(cells)}")
        values = {col: _parse_cell(path, offset, col, text) for col, text in zip(TRACE_COLUMNS, cells)}
        try:
            trace.append(TraceRow(**values))
        except ValueError as e:
            raise ParseError(f"{path}:{offset}: {e}")
    return trace


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_summary_json(summary: Dict[str, Any], path: PathLike) -> Path:
    """Write a summary document with sorted keys (non-finite floats become null)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(_json_safe(summary), f, sort_keys=True, indent=2)
        f.write("\n")
    logger.info(f"Summary written to {path}")
    return path


def read_summary_json(path: PathLike) -> Dict[str, Any]:
    """
    Read a summary document

    Raises:
        FileNotFoundError: If the file does not exist
        ParseError: With file and line if the JSON is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Summary file not found: {path}")
    with open(path, 'r') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}:{e.lineno}: {e.msg}")


def trace_filename(algorithm: str, run_index: int, axis: Optional[str] = None,
                   value: Optional[float] = None) -> str:
    """traces/<algorithm>[_<axis>=<value>]_run<NNN>.csv"""
    cell = "" if axis is None else f"_{axis}={value:g}"
    return f"{algorithm}{cell}_run{run_index:03d}.csv"


def list_trace_files(directory: PathLike) -> List[Path]:
    """Trace CSVs under a directory, sorted by name"""
    return sorted(Path(directory).glob("*.csv"))
