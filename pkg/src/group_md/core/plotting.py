"""
Static SVG figures with CSV sidecars of the plotted data
"""
import csv
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from group_md.core.aggregate import AggregateResult  # noqa: E402
from group_md.core.storage import list_trace_files, read_summary_json, read_trace_csv  # noqa: E402
from group_md.exceptions import PlotError  # noqa: E402
from group_md.models.trace import IterationTrace  # noqa: E402

logger = logging.getLogger(__name__)

TRACE_KINDS = ('convergence', 'iou', 'iou_vs_gap')
SUMMARY_KINDS = ('noise', 'conditioning', 'q_sensitivity')
PLOT_KINDS = TRACE_KINDS + SUMMARY_KINDS

# Axis each summary kind is drawn against
SUMMARY_AXES = {'noise': 'snr_db', 'conditioning': 'kappa', 'q_sensitivity': 'q'}

FIGSIZE = (10, 4)
LOG_FLOOR = 1e-16

# Sidecar records: (panel, series, x, y)
Points = List[Tuple[str, str, float, float]]

matplotlib.rcParams['svg.hashsalt'] = 'group-md'
matplotlib.rcParams['svg.fonttype'] = 'none'


def _by_algorithm(traces: Sequence[IterationTrace]) -> Dict[str, List[IterationTrace]]:
    groups: Dict[str, List[IterationTrace]] = {}
    for trace in traces:
        groups.setdefault(trace.algorithm or "run", []).append(trace)
    return dict(sorted(groups.items()))


def _mean_curve(traces: List[IterationTrace], column: str) -> Tuple[np.ndarray, np.ndarray]:
    """Mean of a column over the iterations logged by every run"""
    common = set(traces[0].column('t'))
    for trace in traces[1:]:
        common &= set(trace.column('t'))
    ts = sorted(common)
    values = []
    for trace in traces:
        lookup = dict(zip(trace.column('t'), trace.column(column)))
        values.append([lookup[t] for t in ts])
    if any(v is None for row in values for v in row):
        return np.array([]), np.array([])
    return np.asarray(ts, dtype=float), np.mean(np.asarray(values, dtype=float), axis=0)


def _draw_curves(ax, groups, column: str, panel: str, points: Points, log_y: bool) -> None:
    for algorithm, members in groups.items():
        x, y = _mean_curve(members, column)
        if x.size == 0:
            continue
        if log_y:
            y = np.maximum(y, LOG_FLOOR)
        ax.plot(x, y, linewidth=2, label=algorithm)
        points.extend((panel, algorithm, float(a), float(b)) for a, b in zip(x, y))
    if log_y:
        ax.set_yscale('log')
    ax.set_xlabel('Iteration')
    ax.grid(True, alpha=0.3)
    ax.legend(loc='best')


def _trace_figure(traces: Sequence[IterationTrace], kind: str):
    points: Points = []
    groups = _by_algorithm(traces)

    if kind == 'convergence':
        fig, axes = plt.subplots(1, 2, figsize=FIGSIZE)
        _draw_curves(axes[0], groups, 'rel_primal', 'rel_primal', points, log_y=True)
        axes[0].set_ylabel('Relative primal gap')
        _draw_curves(axes[1], groups, 'rel_fw', 'rel_fw', points, log_y=True)
        axes[1].set_ylabel('Relative FW gap')
    elif kind == 'iou':
        fig, ax = plt.subplots(1, 1, figsize=FIGSIZE)
        _draw_curves(ax, groups, 'iou', 'iou', points, log_y=False)
        ax.set_ylabel('IoU')
        ax.set_ylim(-0.02, 1.02)
    else:
        fig, ax = plt.subplots(1, 1, figsize=FIGSIZE)
        for algorithm, members in groups.items():
            for i, trace in enumerate(members):
                pairs = [(fw, iou) for fw, iou in zip(trace.column('rel_fw'), trace.column('iou'))
                         if iou is not None]
                if not pairs:
                    continue
                x = np.maximum([p[0] for p in pairs], LOG_FLOOR)
                y = [p[1] for p in pairs]
                ax.plot(x, y, linewidth=1, alpha=0.7, label=algorithm if i == 0 else None)
                points.extend(('iou_vs_gap', f"{algorithm}#{i}", float(a), float(b)) for a, b in zip(x, y))
        ax.set_xscale('log')
        ax.invert_xaxis()
        ax.set_xlabel('Relative FW gap')
        ax.set_ylabel('IoU')
        ax.grid(True, alpha=0.3)
        ax.legend(loc='best')
    return fig, points


def _summary_figure(rows: Sequence[AggregateResult], kind: str):
    axis = SUMMARY_AXES[kind]
    rows = [r for r in rows if r.axis == axis and r.value is not None]
    if not rows:
        raise PlotError(f"{kind} plot needs sweep rows over {axis}")

    panels = {
        'noise': [('final_rel_fw', 'Final relative FW gap', True)],
        'conditioning': [('iterations', 'Iterations to stop', True),
                         ('recovery_delay', 'Support recovery delay', False)],
        'q_sensitivity': [('iterations', 'Iterations to stop', False),
                          ('final_rel_primal', 'Final relative primal gap', True)],
    }[kind]

    fig, axes = plt.subplots(1, len(panels), figsize=FIGSIZE, squeeze=False)
    points: Points = []
    for ax, (metric, ylabel, log_y) in zip(axes[0], panels):
        for algorithm in sorted({r.algorithm for r in rows}):
            series = sorted((r.value, r.metrics[metric]) for r in rows
                            if r.algorithm == algorithm and metric in r.metrics)
            if not series:
                continue
            x = np.array([s[0] for s in series], dtype=float)
            y = np.array([s[1].mean for s in series])
            err = np.array([s[1].ci_half_width for s in series])
            if log_y:
                y = np.maximum(y, LOG_FLOOR)
            ax.errorbar(x, y, yerr=err, marker='o', capsize=3, linewidth=2, label=algorithm)
            points.extend((metric, algorithm, float(a), float(b)) for a, b in zip(x, y))
        if log_y:
            ax.set_yscale('log')
        if axis == 'kappa':
            ax.set_xscale('log')
        ax.set_xlabel(axis)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend(loc='best')
    return fig, points


def _save(fig, points: Points, out_path: Path) -> Path:
    if not points:
        plt.close(fig)
        raise PlotError(f"Nothing to plot for {out_path.name}")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out_path, format='svg', metadata={'Date': None})
    plt.close(fig)

    sidecar = out_path.with_suffix('.csv')
    with open(sidecar, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(['panel', 'series', 'x', 'y'])
        for panel, series, x, y in points:
            writer.writerow([panel, series, format(x, '.17g'), format(y, '.17g')])
    logger.info(f"Plot written to {out_path} (data in {sidecar.name})")
    return out_path


def plot_traces(traces: Sequence[IterationTrace], kind: str, out_path: Union[str, Path]) -> Path:
    """
    Draw a trace-based figure

    Raises:
        PlotError: If there are no traces or nothing plottable in them
    """
    if kind not in TRACE_KINDS:
        raise PlotError(f"Unknown trace plot {kind!r}, expected one of {TRACE_KINDS}")
    traces = [t for t in traces if len(t)]
    if not traces:
        raise PlotError(f"{kind} plot has no trace rows")
    fig, points = _trace_figure(traces, kind)
    return _save(fig, points, Path(out_path))


def plot_summary(rows: Sequence[AggregateResult], kind: str, out_path: Union[str, Path]) -> Path:
    """
    Draw a sweep-summary figure

    Raises:
        PlotError: If no row belongs to the kind's sweep axis
    """
    if kind not in SUMMARY_KINDS:
        raise PlotError(f"Unknown summary plot {kind!r}, expected one of {SUMMARY_KINDS}")
    fig, points = _summary_figure(rows, kind)
    return _save(fig, points, Path(out_path))


def emit_plot(kind: str, inputs: Sequence[Union[str, Path]], out_dir: Union[str, Path]) -> Path:
    """
    Load inputs and write plots/<kind>.svg

    Trace kinds take CSV files or directories of them; summary kinds take
    summary.json files.

    Raises:
        PlotError: On an unknown kind or empty input
        ParseError: With file and line on malformed input
    """
    if kind not in PLOT_KINDS:
        raise PlotError(f"Unknown plot kind {kind!r}, expected one of {PLOT_KINDS}")
    out_path = Path(out_dir) / "plots" / f"{kind}.svg"

    if kind in TRACE_KINDS:
        files: List[Path] = []
        for item in inputs:
            item = Path(item)
            files.extend(list_trace_files(item) if item.is_dir() else [item])
        if not files:
            raise PlotError(f"{kind} plot has no input trace files")
        return plot_traces([read_trace_csv(f) for f in files], kind, out_path)

    rows: List[AggregateResult] = []
    for item in inputs:
        document = read_summary_json(item)
        rows.extend(AggregateResult.from_dict(r) for r in document.get('rows', []))
    return plot_summary(rows, kind, out_path)
