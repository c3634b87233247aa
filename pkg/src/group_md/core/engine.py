"""
Experiment engine: seeded multi-run cells, sweeps and result persistence
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from group_md.core.aggregate import AggregateResult, RunSummary, aggregate, summarize_run
from group_md.core.config import SWEEP_AXES, RunConfig
from group_md.core.storage import trace_filename, write_summary_json, write_trace_csv
from group_md.exceptions import ArgumentError, DegenerateState, GroupMDError, ParamError
from group_md.models.link_family import LinkFamily
from group_md.models.simplex import SimplexVector
from group_md.models.trace import IterationTrace
from group_md.models.update_config import UpdateConfig
from group_md.scqp.instance import ScqpInstance, make_instance
from group_md.scqp.noise import NoiseModel
from group_md.updates.runner import run

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cell:
    """One run: an algorithm on one seeded instance at one axis value"""
    index: int
    algorithm: str
    run_index: int
    n: int
    kappa: float
    K: int
    delta: float
    snr_db: Optional[float]
    update: UpdateConfig
    instance_seed: int
    noise_seed: int
    axis: Optional[str] = None
    value: Optional[float] = None

    @property
    def label(self) -> str:
        cell = "" if self.axis is None else f" {self.axis}={self.value:g}"
        return f"{self.algorithm}{cell} run {self.run_index}"

    def instance_spec(self) -> dict:
        return {
            'n': self.n,
            'kappa': self.kappa,
            'K': self.K,
            'delta': self.delta,
            'seed': self.instance_seed,
            'snr_db': self.snr_db,
        }


@dataclass
class CellResult:
    """Outcome of a cell; trace and summary are None on failure"""
    cell: Cell
    trace: Optional[IterationTrace] = None
    summary: Optional[RunSummary] = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentResult:
    """Aggregated rows plus the raw cell results, in deterministic order"""
    rows: List[AggregateResult]
    cells: List[CellResult] = field(default_factory=list)
    axis: Optional[str] = None

    @property
    def failed(self) -> List[CellResult]:
        return [c for c in self.cells if not c.ok]

    @property
    def degenerate(self) -> bool:
        return any(c.error_type == DegenerateState.__name__ for c in self.failed)

    def row(self, algorithm: str, value: Optional[float] = None) -> AggregateResult:
        for r in self.rows:
            if r.algorithm == algorithm and (value is None or r.value == value):
                return r
        raise KeyError(f"No result row for {algorithm} at {value}")

    def to_dict(self) -> dict:
        return {'axis': self.axis, 'rows': [r.to_dict() for r in self.rows]}


@lru_cache(maxsize=32)
def _instance(n: int, kappa: float, K: int, delta: float, seed: int) -> ScqpInstance:
    return make_instance(n, kappa, K, delta, seed)


class ExperimentEngine:
    """Runs configured cells serially or on a thread pool and folds the results"""

    def __init__(self, config: RunConfig, output_dir: Optional[str] = None):
        self.config = config
        self.output_dir = Path(output_dir) if output_dir else None
        self.completed_cells: List[int] = []
        self.failed_cells: List[int] = []

    def build_cells(self, axis: Optional[str] = None,
                    values: Optional[Sequence[float]] = None) -> List[Cell]:
        """
        Expand the config into cells ordered by (axis value, algorithm, run)

        Raises:
            ArgumentError: On an unknown axis or an axis without values
            ParamError: If an axis value makes a sub-spec invalid
        """
        if axis is not None and axis not in SWEEP_AXES:
            raise ArgumentError(f"Unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")
        if axis is not None and not values:
            raise ArgumentError(f"Sweep over {axis} needs at least one value")
        points = list(values) if axis is not None else [None]

        cells = []
        for value in points:
            inst = self.config.instance.model_copy()
            link = self.config.update.link
            if axis == 'n':
                inst.n = int(value)
                if inst.k_fraction is not None:
                    inst.K = max(1, round(inst.k_fraction * inst.n))
            elif axis == 'kappa':
                inst.kappa = float(value)
            elif axis == 'K':
                inst.K = int(value)
            elif axis == 'snr_db':
                inst.snr_db = float(value)
            elif axis == 'q':
                link = self._with_q(link, float(value))
            self._check_instance(inst.n, inst.kappa, inst.K)

            for algorithm in self.config.update.algorithms:
                update = self.config.update.update_config(algorithm, link)
                for r in range(self.config.seeds.n_runs):
                    cells.append(Cell(
                        index=len(cells),
                        algorithm=update.algorithm,
                        run_index=r,
                        n=inst.n,
                        kappa=inst.kappa,
                        K=inst.K,
                        delta=inst.delta,
                        snr_db=inst.snr_db,
                        update=update,
                        instance_seed=self.config.seeds.instance_seed + r,
                        noise_seed=self.config.seeds.noise_seed + r,
                        axis=axis,
                        value=None if value is None else float(value),
                    ))
        return cells

    @staticmethod
    def _with_q(descriptor: str, q: float) -> str:
        family = LinkFamily.from_descriptor(descriptor)
        if 'q' not in family.param_dict:
            raise ParamError(f"q sweep needs a link with a q parameter, got {descriptor}")
        return family.with_param('q', q).descriptor

    @staticmethod
    def _check_instance(n: int, kappa: float, K: int) -> None:
        if n < 2 or kappa < 1:
            raise ParamError(f"Invalid instance n={n}, kappa={kappa}")
        if not 1 <= K <= n:
            raise ParamError(f"Support size K={K} out of range for n={n}")

    def run_cell(self, cell: Cell) -> CellResult:
        """
        Execute one cell; errors are recorded, not raised

        Args:
            cell: Cell to run

        Returns:
            CellResult
        """
        try:
            logger.info(f"Running {cell.label}")
            instance = _instance(cell.n, cell.kappa, cell.K, cell.delta, cell.instance_seed)
            noise = None if cell.snr_db is None else NoiseModel(cell.snr_db, cell.noise_seed)
            trace = run(
                instance,
                SimplexVector.uniform(cell.n),
                cell.update,
                self.config.budget.t_max,
                stop=self.config.budget.stopping_rule(),
                noise=noise,
                stride=self.config.budget.stride,
                header={
                    'instance': cell.instance_spec(),
                    'noise_seed': cell.noise_seed,
                    'run_index': cell.run_index,
                    'axis': cell.axis,
                    'value': cell.value,
                },
            )
            summary = summarize_run(trace, cell.run_index, self.config.budget.iou_threshold)
            if summary.certificate_violations:
                logger.warning(f"{cell.label}: {summary.certificate_violations} FW certificate violations")
            self.completed_cells.append(cell.index)
            return CellResult(cell, trace, summary)

        except GroupMDError as e:
            logger.error(f"Cell {cell.label} failed: {e}")
            self.failed_cells.append(cell.index)
            return CellResult(cell, error=str(e), error_type=type(e).__name__)

    def run_cells(self, cells: List[Cell], parallel: Optional[int] = None) -> List[CellResult]:
        """Run cells and return results in cell order"""
        workers = parallel if parallel is not None else self.config.parallel
        if workers > 1 and len(cells) > 1:
            results = self._run_parallel(cells, workers)
        else:
            results = [self.run_cell(cell) for cell in cells]
        logger.info(f"Cells completed: {len(self.completed_cells)} succeeded, "
                    f"{len(self.failed_cells)} failed")
        return results

    def _run_parallel(self, cells: List[Cell], workers: int) -> List[CellResult]:
        results: Dict[int, CellResult] = {}
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_cell = {executor.submit(self.run_cell, cell): cell for cell in cells}
            for future in as_completed(future_to_cell):
                cell = future_to_cell[future]
                try:
                    results[cell.index] = future.result()
                except Exception as e:
                    logger.error(f"Error running {cell.label}: {e}")
                    results[cell.index] = CellResult(cell, error=str(e), error_type=type(e).__name__)
        return [results[cell.index] for cell in cells]

    def fold(self, results: List[CellResult], axis: Optional[str] = None) -> ExperimentResult:
        """Aggregate cell results per (axis value, algorithm) in cell order"""
        groups: Dict[tuple, List[CellResult]] = {}
        for result in results:
            groups.setdefault((result.cell.value, result.cell.algorithm), []).append(result)

        rows = []
        for (value, algorithm), members in groups.items():
            summaries = [m.summary for m in members if m.ok]
            failures = [
                {'run_index': str(m.cell.run_index), 'error_type': m.error_type or "", 'error': m.error or ""}
                for m in members if not m.ok
            ]
            rows.append(aggregate(algorithm, summaries, axis, value, failures))
        return ExperimentResult(rows=rows, cells=results, axis=axis)

    def run_all(self, parallel: Optional[int] = None) -> ExperimentResult:
        """Run every algorithm for n_runs seeds on the configured instance"""
        return self._execute(None, None, parallel)

    def sweep(self, axis: str, values: Sequence[float], parallel: Optional[int] = None) -> ExperimentResult:
        """Run every (axis value, algorithm, seed) cell and aggregate per (algorithm, value)"""
        return self._execute(axis, values, parallel)

    def _execute(self, axis: Optional[str], values: Optional[Sequence[float]],
                 parallel: Optional[int]) -> ExperimentResult:
        logger.info("=" * 80)
        logger.info(f"Experiment {self.config.name}"
                    + ("" if axis is None else f": sweep over {axis} = {list(values)}"))
        logger.info("=" * 80)
        started = time.time()

        cells = self.build_cells(axis, values)
        results = self.run_cells(cells, parallel)
        experiment = self.fold(results, axis)
        if self.output_dir is not None:
            self.save(experiment)

        logger.info(f"Experiment finished in {time.time() - started:.1f}s: "
                    f"{len(experiment.rows)} rows, {len(experiment.failed)} failed cells")
        logger.info("=" * 80)
        return experiment

    def save(self, experiment: ExperimentResult) -> Path:
        """Write one CSV per successful cell and summary.json"""
        traces_dir = self.output_dir / "traces"
        for result in experiment.cells:
            if result.trace is not None:
                cell = result.cell
                write_trace_csv(result.trace, traces_dir / trace_filename(
                    cell.algorithm, cell.run_index, cell.axis, cell.value))
        document = {
            'name': self.config.name,
            'config': self.config.model_dump(mode='json', exclude={'parallel'}),
            **experiment.to_dict(),
        }
        return write_summary_json(document, self.output_dir / "summary.json")
