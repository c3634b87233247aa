"""
Per-iteration run records
"""
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional

from group_md.exceptions import ArgumentError

# CSV column order of a trace file
TRACE_COLUMNS = (
    't', 'loss', 'rel_primal', 'fw_gap', 'rel_fw', 'delta_t', 'iou', 'nnz',
    'n_dual', 'n_fallback', 'n_clipped',
)


@dataclass(frozen=True)
class TraceRow:
    """Metrics of one logged iterate"""
    t: int
    loss: float
    rel_primal: Optional[float]
    fw_gap: float
    rel_fw: float
    delta_t: float
    iou: Optional[float]
    nnz: int
    n_dual: int = 0
    n_fallback: int = 0
    n_clipped: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class IterationTrace:
    """Append-only record of a single run"""
    header: Dict[str, Any] = field(default_factory=dict)
    rows: List[TraceRow] = field(default_factory=list)
    stopped_at: Optional[int] = None

    def append(self, row: TraceRow) -> None:
        """Append a row; t must strictly increase"""
        if self.rows and row.t <= self.rows[-1].t:
            raise ArgumentError(
                f"Trace rows must increase in t: {row.t} after {self.rows[-1].t}"
            )
        self.rows.append(row)

    def column(self, name: str) -> List[Any]:
        """Values of one column across rows"""
        return [getattr(row, name) for row in self.rows]

    @property
    def final(self) -> TraceRow:
        if not self.rows:
            raise ArgumentError("Trace is empty")
        return self.rows[-1]

    @property
    def algorithm(self) -> Optional[str]:
        return self.header.get('config', {}).get('algorithm')

    def __len__(self) -> int:
        return len(self.rows)
