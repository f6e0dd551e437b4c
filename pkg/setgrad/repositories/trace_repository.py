"""Trace CSV streaming and parsing, plus run summaries."""
import csv
import json
import logging
from pathlib import Path
from typing import IO, Optional, Union

from setgrad.constants.trace import (
    COLUMN_A_MIN_NORM,
    COLUMN_EPS,
    COLUMN_F,
    COLUMN_ITER,
    COLUMN_SAMPLES,
    COLUMN_STATUS,
    COLUMN_STEP,
    TRACE_STATUSES,
    trace_columns,
)
from setgrad.exceptions import InputError
from setgrad.models.trajectory import IterateRecord, Trajectory
from setgrad.utils.formatters import format_float, parse_float

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def record_to_row(record: IterateRecord) -> list:
    direction = record.direction or (None,) * len(record.x)
    return (
        [str(record.iter)]
        + [format_float(v) for v in record.x]
        + [format_float(record.f), format_float(record.eps), format_float(record.a_min_norm)]
        + [format_float(v) for v in direction]
        + [format_float(record.step), str(record.samples), record.status]
    )


class TraceWriter:
    """Writes the header on open and flushes every row, so a crash leaves a partial trace."""

    def __init__(self, target: Union[PathLike, IO[str]], dim: int) -> None:
        self.dim = dim
        self._owned = not hasattr(target, "write")
        self._handle = open(target, "w", newline="") if self._owned else target
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(trace_columns(dim))
        self._handle.flush()

    def write(self, record: IterateRecord) -> None:
        if len(record.x) != self.dim:
            raise InputError(f"record of dimension {len(record.x)} in a trace of dimension {self.dim}")
        self._writer.writerow(record_to_row(record))
        self._handle.flush()

    def close(self) -> None:
        if self._owned and not self._handle.closed:
            self._handle.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def write_trace(trajectory: Trajectory, target: Union[PathLike, IO[str]]) -> None:
    with TraceWriter(target, trajectory.dim) as writer:
        for record in trajectory.records:
            writer.write(record)


def _parse_row(row: dict, dim: int) -> IterateRecord:
    direction = [parse_float(row[f"h{i}"]) for i in range(dim)]
    status = row[COLUMN_STATUS]
    if status not in TRACE_STATUSES:
        raise InputError(f"unknown trace status {status!r}")
    return IterateRecord(
        iter=int(row[COLUMN_ITER]),
        x=tuple(float(row[f"x{i}"]) for i in range(dim)),
        f=float(row[COLUMN_F]),
        eps=parse_float(row[COLUMN_EPS]),
        a_min_norm=parse_float(row[COLUMN_A_MIN_NORM]),
        direction=None if direction[0] is None else tuple(direction),
        step=float(row[COLUMN_STEP]),
        samples=int(row[COLUMN_SAMPLES]),
        status=status,
    )


def read_trace(path: PathLike, method: str = "descent") -> Trajectory:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        dim = sum(1 for name in header if name.startswith("x"))
        if header != trace_columns(dim):
            raise InputError(f"{path} does not have trace columns")
        records = tuple(_parse_row(row, dim) for row in reader)
    if not records:
        raise InputError(f"{path} holds no trace rows")
    return Trajectory(records, method=method)


def write_summary(summary: dict, path: Optional[PathLike]) -> str:
    """Serialise a summary; also written to ``path`` when given."""
    text = json.dumps(summary, indent=2)
    if path:
        with open(path, "w") as handle:
            handle.write(text + "\n")
        logger.info("summary written to %s", path)
    return text
