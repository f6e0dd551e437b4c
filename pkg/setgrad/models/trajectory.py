"""Iterate records of descent runs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from setgrad.constants.trace import STATUS_ITER_LIMIT, STATUS_STEP


@dataclass(frozen=True)
class IterateRecord:
    """One row of a trace. Vectors are tuples so records compare exactly."""

    iter: int
    x: Tuple[float, ...]
    f: float
    eps: Optional[float]
    a_min_norm: Optional[float]
    direction: Optional[Tuple[float, ...]]
    step: float
    samples: int
    status: str
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class Trajectory:
    """Append-only result of a run; the last record carries the final status."""

    records: Tuple[IterateRecord, ...]
    method: str = "descent"

    @property
    def final(self) -> IterateRecord:
        return self.records[-1]

    @property
    def status(self) -> str:
        return self.final.status

    @property
    def dim(self) -> int:
        return len(self.records[0].x)

    @property
    def iterations(self) -> int:
        """Records that examined a point, i.e. all but a trailing iteration-limit row."""
        return sum(1 for record in self.records if record.status != STATUS_ITER_LIMIT)

    def points(self) -> np.ndarray:
        return np.array([record.x for record in self.records])

    def f_values(self) -> np.ndarray:
        return np.array([record.f for record in self.records])

    def accepted_steps(self) -> Tuple[IterateRecord, ...]:
        return tuple(r for r in self.records if r.status == STATUS_STEP and r.step > 0.0)

    def is_monotone(self) -> bool:
        """f never increases from one record to the next."""
        values = self.f_values()
        return bool(np.all(np.diff(values) <= 0.0))

    def sign_alternations(self) -> Tuple[int, ...]:
        """Sign changes per coordinate along the iterates (zeros skipped)."""
        counts = []
        for column in self.points().T:
            signs = np.sign(column)
            signs = signs[signs != 0]
            counts.append(int(np.count_nonzero(signs[1:] != signs[:-1])))
        return tuple(counts)
