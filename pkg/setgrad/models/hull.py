"""Finite point sets whose convex hull represents a set gradient."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from setgrad.constants.numerics import DEDUP_TOL
from setgrad.exceptions import InputError
from setgrad.norms import NormSpec, row_norms

PROVENANCE_EXACT = "exact"
PROVENANCE_SAMPLED = "sampled"


@dataclass(frozen=True)
class Provenance:
    """Where the points of a hull came from."""

    kind: str = PROVENANCE_EXACT
    samples: int = 0
    seed: Optional[int] = None

    @classmethod
    def exact(cls) -> "Provenance":
        return cls(PROVENANCE_EXACT)

    @classmethod
    def sampled(cls, samples: int, seed: Optional[int]) -> "Provenance":
        return cls(PROVENANCE_SAMPLED, samples, seed)

    @property
    def is_exact(self) -> bool:
        return self.kind == PROVENANCE_EXACT

    def to_dict(self) -> dict:
        return {"kind": self.kind, "samples": self.samples, "seed": self.seed}


def deduplicate(points: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    """Drop rows within ``tol`` (max-abs) of an earlier row; order is kept."""
    unique = []
    for row in points:
        if unique:
            stacked = np.asarray(unique)
            if np.any(np.max(np.abs(stacked - row), axis=1) <= tol):
                continue
        unique.append(row)
    return np.array(unique)


@dataclass(frozen=True, eq=False)
class HullSet:
    """Nonempty, duplicate-free set of dual vectors, one per row."""

    points: np.ndarray
    provenance: Provenance = field(default_factory=Provenance.exact)

    def __post_init__(self) -> None:
        arr = np.asarray(self.points, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise InputError("a hull needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise InputError("hull points must be finite")
        arr = deduplicate(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @classmethod
    def of(cls, *points, provenance: Optional[Provenance] = None) -> "HullSet":
        """Convenience constructor: ``HullSet.of((1, 0.01), (-1, 0.01))``."""
        return cls(np.array(points, dtype=float), provenance or Provenance.exact())

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def max_dual_norm(self, spec: NormSpec) -> float:
        """Largest dual norm over the points: a Lipschitz rank of the support function."""
        return float(np.max(row_norms(self.points, spec.dual())))

    def diameter(self) -> float:
        diffs = self.points[:, None, :] - self.points[None, :, :]
        return float(np.max(np.linalg.norm(diffs, axis=2)))

    def translated(self, shift) -> "HullSet":
        return HullSet(self.points + np.asarray(shift, dtype=float), self.provenance)

    def scaled(self, factor: float) -> "HullSet":
        return HullSet(self.points * float(factor), self.provenance)
