"""Function oracle interface and the registry entry type for built-ins."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Tuple

import numpy as np

from setgrad.exceptions import InputError, UnsupportedError
from setgrad.models.regions import BallRegion, Region
from setgrad.norms import NormSpec, as_vector


class FunctionOracle(ABC):
    """Locally Lipschitz f: R^n -> R that can be evaluated and differentiated a.e.

    Subclasses that know the exact Clarke set gradient on a region override
    ``exact_region_subdiff`` and report ``has_exact``.
    """

    name: str = "oracle"

    def __init__(self, dim: int, params: Optional[Mapping] = None) -> None:
        if dim < 1:
            raise InputError("oracle dimension must be >= 1")
        self.dim = dim
        self.params = dict(params or {})

    def _point(self, x) -> np.ndarray:
        point = as_vector(x, "x")
        if point.shape[0] != self.dim:
            raise InputError(f"{self.name} expects dimension {self.dim}, got {point.shape[0]}")
        return point

    @abstractmethod
    def eval(self, x) -> float:
        """f(x)."""

    @abstractmethod
    def grad_ae(self, x) -> np.ndarray:
        """An element of the Clarke subdifferential at x; the gradient wherever f is differentiable."""

    @abstractmethod
    def lipschitz_bound(self, center, radius: float, norm: NormSpec) -> float:
        """Lipschitz constant of f on the ball B(center, radius) in ``norm``."""

    def grad_batch(self, points: np.ndarray) -> np.ndarray:
        return np.array([self.grad_ae(row) for row in np.atleast_2d(points)])

    @property
    def has_exact(self) -> bool:
        return False

    def exact_region_subdiff(self, region: Region) -> np.ndarray:
        raise UnsupportedError(f"{self.name} has no exact set gradient")

    def exact_ball_subdiff(self, x, eps: float, norm: NormSpec) -> np.ndarray:
        """Vertices whose hull is the set gradient on the closed ball B(x, eps)."""
        return self.exact_region_subdiff(BallRegion(self._point(x), eps, norm))

    def describe(self) -> dict:
        return {"fn": self.name, "dim": self.dim, **self.params}


@dataclass(frozen=True)
class MaxAffineSpec:
    """Pieces (slope, offset) of f(x) = max_k <slope_k, x> + offset_k."""

    pieces: Tuple[Tuple[Tuple[float, ...], float], ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise InputError("max-affine spec needs at least one piece")
        normalized = []
        for slope, offset in self.pieces:
            vector = tuple(float(v) for v in as_vector(slope, "slope"))
            value = float(offset)
            if not np.isfinite(value):
                raise InputError("piece offsets must be finite")
            normalized.append((vector, value))
        if len({len(slope) for slope, _ in normalized}) != 1:
            raise InputError("all pieces must share one dimension")
        object.__setattr__(self, "pieces", tuple(normalized))

    @classmethod
    def from_arrays(cls, slopes, offsets) -> "MaxAffineSpec":
        slopes = np.atleast_2d(np.asarray(slopes, dtype=float))
        offsets = np.asarray(offsets, dtype=float).reshape(-1)
        if slopes.shape[0] != offsets.shape[0]:
            raise InputError("number of slopes and offsets differ")
        return cls(tuple((tuple(row), b) for row, b in zip(slopes, offsets)))

    @property
    def dim(self) -> int:
        return len(self.pieces[0][0])

    def slopes(self) -> np.ndarray:
        return np.array([slope for slope, _ in self.pieces])

    def offsets(self) -> np.ndarray:
        return np.array([offset for _, offset in self.pieces])

    def to_dict(self) -> dict:
        return {"pieces": [{"c": list(slope), "b": offset} for slope, offset in self.pieces]}


@dataclass(order=True)
class OracleSource:
    """Registry entry describing one built-in function."""

    order: int
    key: str
    name: str
    description: str
    params: Tuple[str, ...] = field(default=(), compare=False)
    factory: Callable[..., FunctionOracle] = field(compare=False, default=None)
