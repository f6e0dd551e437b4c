"""Regions A on which set gradients are taken: balls, segments and boxes."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from setgrad.exceptions import InputError
from setgrad.norms import NormSpec, as_vector, norm_value, sample_ball


def _frozen_vector(values, name: str) -> Tuple[float, ...]:
    return tuple(float(v) for v in as_vector(values, name))


@dataclass(frozen=True)
class BallRegion:
    """Closed ball of radius ``radius`` around ``center`` in ``norm``."""

    center: Tuple[float, ...]
    radius: float
    norm: NormSpec = field(default_factory=NormSpec.euclidean)

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _frozen_vector(self.center, "center"))
        radius = float(self.radius)
        if not math.isfinite(radius) or radius < 0.0:
            raise InputError(f"ball radius must be finite and >= 0, got {self.radius}")
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_vector(self) -> np.ndarray:
        return np.array(self.center)

    def contains(self, x, slack: float = 0.0) -> bool:
        return norm_value(as_vector(x) - self.center_vector, self.norm) <= self.radius + slack

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return sample_ball(self.center_vector, self.radius, self.norm, count, rng)

    def anchors(self) -> np.ndarray:
        return self.center_vector.reshape(1, -1)


@dataclass(frozen=True)
class SegmentRegion:
    """Segment from ``start`` to ``end``; either end may be open."""

    start: Tuple[float, ...]
    end: Tuple[float, ...]
    open_start: bool = False
    open_end: bool = False

    def __post_init__(self) -> None:
        start = _frozen_vector(self.start, "start")
        end = _frozen_vector(self.end, "end")
        if len(start) != len(end):
            raise InputError("segment end points differ in dimension")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    @classmethod
    def interval(cls, low: float, high: float, open_low: bool = False, open_high: bool = False) -> "SegmentRegion":
        """One-dimensional interval, e.g. ``interval(0, 1, open_low=True)`` for ]0,1]."""
        return cls((low,), (high,), open_low, open_high)

    @property
    def dim(self) -> int:
        return len(self.start)

    @property
    def direction(self) -> np.ndarray:
        return np.array(self.end) - np.array(self.start)

    def point_at(self, tau: float) -> np.ndarray:
        return np.array(self.start) + tau * self.direction

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        taus = rng.uniform(0.0, 1.0, size=count)
        return np.array(self.start) + taus[:, None] * self.direction

    def anchors(self) -> np.ndarray:
        taus = [0.5]
        if not self.open_start:
            taus.append(0.0)
        if not self.open_end:
            taus.append(1.0)
        return np.array([self.point_at(t) for t in taus])


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned box [lower, upper]."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self) -> None:
        lower = _frozen_vector(self.lower, "lower")
        upper = _frozen_vector(self.upper, "upper")
        if len(lower) != len(upper):
            raise InputError("box bounds differ in dimension")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise InputError("box lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(np.array(self.lower), np.array(self.upper), size=(count, self.dim))

    def anchors(self) -> np.ndarray:
        lower, upper = np.array(self.lower), np.array(self.upper)
        rows = [(lower + upper) / 2.0]
        if self.dim <= 10:
            for pick in itertools.product((False, True), repeat=self.dim):
                rows.append(np.where(pick, upper, lower))
        return np.array(rows)


Region = Union[BallRegion, SegmentRegion, BoxRegion]
