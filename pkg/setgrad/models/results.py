"""Solver results and descent certificates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from setgrad.norms import NormSpec


@dataclass(frozen=True, eq=False)
class MinNormResult:
    """Minimal (dual) norm element of a hull with its simplex weights.

    ``dual_direction`` is a unit primal u whose bound min_i <a_i, u> lies
    within ``tolerance_achieved`` of ``norm_value``. It is None under the
    euclidean norm and when that bound is 0.
    """

    point: np.ndarray
    coefficients: np.ndarray
    norm_value: float
    tolerance_achieved: float
    norm: NormSpec = field(default_factory=NormSpec.euclidean)
    iterations: int = 0
    dual_direction: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "point": [float(v) for v in self.point],
            "norm_value": float(self.norm_value),
            "coefficients": [float(v) for v in self.coefficients],
            "tolerance_achieved": float(self.tolerance_achieved),
            "norm": str(self.norm),
            "iterations": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class CandidateDirection:
    """A unit direction tried during selection and its support value."""

    direction: np.ndarray
    support: float


@dataclass(frozen=True, eq=False)
class DescentCertificate:
    """Minimal-norm element, the optimal direction and its checks.

    ``direction`` is None when ``a_min_norm <= sigma`` (approximate
    stationarity on the region).
    """

    a_min: np.ndarray
    a_min_norm: float
    direction: Optional[np.ndarray]
    directional_value: Optional[float]
    stability_radius: float
    pairing_residual: Optional[float]
    norm: NormSpec
    lipschitz: float
    candidates: Tuple[CandidateDirection, ...] = ()

    @property
    def has_direction(self) -> bool:
        return self.direction is not None


@dataclass(frozen=True)
class ApproxQualityReport:
    """Outcome of perturbing the minimal element inside the hull."""

    tau: float
    delta: float
    a_min_norm: float
    trials: int
    min_support: Optional[float]
    max_support: Optional[float]
    violations: int

    @property
    def violation_fraction(self) -> float:
        return self.violations / self.trials if self.trials else 0.0
