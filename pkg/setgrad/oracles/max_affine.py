"""Max-affine functions and their exact set gradients on regions.

The Clarke set gradient of f = max_k g_k over a region A is the hull of the
slopes of every piece that is maximal somewhere on A, so the work here is
deciding piece activity region by region.
"""
from __future__ import annotations

import logging
from typing import Optional, Union

import numpy as np
from scipy.optimize import linprog, minimize

from setgrad.constants.numerics import ACTIVITY_TOL
from setgrad.exceptions import InputError, UnsupportedError
from setgrad.models.regions import BallRegion, BoxRegion, Region, SegmentRegion
from setgrad.norms import NormSpec, as_vector, dual_norm_value, norm_value

from .base import FunctionOracle, MaxAffineSpec

logger = logging.getLogger(__name__)

# Relative slack for the nearest-point test on smooth balls
_BALL_INCLUSION_SLACK = 1e-9


def interval_mask(alphas: np.ndarray, betas: np.ndarray, open_start: bool, open_end: bool) -> np.ndarray:
    """Row-wise: is {tau in [0,1] : alphas*tau + betas >= 0} nonempty?

    ``open_start``/``open_end`` drop tau=0 / tau=1 from the parameter range.
    Comparisons are exact so that open ends are honoured.
    """
    alphas = np.atleast_2d(alphas)
    betas = np.atleast_2d(betas)
    with np.errstate(divide="ignore", invalid="ignore"):
        roots = -betas / alphas
    lo = np.max(np.where(alphas > 0, roots, 0.0), axis=1, initial=0.0)
    hi = np.min(np.where(alphas < 0, roots, 1.0), axis=1, initial=1.0)
    blocked = np.any((alphas == 0) & (betas < 0), axis=1)
    touching = (lo == hi) & ~((lo == 0.0) & open_start) & ~((hi == 1.0) & open_end)
    return ~blocked & ((lo < hi) | touching)


def _linf_bounds(center: np.ndarray, radius: float):
    return [(float(c - radius), float(c + radius)) for c in center]


def _lp_piece_active(
    slopes: np.ndarray,
    offsets: np.ndarray,
    k: int,
    bounds,
    l1_ball: Optional[BallRegion] = None,
) -> bool:
    """Maximise s subject to g_j(x) + s <= g_k(x) for all j and x in the region."""
    n = slopes.shape[1]
    others = np.arange(slopes.shape[0]) != k
    G = slopes[others] - slopes[k]
    h = offsets[k] - offsets[others]
    A = np.hstack([G, np.ones((G.shape[0], 1))])
    rhs = h
    var_bounds = list(bounds) + [(None, 1.0)]
    if l1_ball is not None:
        center = l1_ball.center_vector
        eye = np.eye(n)
        A = np.hstack([A, np.zeros((A.shape[0], n))])
        upper = np.hstack([eye, np.zeros((n, 1)), -eye])
        lower = np.hstack([-eye, np.zeros((n, 1)), -eye])
        budget = np.hstack([np.zeros(n + 1), np.ones(n)]).reshape(1, -1)
        A = np.vstack([A, upper, lower, budget])
        rhs = np.concatenate([rhs, center, -center, [l1_ball.radius]])
        var_bounds += [(0.0, None)] * n
    objective = np.zeros(A.shape[1])
    objective[n] = -1.0
    result = linprog(objective, A_ub=A, b_ub=rhs, bounds=var_bounds, method="highs")
    if result.status != 0:
        return False
    return -result.fun >= -ACTIVITY_TOL


def _nearest_point_distance(
    slopes: np.ndarray, offsets: np.ndarray, k: int, center: np.ndarray, spec: NormSpec
) -> Optional[float]:
    """Distance in ``spec`` from ``center`` to the cell where piece k is maximal."""
    others = np.arange(slopes.shape[0]) != k
    G = slopes[others] - slopes[k]
    h = offsets[k] - offsets[others]
    p = spec.exponent

    def objective(x):
        return float(np.sum(np.abs(x - center) ** p) / p)

    def jacobian(x):
        d = x - center
        return np.sign(d) * np.abs(d) ** (p - 1.0)

    constraint = {"type": "ineq", "fun": lambda x: h - G @ x, "jac": lambda x: -G}
    result = minimize(
        objective,
        center,
        jac=jacobian,
        constraints=[constraint],
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    if not result.success or np.max(G @ result.x - h) > 1e-9:
        return None
    return norm_value(result.x - center, spec)


class MaxAffineOracle(FunctionOracle):
    """f(x) = max_k <c_k, x> + b_k with pieces kept in lexicographic slope order.

    ``grad_ae`` returns the slope of the lexicographically first maximal piece.
    """

    name = "max_affine"

    def __init__(self, slopes, offsets, name: Optional[str] = None, params=None) -> None:
        slopes = np.atleast_2d(np.asarray(slopes, dtype=float))
        offsets = np.asarray(offsets, dtype=float).reshape(-1)
        if slopes.shape[0] != offsets.shape[0] or slopes.shape[0] == 0:
            raise InputError("max-affine function needs matching, nonempty slopes and offsets")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(offsets))):
            raise InputError("max-affine pieces must be finite")
        super().__init__(slopes.shape[1], params)
        if name:
            self.name = name
        keys = [offsets] + [slopes[:, i] for i in reversed(range(slopes.shape[1]))]
        order = np.lexsort(keys)
        self.slopes = slopes[order]
        self.offsets = offsets[order]
        self.slopes.setflags(write=False)
        self.offsets.setflags(write=False)

    @classmethod
    def from_spec(cls, spec: MaxAffineSpec, name: Optional[str] = None) -> "MaxAffineOracle":
        return cls(spec.slopes(), spec.offsets(), name=name, params={"pieces": len(spec.pieces)})

    @property
    def piece_count(self) -> int:
        return self.slopes.shape[0]

    def to_spec(self) -> MaxAffineSpec:
        return MaxAffineSpec.from_arrays(self.slopes, self.offsets)

    def eval(self, x) -> float:
        point = self._point(x)
        return float(np.max(self.slopes @ point + self.offsets))

    def grad_ae(self, x) -> np.ndarray:
        point = self._point(x)
        return self.slopes[int(np.argmax(self.slopes @ point + self.offsets))].copy()

    def grad_batch(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = points @ self.slopes.T + self.offsets
        return self.slopes[np.argmax(values, axis=1)]

    @property
    def has_exact(self) -> bool:
        return True

    def active_mask(self, region: Region) -> np.ndarray:
        """Boolean mask of the pieces maximal somewhere on ``region``."""
        if region.dim != self.dim:
            raise InputError(f"region dimension {region.dim} does not match {self.name} dimension {self.dim}")
        if self.piece_count == 1:
            return np.ones(1, dtype=bool)
        if isinstance(region, SegmentRegion):
            return self._active_on_segment(region)
        if isinstance(region, BoxRegion):
            return self._active_on_box(region)
        if isinstance(region, BallRegion):
            return self._active_on_ball(region)
        raise UnsupportedError(f"unsupported region type {type(region).__name__}")

    def _values_at(self, point: np.ndarray) -> np.ndarray:
        return self.slopes @ point + self.offsets

    def _active_on_segment(self, segment: SegmentRegion) -> np.ndarray:
        rates = self.slopes @ segment.direction
        values = self._values_at(np.array(segment.start))
        alphas = rates[:, None] - rates[None, :]
        betas = values[:, None] - values[None, :]
        return interval_mask(alphas, betas, segment.open_start, segment.open_end)

    def _active_at(self, point: np.ndarray) -> np.ndarray:
        values = self._values_at(point)
        return values >= np.max(values) - ACTIVITY_TOL

    def _active_on_box(self, box: BoxRegion) -> np.ndarray:
        lower, upper = np.array(box.lower), np.array(box.upper)
        mask = self._active_at((lower + upper) / 2.0)
        bounds = list(zip(lower, upper))
        for k in np.flatnonzero(~mask):
            mask[k] = _lp_piece_active(self.slopes, self.offsets, int(k), bounds)
        return mask

    def _active_on_ball(self, ball: BallRegion) -> np.ndarray:
        center = ball.center_vector
        mask = self._active_at(center)
        if ball.radius == 0.0:
            return mask
        values = self._values_at(center)
        for k in np.flatnonzero(~mask):
            k = int(k)
            reach = np.array(
                [
                    values[k] - values[j] + ball.radius * dual_norm_value(self.slopes[k] - self.slopes[j], ball.norm)
                    if j != k and np.any(self.slopes[k] != self.slopes[j])
                    else values[k] - values[j]
                    for j in range(self.piece_count)
                ]
            )
            if np.any(reach < -ACTIVITY_TOL):
                continue
            if ball.norm.polyhedral:
                if ball.norm.kind == "linf":
                    mask[k] = _lp_piece_active(self.slopes, self.offsets, k, _linf_bounds(center, ball.radius))
                else:
                    mask[k] = _lp_piece_active(
                        self.slopes, self.offsets, k, [(None, None)] * self.dim, l1_ball=ball
                    )
                continue
            if self.piece_count == 2:
                mask[k] = True
                continue
            distance = _nearest_point_distance(self.slopes, self.offsets, k, center, ball.norm)
            if distance is None:
                # Every p-ball sits inside the sup-ball of the same radius
                logger.debug("nearest-point solve failed for piece %s; using sup-ball relaxation", k)
                mask[k] = _lp_piece_active(self.slopes, self.offsets, k, _linf_bounds(center, ball.radius))
            else:
                mask[k] = distance <= ball.radius * (1.0 + _BALL_INCLUSION_SLACK) + ACTIVITY_TOL
        return mask

    def exact_region_subdiff(self, region: Region) -> np.ndarray:
        return self.slopes[self.active_mask(region)].copy()

    def lipschitz_bound(self, center, radius: float, norm: NormSpec) -> float:
        active = self.exact_region_subdiff(BallRegion(self._point(center), radius, norm))
        return max(dual_norm_value(row, norm) for row in active)


def exact_ball_subdiff_piecewise_affine(
    target: Union[MaxAffineSpec, FunctionOracle], x, eps: float, norm: Optional[NormSpec] = None
) -> np.ndarray:
    """Exact vertex set of the set gradient of a max-affine function on B(x, eps).

    Raises:
        UnsupportedError: ``target`` is an oracle without an exact set gradient.
        InputError: eps < 0 or dimensions disagree.
    """
    if eps < 0:
        raise InputError(f"eps must be >= 0, got {eps}")
    norm = norm or NormSpec.euclidean()
    if isinstance(target, MaxAffineSpec):
        target = MaxAffineOracle.from_spec(target)
    if not target.has_exact:
        raise UnsupportedError(f"{target.name} is not piecewise affine")
    return target.exact_ball_subdiff(as_vector(x, "x"), eps, norm)
