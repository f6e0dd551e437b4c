"""Separable functions f(x) = <l, x> + sum_i w_i |x_i| with closed-form piece activity."""
from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from setgrad.constants.numerics import ACTIVITY_TOL, MAX_SIGN_PATTERN_DIM
from setgrad.exceptions import InputError
from setgrad.models.regions import BallRegion, BoxRegion, Region, SegmentRegion
from setgrad.norms import as_vector, row_norms

from .max_affine import MaxAffineOracle, interval_mask


class SeparableAbsOracle(MaxAffineOracle):
    """Each sign orthant of the weighted coordinates is one affine piece.

    A piece is maximal exactly on its closed orthant, so activity on a ball
    reduces to the distance from the center to that orthant, which for any
    p-norm is the norm of the sign violations.
    """

    name = "weighted_abs"

    def __init__(self, linear, weights, name: Optional[str] = None, params=None) -> None:
        linear = as_vector(linear, "linear")
        weights = as_vector(weights, "weights")
        if linear.shape != weights.shape:
            raise InputError("linear part and weights differ in dimension")
        if np.any(weights < 0):
            raise InputError("weights must be >= 0")
        support = np.flatnonzero(weights > 0)
        if support.size > MAX_SIGN_PATTERN_DIM:
            raise InputError(f"at most {MAX_SIGN_PATTERN_DIM} weighted coordinates are supported")
        combos = list(itertools.product((-1.0, 1.0), repeat=support.size))
        signs = np.array(combos, dtype=float).reshape(len(combos), support.size)
        slopes = np.tile(linear, (len(combos), 1))
        slopes[:, support] += weights[support] * signs
        super().__init__(slopes, np.zeros(len(combos)), name=name, params=params)
        self.linear = linear
        self.weights = weights
        self.support = support
        self.signs = np.sign(self.slopes[:, support] - linear[support])

    def eval(self, x) -> float:
        point = self._point(x)
        return float(self.linear @ point + self.weights @ np.abs(point))

    def grad_ae(self, x) -> np.ndarray:
        point = self._point(x)
        grad = self.linear.copy()
        grad[self.support] += self.weights[self.support] * np.where(point[self.support] > 0, 1.0, -1.0)
        return grad

    def grad_batch(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        grads = np.tile(self.linear, (points.shape[0], 1))
        grads[:, self.support] += self.weights[self.support] * np.where(points[:, self.support] > 0, 1.0, -1.0)
        return grads

    def active_mask(self, region: Region) -> np.ndarray:
        if region.dim != self.dim:
            raise InputError(f"region dimension {region.dim} does not match {self.name} dimension {self.dim}")
        if isinstance(region, BallRegion):
            center = region.center_vector[self.support]
            violations = np.maximum(0.0, -self.signs * center)
            return row_norms(violations, region.norm) <= region.radius + ACTIVITY_TOL
        if isinstance(region, SegmentRegion):
            start = np.array(region.start)[self.support]
            alphas = self.signs * region.direction[self.support]
            betas = self.signs * start
            return interval_mask(alphas, betas, region.open_start, region.open_end)
        if isinstance(region, BoxRegion):
            lower = np.array(region.lower)[self.support]
            upper = np.array(region.upper)[self.support]
            feasible = np.where(self.signs > 0, upper >= 0, lower <= 0)
            return np.all(feasible, axis=1)
        return super().active_mask(region)
