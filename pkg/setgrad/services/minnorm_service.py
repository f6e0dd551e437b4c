"""Minimal-norm elements of finite convex hulls.

Euclidean hulls use Wolfe's corral method. Under l1 and linf the smallest dual
norm over the simplex of hull weights is a linear program solved with HiGHS.
Other p-norms start from averaged projected subgradient steps on the simplex
and are polished with SLSQP. Every answer is certified by the lower bound
min_i <a_i, u> of a unit primal direction u, which is maximised as a second
program.
"""
from __future__ import annotations

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog, minimize, nnls

from config import config
from setgrad.constants.numerics import ACTIVITY_TOL, MAX_SPHERE_SAMPLING_DIM, WOLFE_MAX_MAJOR
from setgrad.exceptions import ConvergenceFailure, InputError
from setgrad.models.hull import HullSet
from setgrad.models.results import MinNormResult
from setgrad.norms import (
    NormSpec,
    ball_vertices,
    dual_map,
    dual_norm_value,
    norm_value,
    row_norms,
    unit_sphere_samples,
)
from setgrad.norms.spec import KIND_EUCLIDEAN, KIND_L1, KIND_LINF
from setgrad.utils.random_streams import substream

logger = logging.getLogger(__name__)

# Corral and solver weights below this are dropped
_WEIGHT_FLOOR = 1e-15
# Averaged subgradient steps before the SLSQP polish
_WARM_START_ITERS = 50
# Points within this (relative) of the lower bound are active at the optimum
_ACTIVE_SLACK = 1e-9
_HIGHS_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}
_SLSQP_FTOL = 1e-15


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``v`` onto {w : w >= 0, sum(w) = 1}."""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ranks = np.arange(1, v.size + 1)
    rho = np.nonzero(u - cumulative / ranks > 0)[0][-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _affine_minimizer(corral: np.ndarray) -> np.ndarray:
    """Weights mu with sum 1 minimising |mu @ corral| (least squares KKT solve)."""
    k = corral.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = corral @ corral.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    mu = solution[:k]
    return mu / np.sum(mu)


def _wolfe_result(points: np.ndarray, corral: list, weights: np.ndarray, iterations: int) -> MinNormResult:
    coefficients = np.zeros(points.shape[0])
    coefficients[corral] = weights
    point = coefficients @ points
    gap = float(point @ point - np.min(points @ point))
    return MinNormResult(
        point=point,
        coefficients=coefficients,
        norm_value=float(np.linalg.norm(point)),
        tolerance_achieved=max(gap, 0.0),
        norm=NormSpec.euclidean(),
        iterations=iterations,
    )


def _stalled(best: MinNormResult, tol: float, scale: float) -> MinNormResult:
    # rounding can stop progress just above tol; accept within three orders of magnitude
    if best.tolerance_achieved <= 1e3 * tol * scale:
        logger.warning(
            "Wolfe stopped at rounding level: gap %.3e exceeds tol %.1e, returning the last corral",
            best.tolerance_achieved,
            tol * scale,
        )
        return best
    raise ConvergenceFailure(f"Wolfe stalled with optimality gap {best.tolerance_achieved:.3e}", best=best)


def min_norm_point_euclidean(hull: HullSet, tol: Optional[float] = None) -> MinNormResult:
    """Euclidean projection of 0 onto conv(hull) with its simplex weights.

    Stops once <a_min, a_i - a_min> >= -tol for every hull point a_i.

    Raises:
        ConvergenceFailure: a major cycle made no progress; ``best`` holds the
            last iterate.
    """
    tol = config.MIN_NORM_TOL if tol is None else tol
    if tol <= 0:
        raise InputError(f"tolerance must be > 0, got {tol}")
    points = hull.points
    start = int(np.argmin(np.einsum("ij,ij->i", points, points)))
    corral = [start]
    weights = np.ones(1)
    x = points[start].copy()
    scale = max(1.0, float(np.max(np.einsum("ij,ij->i", points, points))))

    for major in range(1, WOLFE_MAX_MAJOR + 1):
        dots = points @ x
        j = int(np.argmin(dots))
        if dots[j] - x @ x >= -tol:
            return _wolfe_result(points, corral, weights, major)
        if j in corral:
            return _stalled(_wolfe_result(points, corral, weights, major), tol, scale)
        corral.append(j)
        weights = np.append(weights, 0.0)

        while True:
            mu = _affine_minimizer(points[corral])
            if np.all(mu > _WEIGHT_FLOOR):
                weights = mu
                break
            shrinking = mu < weights
            ratios = weights[shrinking] / (weights[shrinking] - mu[shrinking])
            candidates = ratios[mu[shrinking] <= _WEIGHT_FLOOR]
            step = float(np.min(candidates)) if candidates.size else 1.0
            weights = step * mu + (1.0 - step) * weights
            keep = weights > _WEIGHT_FLOOR
            corral = [index for index, kept in zip(corral, keep) if kept]
            weights = weights[keep] / np.sum(weights[keep])
        previous = float(x @ x)
        x = weights @ points[corral]
        if float(x @ x) >= previous:
            return _stalled(_wolfe_result(points, corral, weights, major), tol, scale)

    best = _wolfe_result(points, corral, weights, WOLFE_MAX_MAJOR)
    raise ConvergenceFailure("Wolfe exceeded its major-cycle budget", best=best)


def support_vertex(a: np.ndarray, spec: NormSpec) -> np.ndarray:
    """One unit primal vector u with <a, u> = dual norm of a (u = 0 for a = 0)."""
    if not np.any(a):
        return np.zeros_like(a)
    if spec.kind == KIND_L1:
        index = int(np.argmax(np.abs(a)))
        vertex = np.zeros_like(a)
        vertex[index] = np.sign(a[index])
        return vertex
    if spec.kind == KIND_LINF:
        return np.where(a >= 0, 1.0, -1.0)
    return dual_map(a, spec)


def _clean_weights(raw: np.ndarray) -> Optional[np.ndarray]:
    weights = np.where(raw > _WEIGHT_FLOOR, raw, 0.0)
    total = float(np.sum(weights))
    if total <= 0.0:
        return None
    return weights / total


def _solve_lp(objective: np.ndarray, max_iters: int, **constraints):
    result = linprog(objective, method="highs", options={**_HIGHS_OPTIONS, "maxiter": max_iters}, **constraints)
    if result.status != 0:
        raise ConvergenceFailure(f"dual-norm linear program stopped: {result.message}")
    return result


def _polyhedral_weights(points: np.ndarray, spec: NormSpec, max_iters: int) -> Tuple[np.ndarray, int]:
    """Simplex weights minimising the linf (spec l1) or l1 (spec linf) norm of w @ points."""
    count, dim = points.shape
    # |a_j| <= t for every j, or |a_j| <= s_j with sum(s) minimised
    width = 1 if spec.kind == KIND_L1 else dim
    slack = np.ones((dim, 1)) if spec.kind == KIND_L1 else np.eye(dim)
    objective = np.concatenate([np.zeros(count), np.ones(width)])
    result = _solve_lp(
        objective,
        max_iters,
        A_ub=np.block([[points.T, -slack], [-points.T, -slack]]),
        b_ub=np.zeros(2 * dim),
        A_eq=np.concatenate([np.ones(count), np.zeros(width)]).reshape(1, -1),
        b_eq=[1.0],
        bounds=[(0.0, None)] * (count + width),
    )
    weights = _clean_weights(result.x[:count])
    if weights is None:
        raise ConvergenceFailure("dual-norm linear program returned no weight")
    return weights, int(result.nit)


def _polyhedral_bound(points: np.ndarray, spec: NormSpec, max_iters: int) -> Tuple[np.ndarray, int]:
    """Unit u maximising min_i <a_i, u> over the l1 or linf ball."""
    count, dim = points.shape
    if spec.kind == KIND_LINF:
        A_ub = np.hstack([-points, np.ones((count, 1))])
        b_ub = np.zeros(count)
        bounds = [(-1.0, 1.0)] * dim + [(None, None)]
    else:
        # u = p - q with p, q >= 0 and sum(p + q) <= 1
        A_ub = np.vstack([
            np.hstack([-points, points, np.ones((count, 1))]),
            np.concatenate([np.ones(2 * dim), [0.0]]),
        ])
        b_ub = np.concatenate([np.zeros(count), [1.0]])
        bounds = [(0.0, None)] * (2 * dim) + [(None, None)]
    objective = np.zeros(A_ub.shape[1])
    objective[-1] = -1.0
    result = _solve_lp(objective, max_iters, A_ub=A_ub, b_ub=b_ub, bounds=bounds)
    if spec.kind == KIND_LINF:
        return result.x[:dim], int(result.nit)
    return result.x[:dim] - result.x[dim:2 * dim], int(result.nit)


def _averaged_subgradient(points: np.ndarray, spec: NormSpec, iterations: int) -> np.ndarray:
    """Projected subgradient steps of length 1/sqrt(k) on the simplex; the better of last and average."""
    count = points.shape[0]
    weights = np.full(count, 1.0 / count)
    average = weights.copy()
    for k in range(1, iterations + 1):
        slope = points @ support_vertex(weights @ points, spec)
        slope -= np.mean(slope)
        size = float(np.linalg.norm(slope))
        if size == 0.0:
            break
        weights = project_to_simplex(weights - slope / (size * np.sqrt(k)))
        average += (weights - average) / (k + 1)
    return min((weights, average), key=lambda w: dual_norm_value(w @ points, spec))


def _polish_weights(points: np.ndarray, spec: NormSpec, start: np.ndarray, max_iters: int) -> Tuple[np.ndarray, int]:
    """SLSQP on the simplex for half the squared dual norm of w @ points."""

    def objective(w):
        a = w @ points
        value = dual_norm_value(a, spec)
        return 0.5 * value * value, value * (points @ support_vertex(a, spec))

    simplex = {"type": "eq", "fun": lambda w: np.sum(w) - 1.0, "jac": lambda w: np.ones_like(w)}
    result = minimize(
        objective,
        start,
        jac=True,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * start.size,
        constraints=[simplex],
        options={"ftol": _SLSQP_FTOL, "maxiter": max_iters},
    )
    weights = _clean_weights(np.asarray(result.x, dtype=float))
    if weights is None or not np.all(np.isfinite(weights)):
        return start, int(result.nit)
    return weights, int(result.nit)


def _polish_bound(points: np.ndarray, spec: NormSpec, start: np.ndarray, max_iters: int) -> Tuple[np.ndarray, int]:
    """SLSQP for max z subject to z <= <a_i, u> and sum_j |u_j|^p <= 1, from a unit ``start``."""
    count, dim = points.shape
    p = spec.exponent
    lifted = np.hstack([points, -np.ones((count, 1))])
    ascent = np.zeros(dim + 1)
    ascent[-1] = -1.0

    def room(v):
        return np.array([1.0 - np.sum(np.abs(v[:dim]) ** p)])

    def room_jac(v):
        u = v[:dim]
        return np.append(-p * np.sign(u) * np.abs(u) ** (p - 1.0), 0.0).reshape(1, -1)

    constraints = [
        {"type": "ineq", "fun": lambda v: lifted @ v, "jac": lambda v: lifted},
        {"type": "ineq", "fun": room, "jac": room_jac},
    ]
    result = minimize(
        lambda v: (-v[-1], ascent),
        np.append(start, float(np.min(points @ start))),
        jac=True,
        method="SLSQP",
        constraints=constraints,
        options={"ftol": _SLSQP_FTOL, "maxiter": max_iters},
    )
    u = np.asarray(result.x, dtype=float)[:dim]
    if not np.all(np.isfinite(u)):
        return start, int(result.nit)
    return u, int(result.nit)


def _certified_bound(points: np.ndarray, spec: NormSpec, u: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
    """(max(0, min_i <a_i, u>), u) with u rescaled onto the unit sphere; (0, None) for u = 0."""
    if not np.any(u):
        return 0.0, None
    unit = u / norm_value(u, spec)
    return max(0.0, float(np.min(points @ unit))), unit


def _active_set_weights(points: np.ndarray, spec: NormSpec, u: Optional[np.ndarray], lower: float, scale: float):
    """Weights on the points active at u whose combination is lower * j(u), by NNLS.

    With no positive bound every point is active and the target is 0.
    """
    count, dim = points.shape
    if u is not None and lower > 0.0:
        active = np.flatnonzero(points @ u <= lower + _ACTIVE_SLACK * scale)
        target = lower * dual_map(u, spec.dual())
    else:
        active = np.arange(count)
        target = np.zeros(dim)
    penalty = 1e3 * scale
    system = np.vstack([points[active].T, np.full((1, active.size), penalty)])
    try:
        solution = nnls(system, np.append(target, penalty))[0]
    except RuntimeError as exc:
        logger.debug("active-set polish skipped: %s", exc)
        return None
    weights = np.zeros(count)
    weights[active] = solution
    return _clean_weights(weights)


def _settle(points: np.ndarray, spec: NormSpec, candidates: List[np.ndarray], scale: float) -> Tuple[np.ndarray, float]:
    """Smallest dual norm among weight candidates; earlier candidates win near-ties."""
    values = [dual_norm_value(w @ points, spec) for w in candidates]
    floor = min(values)
    index = next(i for i, value in enumerate(values) if value <= floor + ACTIVITY_TOL * scale)
    return candidates[index], values[index]


def min_dual_norm_point(
    hull: HullSet,
    spec: NormSpec,
    tol: Optional[float] = None,
    max_iters: Optional[int] = None,
) -> MinNormResult:
    """Minimise the dual norm of sum_i w_i a_i over the weight simplex.

    ``tolerance_achieved`` is the gap between the value found and the lower
    bound min_i <a_i, u> of the unit direction u kept in ``dual_direction``.
    The gap must be within tol * max(1, largest dual norm over the hull).
    ``max_iters`` caps the warm start and each solver call.

    Raises:
        InputError: non-positive ``tol`` or ``max_iters``.
        ConvergenceFailure: a linear program failed, or the certified gap is
            above the tolerance; ``best`` then holds the best weights found.
    """
    tol = config.DUAL_NORM_TOL if tol is None else tol
    max_iters = config.DUAL_NORM_MAX_ITERS if max_iters is None else max_iters
    if tol <= 0:
        raise InputError(f"tolerance must be > 0, got {tol}")
    if max_iters < 1:
        raise InputError(f"iteration budget must be >= 1, got {max_iters}")
    points = hull.points
    scale = max(1.0, hull.max_dual_norm(spec))
    # candidates in order of exactness: a single hull point, then solver output
    vertex = np.zeros(len(hull))
    vertex[int(np.argmin(row_norms(points, spec.dual())))] = 1.0

    if spec.polyhedral:
        weights, iterations = _polyhedral_weights(points, spec, max_iters)
        u, bound_iterations = _polyhedral_bound(points, spec, max_iters)
        lower, u = _certified_bound(points, spec, u)
        candidates = [vertex, weights]
    else:
        warm_iterations = min(max_iters, _WARM_START_ITERS)
        warm = _averaged_subgradient(points, spec, warm_iterations)
        weights, iterations = _polish_weights(points, spec, warm, max_iters)
        iterations += warm_iterations
        start = support_vertex(weights @ points, spec)
        lower, u = _certified_bound(points, spec, start)
        bound_iterations = 0
        if u is not None:
            polished, bound_iterations = _polish_bound(points, spec, start, max_iters)
            polished_lower, polished_u = _certified_bound(points, spec, polished)
            if polished_lower > lower:
                lower, u = polished_lower, polished_u
        kkt = _active_set_weights(points, spec, u, lower, scale)
        candidates = [vertex] + ([] if kkt is None else [kkt]) + [weights, warm]

    best_weights, value = _settle(points, spec, candidates, scale)
    best = MinNormResult(
        point=best_weights @ points,
        coefficients=best_weights,
        norm_value=value,
        tolerance_achieved=max(value - lower, 0.0),
        norm=spec,
        iterations=iterations + bound_iterations,
        dual_direction=u if lower > 0.0 else None,
    )
    if best.tolerance_achieved <= tol * scale:
        return best
    raise ConvergenceFailure(
        f"dual-norm solver stopped with gap {best.tolerance_achieved:.3e} > {tol * scale:.1e}", best=best
    )


def min_norm_point(hull: HullSet, spec: Optional[NormSpec] = None, tol: Optional[float] = None) -> MinNormResult:
    """Wolfe for the euclidean norm, the simplex solver for every other norm."""
    spec = spec or NormSpec.euclidean()
    if spec.kind == KIND_EUCLIDEAN:
        return min_norm_point_euclidean(hull, tol)
    return min_dual_norm_point(hull, spec, tol)


def minmax_gap(hull: HullSet, spec: NormSpec, samples: int = 10000, seed: int = 0) -> float:
    """|min over sampled unit h of f°(A; h) + min dual norm over the hull|."""
    if hull.dim > MAX_SPHERE_SAMPLING_DIM:
        raise InputError(f"sphere sampling is limited to dimension {MAX_SPHERE_SAMPLING_DIM}")
    directions = unit_sphere_samples(spec, hull.dim, samples, substream(seed, 0))
    vertices = ball_vertices(spec, hull.dim)
    if vertices.size:
        directions = np.vstack([directions, vertices])
    supports = np.max(directions @ hull.points.T, axis=1)
    value = min_norm_point(hull, spec).norm_value
    gap = abs(float(np.min(supports)) + value)
    logger.debug("minmax gap %.3e for %s points under %s", gap, len(hull), spec)
    return gap
