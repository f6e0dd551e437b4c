"""Optimal descent directions on sets and the eps-shrinking descent loop."""
from __future__ import annotations

import logging
import time
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from setgrad.constants.numerics import ACTIVITY_TOL, MAX_HALVINGS
from setgrad.constants.trace import STATUS_ITER_LIMIT, STATUS_SHRINK, STATUS_STATIONARY, STATUS_STEP
from setgrad.exceptions import ConvergenceFailure, InputError, NonUniqueDualMapError
from setgrad.models.config import DescentConfig
from setgrad.models.hull import HullSet
from setgrad.models.regions import BallRegion
from setgrad.models.results import ApproxQualityReport, CandidateDirection, DescentCertificate
from setgrad.models.trajectory import IterateRecord, Trajectory
from setgrad.norms import NormSpec, as_vector, dual_face, dual_map, dual_norm_value, norm_value
from setgrad.oracles.base import FunctionOracle
from setgrad.utils.random_streams import derive_seed, substream

from .hull_service import build_hull, exact_hull, support_value
from .minnorm_service import min_norm_point

logger = logging.getLogger(__name__)

RecordCallback = Callable[[IterateRecord], None]

# sigma defaults to this multiple of the local Lipschitz bound
SIGMA_FRACTION = 1e-6


def select_direction(
    hull: HullSet,
    a_min,
    spec: NormSpec,
    dual_direction=None,
) -> Tuple[np.ndarray, float, Tuple[CandidateDirection, ...]]:
    """Unit direction h minimising f°(A; h) among -j(a_min), or among -face(a_min).

    Face candidates are scored by their support value on the hull; ties keep
    the first vertex. Under l1/linf a ``dual_direction`` u from the minimal-norm
    solver adds -u as a last candidate. It replaces the best vertex only when
    its support is lower by more than ACTIVITY_TOL times the largest dual norm
    over the hull.
    """
    a = as_vector(a_min, "a_min")
    if spec.strictly_convex():
        h = -dual_map(a, spec)
        value = support_value(hull, h)
        return h, value, (CandidateDirection(h, value),)
    candidates = [CandidateDirection(row, support_value(hull, row)) for row in -dual_face(a, spec)]
    chosen = min(candidates, key=lambda candidate: candidate.support)
    if dual_direction is not None:
        u = as_vector(dual_direction, "dual_direction")
        h = -u / norm_value(u, spec)
        bound = CandidateDirection(h, support_value(hull, h))
        candidates.append(bound)
        if bound.support < chosen.support - ACTIVITY_TOL * max(1.0, hull.max_dual_norm(spec)):
            chosen = bound
    return chosen.direction, chosen.support, tuple(candidates)


def descent_direction(
    hull: HullSet,
    spec: NormSpec,
    sigma: float,
    lipschitz: Optional[float] = None,
) -> DescentCertificate:
    """Certificate (a_min, h, f°(A; h), |a_min|/L) for the hull.

    ``lipschitz`` defaults to the largest dual norm over the hull points.
    No direction is returned when |a_min| <= sigma.

    Raises:
        ConvergenceFailure: from the minimal-norm solver.
        FaceTooLargeError: from dual_face under l1/linf.
    """
    result = min_norm_point(hull, spec)
    a, a_norm = result.point, result.norm_value
    lipschitz = hull.max_dual_norm(spec) if lipschitz is None else lipschitz
    radius = a_norm / lipschitz if lipschitz > 0 else 0.0
    if a_norm <= sigma:
        return DescentCertificate(a, a_norm, None, None, radius, None, spec, lipschitz)
    h, value, candidates = select_direction(hull, a, spec, result.dual_direction)
    pairing = abs(float(a @ h) + a_norm)
    return DescentCertificate(a, a_norm, h, value, radius, pairing, spec, lipschitz, candidates)


def stability_check(h, cert: DescentCertificate, lipschitz: Optional[float] = None) -> bool:
    """Is |h - h_opt| < |a_min| / L, which makes h a descent direction on an exact hull?"""
    if not cert.has_direction:
        raise InputError("certificate carries no direction")
    lipschitz = cert.lipschitz if lipschitz is None else lipschitz
    if lipschitz <= 0:
        raise InputError(f"Lipschitz bound must be > 0, got {lipschitz}")
    return norm_value(as_vector(h, "h") - cert.direction, cert.norm) < cert.a_min_norm / lipschitz


def _segment_reach(a: np.ndarray, target: np.ndarray, bound: float, spec: NormSpec) -> float:
    """Largest s in [0, 1] with |(1 - s) a + s target| <= bound (the norm is convex in s)."""
    if dual_norm_value(target, spec) <= bound:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if dual_norm_value((1.0 - mid) * a + mid * target, spec) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


def approx_direction_quality(
    hull: HullSet,
    spec: NormSpec,
    tau: float,
    delta: float,
    trials: int,
    seed: int = 0,
) -> ApproxQualityReport:
    """Perturb a_min inside the hull within norm |a_min| + tau and score -j(a').

    A trial violates when f°(A; -j(a')) >= -delta |a_min|.
    """
    if not spec.strictly_convex():
        raise NonUniqueDualMapError(f"approximation check needs a strictly convex norm, got {spec}")
    if tau <= 0 or not 0 < delta < 1:
        raise InputError(f"need tau > 0 and 0 < delta < 1, got tau={tau}, delta={delta}")
    result = min_norm_point(hull, spec)
    a, a_norm = result.point, result.norm_value
    if a_norm == 0.0:
        return ApproxQualityReport(tau, delta, a_norm, 0, None, None, 0)
    bound = a_norm + tau
    reach = np.array([_segment_reach(a, point, bound, spec) for point in hull.points])
    rng = substream(seed, 0)
    supports: List[float] = []
    violations = 0
    for _ in range(trials):
        index = int(rng.integers(len(hull)))
        s = float(rng.uniform(0.0, reach[index]))
        perturbed = (1.0 - s) * a + s * hull.points[index]
        if not np.any(perturbed) or dual_norm_value(perturbed, spec) > bound:
            continue
        value = support_value(hull, -dual_map(perturbed, spec))
        supports.append(value)
        if value >= -delta * a_norm:
            violations += 1
    if not supports:
        return ApproxQualityReport(tau, delta, a_norm, 0, None, None, 0)
    return ApproxQualityReport(tau, delta, a_norm, len(supports), min(supports), max(supports), violations)


def sweep_tau(
    hull: HullSet,
    spec: NormSpec,
    delta: float,
    taus: Sequence[float],
    trials: int,
    seed: int = 0,
) -> Tuple[Optional[float], List[ApproxQualityReport]]:
    """Largest tested tau without violations, with every report."""
    reports = [approx_direction_quality(hull, spec, tau, delta, trials, seed) for tau in taus]
    clean = [report.tau for report in reports if report.trials and report.violations == 0]
    return (max(clean) if clean else None), reports


def line_search(
    oracle: FunctionOracle,
    x,
    h,
    fAh: float,
    eps: float,
    armijo: float = 0.5,
    max_halvings: int = MAX_HALVINGS,
) -> float:
    """Backtrack from t = eps by halving until f(x + t h) <= f(x) + armijo t fAh.

    Returns 0.0 when ``max_halvings`` halvings all fail.
    """
    if fAh >= 0:
        raise InputError(f"line search needs a descent value fAh < 0, got {fAh}")
    point, direction = as_vector(x, "x"), as_vector(h, "h")
    fx = oracle.eval(point)
    t = float(eps)
    for _ in range(max_halvings + 1):
        if oracle.eval(point + t * direction) <= fx + armijo * t * fAh:
            return t
        t /= 2.0
    logger.warning("line search failed after %s halvings from t=%s", max_halvings, eps)
    return 0.0


def _record(iteration, x, f, eps, a_norm, h, step, samples, status, started) -> IterateRecord:
    return IterateRecord(
        iter=iteration,
        x=tuple(float(v) for v in x),
        f=float(f),
        eps=None if eps is None else float(eps),
        a_min_norm=None if a_norm is None else float(a_norm),
        direction=None if h is None else tuple(float(v) for v in h),
        step=float(step),
        samples=int(samples),
        status=status,
        wall_time=time.perf_counter() - started,
    )


def run_descent(
    oracle: FunctionOracle,
    x0,
    config: DescentConfig,
    on_record: Optional[RecordCallback] = None,
) -> Trajectory:
    """eps-shrinking descent with set-gradient directions.

    Each row describes one iteration at the point it examined. A run that
    exhausts ``max_iter`` ends with an ``iter_limit`` row at the final point.
    """
    x = as_vector(x0, "x0")
    if x.shape[0] != oracle.dim:
        raise InputError(f"x0 has dimension {x.shape[0]}, {oracle.name} expects {oracle.dim}")
    spec = config.norm_spec
    eps = config.eps0
    fx = oracle.eval(x)
    started = time.perf_counter()
    records: List[IterateRecord] = []

    def emit(record: IterateRecord) -> None:
        records.append(record)
        if on_record is not None:
            on_record(record)

    logger.info("descent on %s from %s, eps0=%s, norm=%s", oracle.name, x.tolist(), eps, spec)
    for iteration in range(config.max_iter):
        region = BallRegion(x, eps, spec)
        hull = build_hull(
            oracle,
            region,
            exact=config.exact,
            samples=config.samples,
            seed=derive_seed(config.seed, iteration),
            workers=config.workers,
        )
        lipschitz = oracle.lipschitz_bound(x, eps, spec)
        sigma = config.sigma if config.sigma is not None else SIGMA_FRACTION * lipschitz
        samples = hull.provenance.samples
        try:
            cert = descent_direction(hull, spec, sigma, lipschitz)
        except ConvergenceFailure as exc:
            best = exc.best.norm_value if exc.best is not None else None
            logger.warning("min-norm solve failed at iteration %s (%s); shrinking eps", iteration, exc)
            emit(_record(iteration, x, fx, eps, best, None, 0.0, samples, STATUS_SHRINK, started))
            eps *= config.theta
            continue

        if not cert.has_direction:
            if eps <= config.eps_min:
                emit(_record(iteration, x, fx, eps, cert.a_min_norm, None, 0.0, samples, STATUS_STATIONARY, started))
                logger.info("approximately stationary at %s after %s iterations", x.tolist(), iteration + 1)
                return Trajectory(tuple(records))
            emit(_record(iteration, x, fx, eps, cert.a_min_norm, None, 0.0, samples, STATUS_SHRINK, started))
            eps *= config.theta
            continue

        t = 0.0
        if cert.directional_value < 0:
            t = line_search(oracle, x, cert.direction, cert.directional_value, eps, config.armijo, config.max_halvings)
        else:
            logger.warning("best face direction is not a descent direction (f°=%s); shrinking eps", cert.directional_value)
        if t == 0.0:
            emit(_record(iteration, x, fx, eps, cert.a_min_norm, cert.direction, 0.0, samples, STATUS_SHRINK, started))
            eps *= config.theta
            continue

        emit(_record(iteration, x, fx, eps, cert.a_min_norm, cert.direction, t, samples, STATUS_STEP, started))
        x = x + t * cert.direction
        fx = oracle.eval(x)
        logger.debug("step %s: t=%s, f=%s", iteration, t, fx)
        eps = config.eps0

    emit(_record(config.max_iter, x, fx, None, None, None, 0.0, 0, STATUS_ITER_LIMIT, started))
    logger.info("iteration limit %s reached at f=%s", config.max_iter, fx)
    return Trajectory(tuple(records))


def naive_subgradient_run(oracle: FunctionOracle, x0, step: float, iterations: int) -> Trajectory:
    """Normalised subgradient steps x <- x - step g / |g| with g = grad_ae(x)."""
    if step <= 0:
        raise InputError(f"step must be > 0, got {step}")
    x = as_vector(x0, "x0")
    if x.shape[0] != oracle.dim:
        raise InputError(f"x0 has dimension {x.shape[0]}, {oracle.name} expects {oracle.dim}")
    started = time.perf_counter()
    records: List[IterateRecord] = []
    for iteration in range(iterations):
        fx = oracle.eval(x)
        g = oracle.grad_ae(x)
        g_norm = float(np.linalg.norm(g))
        if g_norm == 0.0:
            records.append(_record(iteration, x, fx, None, 0.0, None, 0.0, 0, STATUS_STATIONARY, started))
            return Trajectory(tuple(records), method="naive")
        h = -g / g_norm
        records.append(_record(iteration, x, fx, None, None, h, step, 0, STATUS_STEP, started))
        x = x + step * h
    records.append(_record(iterations, x, oracle.eval(x), None, None, None, 0.0, 0, STATUS_ITER_LIMIT, started))
    return Trajectory(tuple(records), method="naive")


def regularity_floor(oracle: FunctionOracle, points, eps: float, spec: Optional[NormSpec] = None) -> float:
    """Smallest minimal dual norm of the exact hull on B(x, eps) over the given points.

    A positive floor is a concrete sigma below which no tested ball looks
    stationary.
    """
    spec = spec or NormSpec.euclidean()
    rows = np.atleast_2d(np.asarray(points, dtype=float))
    if rows.shape[0] == 0:
        raise InputError("regularity floor needs at least one point")
    values = [min_norm_point(exact_hull(oracle, BallRegion(row, eps, spec)), spec).norm_value for row in rows]
    return float(min(values))
