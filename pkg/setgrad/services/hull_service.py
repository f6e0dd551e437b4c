"""Finite hulls of gradients on sets, the support function and hull distances.

The set gradient of f on A is represented by a finite point set whose convex
hull it is. Exact hulls come from oracles that know their pieces; sampled
hulls collect a.e. gradients at random points of the region and are inner
approximations.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from config import config
from setgrad.constants.numerics import FD_STEP, SAMPLE_CHUNK
from setgrad.exceptions import InputError
from setgrad.models.hull import PROVENANCE_EXACT, HullSet, Provenance
from setgrad.models.regions import Region
from setgrad.norms import NormSpec, as_vector
from setgrad.oracles.base import FunctionOracle
from setgrad.utils.random_streams import substream

logger = logging.getLogger(__name__)

PointSet = Union[HullSet, np.ndarray, Sequence]


def _check_dims(oracle: FunctionOracle, region: Region) -> None:
    if region.dim != oracle.dim:
        raise InputError(f"region dimension {region.dim} does not match {oracle.name} dimension {oracle.dim}")


def _sample_chunk(oracle: FunctionOracle, region: Region, seed: int, index: int, count: int) -> np.ndarray:
    points = region.sample(count, substream(seed, index))
    return oracle.grad_batch(points)


def sample_ball_gradients(
    oracle: FunctionOracle,
    region: Region,
    m: int,
    seed: int,
    workers: Optional[int] = None,
) -> HullSet:
    """Gradients at ``m`` uniform points of ``region`` plus the anchor gradients.

    Samples are drawn in fixed chunks, each with its own substream
    (seed, chunk index), so the hull is the same for every worker count.
    """
    if m < 1:
        raise InputError(f"sample count must be >= 1, got {m}")
    _check_dims(oracle, region)
    workers = workers or config.SAMPLE_WORKERS
    sizes = [min(SAMPLE_CHUNK, m - start) for start in range(0, m, SAMPLE_CHUNK)]
    anchors = oracle.grad_batch(region.anchors())
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(lambda item: _sample_chunk(oracle, region, seed, item[0], item[1]), enumerate(sizes))
            )
    else:
        chunks = [_sample_chunk(oracle, region, seed, index, size) for index, size in enumerate(sizes)]
    hull = HullSet(np.vstack([anchors] + chunks), Provenance.sampled(m, seed))
    logger.debug("sampled %s gradients on %s: %s distinct", m, type(region).__name__, len(hull))
    return hull


def exact_hull(oracle: FunctionOracle, region: Region) -> HullSet:
    """Exact set gradient of ``oracle`` on ``region``.

    The points are the slopes of every piece active on the region; some may
    be interior to the hull, which leaves the hull itself unchanged.
    """
    _check_dims(oracle, region)
    return HullSet(oracle.exact_region_subdiff(region), Provenance.exact())


def build_hull(
    oracle: FunctionOracle,
    region: Region,
    exact: bool = True,
    samples: int = 64,
    seed: int = 0,
    workers: Optional[int] = None,
) -> HullSet:
    """Exact hull when asked for and available, sampled hull otherwise."""
    if exact and oracle.has_exact:
        return exact_hull(oracle, region)
    return sample_ball_gradients(oracle, region, samples, seed, workers)


def _points(value: PointSet) -> np.ndarray:
    if isinstance(value, HullSet):
        return value.points
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def support_value(hull: PointSet, h) -> float:
    """max over hull points of <a, h>; equals f°(A; h) for an exact hull."""
    points = _points(hull)
    direction = as_vector(h, "h")
    if points.shape[1] != direction.shape[0]:
        raise InputError(f"direction dimension {direction.shape[0]} does not match hull dimension {points.shape[1]}")
    return float(np.max(points @ direction))


def directional_derivative_fd_upper(
    oracle: FunctionOracle,
    region: Region,
    h,
    probes: int,
    seed: int,
    t: float = FD_STEP,
) -> float:
    """Monte-Carlo estimate of sup over y in the region of f°(y; h).

    Difference quotients (f(z + t h) - f(z)) / t are taken at the region
    anchors, at ``probes`` random points y and at jittered copies z of every
    such point with |z - y|_inf <= t. The result is a lower estimate of the
    supremum up to O(t) errors.
    """
    if probes < 1:
        raise InputError(f"probe count must be >= 1, got {probes}")
    _check_dims(oracle, region)
    direction = as_vector(h, "h")
    rng = substream(seed, 0)
    base = np.vstack([region.anchors(), region.sample(probes, rng)])
    jitter = rng.uniform(-t, t, size=base.shape)
    candidates = np.vstack([base, base + jitter])
    quotients = [(oracle.eval(z + t * direction) - oracle.eval(z)) / t for z in candidates]
    return float(max(quotients))


_CDIST_METRICS = {"euclidean": ("euclidean", {}), "l1": ("cityblock", {}), "linf": ("chebyshev", {})}


def hausdorff_distance(P: PointSet, Q: PointSet, norm: Optional[NormSpec] = None) -> float:
    """Hausdorff distance between two finite point sets.

    A one-dimensional array is read as a set of scalars, i.e. points on the line.
    """
    norm = norm or NormSpec.euclidean()
    left, right = _points(P), _points(Q)
    if left.size == 0 or right.size == 0:
        raise InputError("Hausdorff distance needs two nonempty sets")
    if left.shape[1] != right.shape[1]:
        raise InputError("point sets differ in dimension")
    metric, kwargs = _CDIST_METRICS.get(norm.kind, ("minkowski", {"p": norm.exponent}))
    distances = cdist(left, right, metric=metric, **kwargs)
    return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))


def merge(hulls: Iterable[HullSet]) -> HullSet:
    """Deduplicated union; its support function is the max of the inputs'."""
    hulls = list(hulls)
    if not hulls:
        raise InputError("merge needs at least one hull")
    if len({hull.dim for hull in hulls}) != 1:
        raise InputError("merged hulls differ in dimension")
    if all(hull.provenance.kind == PROVENANCE_EXACT for hull in hulls):
        provenance = Provenance.exact()
    else:
        provenance = Provenance.sampled(
            sum(hull.provenance.samples for hull in hulls), hulls[0].provenance.seed
        )
    return HullSet(np.vstack([hull.points for hull in hulls]), provenance)


def contains_by_support(hull: PointSet, a, directions, tol: float = 1e-12) -> bool:
    """Is <a, h> <= f°(A; h) for every supplied direction h?

    With enough directions this decides membership of ``a`` in the hull.
    """
    point = as_vector(a, "a")
    points = _points(hull)
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    supports = np.max(dirs @ points.T, axis=1)
    return bool(np.all(dirs @ point <= supports + tol))


def usc_sequence(oracle: FunctionOracle, regions: Iterable[Region], h) -> List[float]:
    """Support values of exact hulls along a sequence of regions."""
    return [support_value(exact_hull(oracle, region), h) for region in regions]
