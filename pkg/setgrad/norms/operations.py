"""Norm values, dual norms, the dual map j and the dual face."""
from __future__ import annotations

import itertools
import logging
from typing import Optional

import numpy as np

from config import config
from setgrad.exceptions import (
    FaceTooLargeError,
    InputError,
    NonUniqueDualMapError,
    ZeroVectorError,
)
from .spec import KIND_EUCLIDEAN, KIND_L1, KIND_LINF, NormSpec

logger = logging.getLogger(__name__)


def as_vector(values, name: str = "x") -> np.ndarray:
    """Return ``values`` as a finite 1-d float array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a nonempty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    return arr


def _lp(x: np.ndarray, p: float) -> float:
    # scaled to avoid overflow of |x|^p
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum((np.abs(x) / peak) ** p)) ** (1.0 / p)


def _norm(x: np.ndarray, spec: NormSpec) -> float:
    if spec.kind == KIND_L1:
        return float(np.sum(np.abs(x)))
    if spec.kind == KIND_LINF:
        return float(np.max(np.abs(x)))
    if spec.kind == KIND_EUCLIDEAN:
        return float(np.linalg.norm(x))
    return _lp(x, spec.exponent)


def row_norms(points, spec: NormSpec) -> np.ndarray:
    """``spec`` norm of every row of a 2-d array; rows of width 0 have norm 0."""
    rows = np.atleast_2d(np.asarray(points, dtype=float))
    if rows.shape[1] == 0:
        return np.zeros(rows.shape[0])
    if spec.kind == KIND_L1:
        return np.sum(np.abs(rows), axis=1)
    if spec.kind == KIND_LINF:
        return np.max(np.abs(rows), axis=1)
    return np.linalg.norm(rows, ord=spec.exponent, axis=1)


def norm_value(x, spec: NormSpec) -> float:
    """Return ||x|| under ``spec``."""
    return _norm(as_vector(x), spec)


def dual_norm_value(a, spec: NormSpec) -> float:
    """Return the dual norm of ``a``, i.e. max of <a, h> over ||h||_spec <= 1."""
    return _norm(as_vector(a, "a"), spec.dual())


def dual_map(a, spec: NormSpec) -> np.ndarray:
    """Return the unit vector j(a) with <a, j(a)> = ||a||_*.

    Only defined for strictly convex ``spec``; for l1/linf use ``dual_face``.
    """
    if not spec.strictly_convex():
        raise NonUniqueDualMapError(
            f"dual map of {spec} is set-valued; select from dual_face instead"
        )
    vec = as_vector(a, "a")
    peak = float(np.max(np.abs(vec)))
    if peak == 0.0:
        raise ZeroVectorError("dual map is undefined at a = 0")
    scaled = vec / peak
    if spec.kind == KIND_EUCLIDEAN:
        return scaled / np.linalg.norm(scaled)
    q = spec.dual().exponent
    raw = np.sign(scaled) * np.abs(scaled) ** (q - 1.0)
    return raw / _lp(raw, spec.exponent)


def dual_face(a, spec: NormSpec, cap: Optional[int] = None) -> np.ndarray:
    """Return the vertices of argmax of <a, h> over the unit ball of ``spec``.

    Rows are the vertices. Entries are exactly 0 or +-1 for l1/linf, so
    pairings with ``a`` are exact. Strictly convex norms give the single row
    ``dual_map(a)``.
    """
    vec = as_vector(a, "a")
    cap = config.FACE_DIM_CAP if cap is None else cap
    if vec.size > cap:
        raise FaceTooLargeError(f"dual face in dimension {vec.size} exceeds cap {cap}")
    peak = float(np.max(np.abs(vec)))
    if peak == 0.0:
        raise ZeroVectorError("dual face is undefined at a = 0")
    if spec.strictly_convex():
        return dual_map(vec, spec).reshape(1, -1)

    if spec.kind == KIND_L1:
        vertices = []
        for i in np.flatnonzero(np.abs(vec) == peak):
            vertex = np.zeros_like(vec)
            vertex[i] = np.sign(vec[i])
            vertices.append(vertex)
        return np.array(vertices)

    base = np.sign(vec)
    free = np.flatnonzero(vec == 0.0)
    vertices = []
    for signs in itertools.product((1.0, -1.0), repeat=free.size):
        vertex = base.copy()
        vertex[free] = signs
        vertices.append(vertex)
    logger.debug("dual face of size %s for %s", len(vertices), spec)
    return np.array(vertices)
