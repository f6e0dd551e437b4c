"""Sampling from norm balls and unit spheres."""
from __future__ import annotations

import itertools

import numpy as np

from .operations import as_vector, row_norms
from .spec import KIND_L1, KIND_LINF, NormSpec


def sample_ball(center, radius: float, spec: NormSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` points uniformly from the closed ``spec``-ball.

    Rejection sampling from the bounding box; a zero radius returns copies of
    the center.
    """
    origin = as_vector(center, "center")
    if count <= 0:
        return np.empty((0, origin.size))
    if radius == 0.0:
        return np.tile(origin, (count, 1))
    accepted = []
    have = 0
    batch = max(64, 2 * count)
    while have < count:
        box = rng.uniform(-1.0, 1.0, size=(batch, origin.size))
        keep = box[row_norms(box, spec) <= 1.0]
        accepted.append(keep)
        have += keep.shape[0]
    unit = np.concatenate(accepted)[:count]
    return origin + radius * unit


def unit_sphere_samples(spec: NormSpec, dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Points on the ``spec`` unit sphere.

    In the plane an even angular grid is used (with a count divisible by 8 the
    grid contains the l1 and linf vertices); otherwise normalized Gaussian
    directions.
    """
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        raw = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        raw = rng.standard_normal(size=(count, dim))
    return raw / row_norms(raw, spec)[:, None]


def ball_vertices(spec: NormSpec, dim: int) -> np.ndarray:
    """Vertices of the l1 or linf unit ball; empty for smooth norms."""
    if spec.kind == KIND_L1:
        eye = np.eye(dim)
        return np.vstack([eye, -eye])
    if spec.kind == KIND_LINF:
        return np.array(list(itertools.product((1.0, -1.0), repeat=dim)))
    return np.empty((0, dim))
