"""Norms on R^n, their duals, and the dual mapping."""
from .spec import NormSpec, parse_norm
from .operations import (
    as_vector,
    norm_value,
    dual_norm_value,
    dual_map,
    dual_face,
    row_norms,
)
from .sampling import ball_vertices, sample_ball, unit_sphere_samples

__all__ = [
    "NormSpec",
    "parse_norm",
    "as_vector",
    "norm_value",
    "dual_norm_value",
    "dual_map",
    "dual_face",
    "row_norms",
    "ball_vertices",
    "sample_ball",
    "unit_sphere_samples",
]
