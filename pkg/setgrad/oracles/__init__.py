"""Nonsmooth test functions with exact set gradients."""
from .base import FunctionOracle, MaxAffineSpec, OracleSource
from .max_affine import MaxAffineOracle, exact_ball_subdiff_piecewise_affine, interval_mask
from .separable import SeparableAbsOracle
from .registry import BUILTIN_ORACLES, builtin, get_oracle_source, get_oracle_sources, oracle_keys

__all__ = [
    "FunctionOracle",
    "MaxAffineSpec",
    "OracleSource",
    "MaxAffineOracle",
    "SeparableAbsOracle",
    "exact_ball_subdiff_piecewise_affine",
    "interval_mask",
    "BUILTIN_ORACLES",
    "builtin",
    "get_oracle_source",
    "get_oracle_sources",
    "oracle_keys",
]
