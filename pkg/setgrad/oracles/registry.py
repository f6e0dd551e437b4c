"""Built-in test functions, registered in display order."""
import logging
from typing import Any, List, Mapping, Optional

import numpy as np

from setgrad.exceptions import InputError, UnknownOracleError

from .base import FunctionOracle, MaxAffineSpec, OracleSource
from .max_affine import MaxAffineOracle
from .separable import SeparableAbsOracle

logger = logging.getLogger(__name__)


def _abs1d() -> FunctionOracle:
    return SeparableAbsOracle([0.0], [1.0], name="abs1d")


def _valley(alpha: float) -> FunctionOracle:
    alpha = float(alpha)
    if not alpha > 0:
        raise InputError(f"valley needs alpha > 0, got {alpha}")
    return SeparableAbsOracle([0.0, 0.0], [1.0, alpha], name="valley", params={"alpha": alpha})


def _skewed_abs() -> FunctionOracle:
    return SeparableAbsOracle([1.0, 0.0], [0.0, 1.0], name="skewed_abs")


def _half_max() -> FunctionOracle:
    # 1/2 (x + y + |x - y|) = max(x, y)
    return MaxAffineOracle([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], name="half_max")


def _weighted_abs(weights) -> FunctionOracle:
    weights = np.asarray(weights, dtype=float).reshape(-1)
    return SeparableAbsOracle(np.zeros_like(weights), weights, name="weighted_abs", params={"weights": weights.tolist()})


def _max_affine(spec) -> FunctionOracle:
    if isinstance(spec, Mapping):
        from setgrad.repositories.oracle_spec_repository import spec_from_document

        spec = spec_from_document(spec)
    if not isinstance(spec, MaxAffineSpec):
        raise InputError("max_affine needs a MaxAffineSpec or its JSON document")
    return MaxAffineOracle.from_spec(spec)


def _linear(c) -> FunctionOracle:
    c = np.asarray(c, dtype=float).reshape(-1)
    return SeparableAbsOracle(c, np.zeros_like(c), name="linear", params={"c": c.tolist()})


BUILTIN_ORACLES: List[OracleSource] = [
    OracleSource(1, "abs1d", "Absolute value", "f(x) = |x| on R", (), _abs1d),
    OracleSource(2, "valley", "Valley", "f(x1, x2) = |x1| + alpha |x2|", ("alpha",), _valley),
    OracleSource(3, "skewed_abs", "Skewed absolute value", "f(x1, x2) = x1 + |x2|", (), _skewed_abs),
    OracleSource(4, "half_max", "Maximum of coordinates", "f(x, y) = (x + y + |x - y|) / 2", (), _half_max),
    OracleSource(5, "weighted_abs", "Weighted l1", "f(x) = sum_i w_i |x_i|", ("weights",), _weighted_abs),
    OracleSource(6, "max_affine", "Max-affine", "f(x) = max_k <c_k, x> + b_k", ("spec",), _max_affine),
    OracleSource(7, "linear", "Linear", "f(x) = <c, x>", ("c",), _linear),
]


def get_oracle_sources() -> List[OracleSource]:
    return sorted(BUILTIN_ORACLES)


def oracle_keys() -> List[str]:
    return [source.key for source in get_oracle_sources()]


def get_oracle_source(key: str) -> Optional[OracleSource]:
    return next((source for source in BUILTIN_ORACLES if source.key == key), None)


def builtin(name: str, params: Optional[Mapping[str, Any]] = None, **kwargs: Any) -> FunctionOracle:
    """Build a registered function.

    Args:
        name: registry key, e.g. "valley".
        params: parameters by name; keyword arguments are merged in.

    Raises:
        UnknownOracleError: ``name`` is not registered.
        InputError: parameters missing or unexpected.
    """
    source = get_oracle_source(name)
    if source is None:
        raise UnknownOracleError(f"unknown function {name!r}; known: {', '.join(oracle_keys())}")
    given = {**(params or {}), **kwargs}
    missing = [key for key in source.params if given.get(key) is None]
    unexpected = sorted(set(given) - set(source.params))
    if missing or unexpected:
        raise InputError(
            f"{name} takes parameters ({', '.join(source.params)}); "
            f"missing {missing or 'none'}, unexpected {unexpected or 'none'}"
        )
    oracle = source.factory(**{key: given[key] for key in source.params})
    logger.debug("built %s (dim %s)", name, oracle.dim)
    return oracle
