"""Error hierarchy shared by all setgrad modules."""
from typing import Any, Dict, List, Optional


class SetGradError(Exception):
    """Root of every error raised on purpose by setgrad."""


class InputError(SetGradError, ValueError):
    """Malformed input: non-finite entries, empty sets, dimension mismatch."""


class ZeroVectorError(InputError):
    """An operation defined only on nonzero dual vectors received 0."""


class UnknownOracleError(InputError):
    """A built-in function name that is not registered."""


class NonUniqueDualMapError(SetGradError, ValueError):
    """The primal norm is not strictly convex, so j(a) is a face, not a point."""


class FaceTooLargeError(SetGradError, ValueError):
    """A dual face would exceed the configured dimension cap."""


class UnsupportedError(SetGradError):
    """The oracle cannot provide the requested exact quantity."""


class ConvergenceFailure(SetGradError, RuntimeError):
    """A solver stopped without meeting its tolerance.

    ``best`` holds the best iterate found so callers can degrade gracefully.
    """

    def __init__(self, message: str, best: Optional[Any] = None) -> None:
        super().__init__(message)
        self.best = best


class ConfigValidationError(InputError):
    """Experiment configuration rejected; ``fields`` lists every offending key."""

    def __init__(self, fields: List[Dict[str, str]]) -> None:
        names = ", ".join(item["field"] for item in fields)
        super().__init__(f"invalid configuration: {names}")
        self.fields = fields

    def to_dict(self) -> dict:
        return {"error": "invalid_config", "fields": self.fields}
