"""Norm specification and its string form used in configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from setgrad.exceptions import InputError

KIND_EUCLIDEAN = "euclidean"
KIND_P = "p"
KIND_L1 = "l1"
KIND_LINF = "linf"


@dataclass(frozen=True)
class NormSpec:
    """Which norm equips the primal space R^n.

    ``p`` is stored as a Fraction so that ``dual()`` is an exact involution.
    """

    kind: str
    p: Optional[Fraction] = None

    @classmethod
    def euclidean(cls) -> "NormSpec":
        return cls(KIND_EUCLIDEAN)

    @classmethod
    def l1(cls) -> "NormSpec":
        return cls(KIND_L1)

    @classmethod
    def linf(cls) -> "NormSpec":
        return cls(KIND_LINF)

    @classmethod
    def p_norm(cls, p: Union[float, int, str, Fraction]) -> "NormSpec":
        exponent = Fraction(p)
        if not 1 < exponent:
            raise InputError(f"p-norm requires 1 < p < inf, got {p}")
        if exponent == 2:
            return cls.euclidean()
        return cls(KIND_P, exponent)

    @property
    def exponent(self) -> float:
        """Exponent as a float: 1, p, or inf."""
        if self.kind == KIND_L1:
            return 1.0
        if self.kind == KIND_LINF:
            return math.inf
        if self.kind == KIND_EUCLIDEAN:
            return 2.0
        return float(self.p)

    @property
    def polyhedral(self) -> bool:
        return self.kind in (KIND_L1, KIND_LINF)

    def strictly_convex(self) -> bool:
        return self.kind in (KIND_EUCLIDEAN, KIND_P)

    def dual(self) -> "NormSpec":
        if self.kind == KIND_L1:
            return NormSpec.linf()
        if self.kind == KIND_LINF:
            return NormSpec.l1()
        if self.kind == KIND_EUCLIDEAN:
            return self
        return NormSpec.p_norm(self.p / (self.p - 1))

    def __str__(self) -> str:
        if self.kind == KIND_P:
            return f"p:{self.p}"
        return self.kind


def parse_norm(text: Union[str, NormSpec]) -> NormSpec:
    """Parse "euclidean", "l1", "linf" or "p:<exponent>"."""
    if isinstance(text, NormSpec):
        return text
    raw = str(text).strip().lower()
    if raw in (KIND_EUCLIDEAN, "l2"):
        return NormSpec.euclidean()
    if raw == KIND_L1:
        return NormSpec.l1()
    if raw in (KIND_LINF, "inf", "max"):
        return NormSpec.linf()
    if raw.startswith("p:"):
        try:
            exponent = Fraction(raw[2:])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"Invalid p-norm exponent in {text!r}") from exc
        return NormSpec.p_norm(exponent)
    raise InputError(f"Unknown norm {text!r}; expected euclidean, l1, linf or p:<exponent>")
