"""Validated experiment configuration (defaults < file < flags < SETGRAD_SEED)."""
from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import config
from setgrad.exceptions import ConfigValidationError, InputError
from setgrad.norms import NormSpec, parse_norm

# Parameters each built-in needs beyond x0
FN_PARAMETERS: Dict[str, str] = {
    "valley": "alpha",
    "weighted_abs": "weights",
    "linear": "coefficients",
    "max_affine": "spec_path",
}


class DescentConfig(BaseModel):
    """Knobs of the eps-shrinking descent loop."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps0: float = Field(0.5, gt=0)
    theta: float = Field(0.5, gt=0, lt=1)
    sigma: Optional[float] = Field(None, gt=0)
    eps_min: float = Field(1e-3, gt=0)
    samples: int = Field(64, ge=1)
    armijo: float = Field(0.5, gt=0, le=1)
    max_iter: int = Field(1000, ge=1)
    max_halvings: int = Field(40, ge=0)
    seed: int = Field(0, ge=0)
    norm: str = Field(default_factory=lambda: config.DEFAULT_NORM)
    exact: bool = True
    workers: int = Field(default_factory=lambda: config.SAMPLE_WORKERS, ge=1)

    @field_validator("norm")
    @classmethod
    def _known_norm(cls, value: str) -> str:
        try:
            return str(parse_norm(value))
        except InputError as exc:
            raise ValueError(str(exc)) from exc

    @model_validator(mode="after")
    def _eps_order(self) -> "DescentConfig":
        if self.eps_min > self.eps0:
            raise ValueError("eps_min must not exceed eps0")
        return self

    @property
    def norm_spec(self) -> NormSpec:
        return parse_norm(self.norm)


class ExperimentConfig(BaseModel):
    """Flat experiment description; every key has a matching CLI flag."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: Literal["descent", "naive", "compare", "min-norm", "duality-check", "sample-grad"] = "descent"
    fn: Optional[str] = None
    alpha: Optional[float] = Field(None, gt=0)
    weights: Optional[List[float]] = None
    coefficients: Optional[List[float]] = None
    spec_path: Optional[str] = None
    x0: Optional[List[float]] = None
    points: Optional[str] = None

    eps: float = Field(0.5, gt=0)
    theta: float = Field(0.5, gt=0, lt=1)
    sigma: Optional[float] = Field(None, gt=0)
    eps_min: float = Field(1e-3, gt=0)
    samples: int = Field(64, ge=1)
    armijo: float = Field(0.5, gt=0, le=1)
    max_iter: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0)
    norm: str = Field(default_factory=lambda: config.DEFAULT_NORM)
    exact: bool = True
    workers: int = Field(default_factory=lambda: config.SAMPLE_WORKERS, ge=1)

    step: float = Field(0.1, gt=0)
    iters: Optional[int] = Field(None, ge=1)
    target: float = Field(1e-2, gt=0)
    tol: float = Field(default_factory=lambda: config.MIN_NORM_TOL, gt=0)
    tau: float = Field(1e-4, gt=0)

    out: Optional[str] = None
    summary: Optional[str] = None
    report: Optional[str] = None

    @field_validator("norm")
    @classmethod
    def _known_norm(cls, value: str) -> str:
        try:
            return str(parse_norm(value))
        except InputError as exc:
            raise ValueError(str(exc)) from exc

    @property
    def norm_spec(self) -> NormSpec:
        return parse_norm(self.norm)

    def descent_config(self) -> DescentConfig:
        return DescentConfig(
            eps0=self.eps,
            theta=self.theta,
            sigma=self.sigma,
            eps_min=self.eps_min,
            samples=self.samples,
            armijo=self.armijo,
            max_iter=self.max_iter,
            seed=self.seed,
            norm=self.norm,
            exact=self.exact,
            workers=self.workers,
        )

    def cross_field_problems(self) -> List[Dict[str, str]]:
        """Checks that span several keys; empty when the config is coherent."""
        from setgrad.oracles.registry import oracle_keys

        problems: List[Dict[str, str]] = []
        if self.mode == "min-norm":
            if not self.points:
                problems.append({"field": "points", "message": "min-norm needs a points file"})
            return problems
        if not self.fn:
            problems.append({"field": "fn", "message": f"mode {self.mode} needs a function"})
        elif self.fn not in oracle_keys():
            problems.append({"field": "fn", "message": f"unknown function {self.fn!r}"})
        else:
            needed = FN_PARAMETERS.get(self.fn)
            if needed and getattr(self, needed) is None:
                problems.append({"field": needed, "message": f"{self.fn} needs {needed}"})
        if not self.x0:
            problems.append({"field": "x0", "message": "a start point is required"})
        if self.eps_min > self.eps:
            problems.append({"field": "eps_min", "message": "eps_min must not exceed eps"})
        return problems


def _field_errors(exc: ValidationError) -> List[Dict[str, str]]:
    fields = []
    for error in exc.errors():
        name = ".".join(str(part) for part in error["loc"]) or "config"
        fields.append({"field": name, "message": error["msg"]})
    return fields


def load_experiment_config(*layers: Optional[dict]) -> ExperimentConfig:
    """Merge layers left to right (None entries skipped), then apply SETGRAD_SEED.

    Raises:
        ConfigValidationError: listing every violated field.
    """
    merged: dict = {}
    for layer in layers:
        if layer:
            merged.update({key: value for key, value in layer.items() if value is not None})
    try:
        override = config.seed_override
    except ValueError as exc:
        raise ConfigValidationError([{"field": "seed", "message": "SETGRAD_SEED is not an integer"}]) from exc
    if override is not None:
        merged["seed"] = override
    try:
        experiment = ExperimentConfig(**merged)
    except ValidationError as exc:
        raise ConfigValidationError(_field_errors(exc)) from exc
    problems = experiment.cross_field_problems()
    if problems:
        raise ConfigValidationError(problems)
    return experiment
