"""Experiments driven by an ExperimentConfig: runs, comparisons and checks."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from setgrad.exceptions import InputError
from setgrad.models.config import ExperimentConfig
from setgrad.models.hull import HullSet
from setgrad.models.regions import BallRegion
from setgrad.models.trajectory import Trajectory
from setgrad.oracles.base import FunctionOracle
from setgrad.oracles.registry import builtin
from setgrad.repositories.oracle_spec_repository import load_max_affine_spec

from .descent_service import RecordCallback, SIGMA_FRACTION, descent_direction, naive_subgradient_run, run_descent
from .hull_service import build_hull, sample_ball_gradients
from .minnorm_service import min_norm_point, minmax_gap

logger = logging.getLogger(__name__)

SUMMARY_KEYS = ("final_x", "final_f", "iterations", "status", "sign_alternations")


def build_oracle(experiment: ExperimentConfig) -> FunctionOracle:
    """Instantiate the configured built-in."""
    if experiment.fn == "valley":
        return builtin("valley", alpha=experiment.alpha)
    if experiment.fn == "weighted_abs":
        return builtin("weighted_abs", weights=experiment.weights)
    if experiment.fn == "linear":
        return builtin("linear", c=experiment.coefficients)
    if experiment.fn == "max_affine":
        return builtin("max_affine", spec=load_max_affine_spec(experiment.spec_path))
    return builtin(experiment.fn)


def start_point(experiment: ExperimentConfig, oracle: FunctionOracle) -> np.ndarray:
    x0 = np.asarray(experiment.x0, dtype=float)
    if x0.shape[0] != oracle.dim:
        raise InputError(f"x0 has dimension {x0.shape[0]}, {oracle.name} expects {oracle.dim}")
    return x0


def summarize(trajectory: Trajectory) -> Dict[str, object]:
    """Summary document with a fixed key set and order."""
    final = trajectory.final
    return {
        "final_x": list(final.x),
        "final_f": final.f,
        "iterations": trajectory.iterations,
        "status": final.status,
        "sign_alternations": int(sum(trajectory.sign_alternations())),
    }


def run_experiment(experiment: ExperimentConfig, on_record: Optional[RecordCallback] = None) -> Trajectory:
    """Run the descent or the naive baseline, streaming rows to ``on_record``."""
    oracle = build_oracle(experiment)
    x0 = start_point(experiment, oracle)
    if experiment.mode == "naive":
        trajectory = naive_subgradient_run(oracle, x0, experiment.step, experiment.iters or experiment.max_iter)
        if on_record is not None:
            for record in trajectory.records:
                on_record(record)
        return trajectory
    return run_descent(oracle, x0, experiment.descent_config(), on_record)


@dataclass
class MethodOutcome:
    method: str
    iterations: int
    final_f: float
    sign_alternations: int
    reached_target: bool
    status: str


@dataclass
class CompareReport:
    fn: str
    x0: List[float]
    target: float
    outcomes: List[MethodOutcome] = field(default_factory=list)

    def to_markdown(self) -> str:
        lines = [
            f"# {self.fn} from {self.x0} (target f <= {self.target:g})",
            "",
            "| method | iterations | final f | sign alternations | reached target | status |",
            "|---|---|---|---|---|---|",
        ]
        for outcome in self.outcomes:
            lines.append(
                f"| {outcome.method} | {outcome.iterations} | {outcome.final_f:.6g} | "
                f"{outcome.sign_alternations} | {'yes' if outcome.reached_target else 'no'} | {outcome.status} |"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "fn": self.fn,
            "x0": self.x0,
            "target": self.target,
            "methods": [outcome.__dict__ for outcome in self.outcomes],
        }


def _outcome(method: str, trajectory: Trajectory, target: float) -> MethodOutcome:
    return MethodOutcome(
        method=method,
        iterations=trajectory.iterations,
        final_f=float(trajectory.final.f),
        sign_alternations=int(sum(trajectory.sign_alternations())),
        reached_target=bool(np.min(trajectory.f_values()) <= target),
        status=trajectory.status,
    )


def compare_methods(experiment: ExperimentConfig) -> CompareReport:
    """Set-gradient descent against the naive baseline on an equal iteration budget."""
    oracle = build_oracle(experiment)
    x0 = start_point(experiment, oracle)
    descent = run_descent(oracle, x0, experiment.descent_config())
    budget = max(descent.iterations, 1)
    naive = naive_subgradient_run(oracle, x0, experiment.step, budget)
    report = CompareReport(experiment.fn, [float(v) for v in x0], experiment.target)
    report.outcomes.append(_outcome("set-gradient", descent, experiment.target))
    report.outcomes.append(_outcome("naive", naive, experiment.target))
    logger.info("compare on %s: descent %s iterations, naive budget %s", experiment.fn, descent.iterations, budget)
    return report


def sample_gradients(experiment: ExperimentConfig) -> HullSet:
    """Sampled hull on B(x0, eps) with the configured sample count and seed."""
    oracle = build_oracle(experiment)
    region = BallRegion(start_point(experiment, oracle), experiment.eps, experiment.norm_spec)
    return sample_ball_gradients(oracle, region, experiment.samples, experiment.seed, experiment.workers)


def duality_check(experiment: ExperimentConfig, sphere_samples: int = 10000) -> dict:
    """Min-norm value, optimal direction and the sampled min-max gap at (x0, eps)."""
    oracle = build_oracle(experiment)
    x0 = start_point(experiment, oracle)
    spec = experiment.norm_spec
    region = BallRegion(x0, experiment.eps, spec)
    hull = build_hull(oracle, region, experiment.exact, experiment.samples, experiment.seed, experiment.workers)
    lipschitz = oracle.lipschitz_bound(x0, experiment.eps, spec)
    sigma = experiment.sigma if experiment.sigma is not None else SIGMA_FRACTION * lipschitz
    result = min_norm_point(hull, spec)
    cert = descent_direction(hull, spec, sigma, lipschitz)
    return {
        "fn": experiment.fn,
        "norm": str(spec),
        "hull": [[float(v) for v in row] for row in hull.points],
        "a_min": [float(v) for v in result.point],
        "a_min_norm": result.norm_value,
        "direction": None if cert.direction is None else [float(v) for v in cert.direction],
        "directional_value": cert.directional_value,
        "stability_radius": cert.stability_radius,
        "minmax_gap": minmax_gap(hull, spec, sphere_samples, experiment.seed) if hull.dim <= 3 else None,
    }
