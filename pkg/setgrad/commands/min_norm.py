"""`min-norm`: minimal-norm point of a hull read from a file."""
import argparse
import json

from setgrad.models.config import ExperimentConfig
from setgrad.repositories.hull_repository import load_points
from setgrad.services.minnorm_service import min_norm_point

from . import add_experiment_arguments, experiment_from_args


def register(subparsers) -> None:
    parser = subparsers.add_parser("min-norm", help="minimal dual-norm element of conv(points)")
    add_experiment_arguments(parser, ("points", "norm", "tol"))
    parser.set_defaults(handler=handle)


def execute(experiment: ExperimentConfig) -> int:
    hull = load_points(experiment.points)
    result = min_norm_point(hull, experiment.norm_spec, experiment.tol)
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def handle(args: argparse.Namespace) -> int:
    return execute(experiment_from_args(args, mode="min-norm"))
