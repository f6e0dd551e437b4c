"""`duality-check`: min-norm value against the sampled minimum of the support function."""
import argparse
import json

from setgrad.models.config import ExperimentConfig
from setgrad.services.experiment_service import duality_check

from . import add_experiment_arguments, experiment_from_args


def register(subparsers) -> None:
    parser = subparsers.add_parser("duality-check", help="certificate and min-max gap on B(x0, eps)")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=handle)


def execute(experiment: ExperimentConfig) -> int:
    print(json.dumps(duality_check(experiment), indent=2))
    return 0


def handle(args: argparse.Namespace) -> int:
    return execute(experiment_from_args(args, mode="duality-check"))
