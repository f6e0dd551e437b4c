"""`sample-grad`: sampled gradients on B(x0, eps), printed or saved as a hull."""
import argparse
import json

from setgrad.models.config import ExperimentConfig
from setgrad.repositories.hull_repository import hull_to_document, save_points
from setgrad.services.experiment_service import sample_gradients

from . import add_experiment_arguments, experiment_from_args


def register(subparsers) -> None:
    parser = subparsers.add_parser("sample-grad", help="sample a.e. gradients on a ball")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=handle)


def execute(experiment: ExperimentConfig) -> int:
    hull = sample_gradients(experiment)
    if experiment.out:
        save_points(hull, experiment.out)
    else:
        print(json.dumps(hull_to_document(hull), indent=2))
    return 0


def handle(args: argparse.Namespace) -> int:
    return execute(experiment_from_args(args, mode="sample-grad"))
