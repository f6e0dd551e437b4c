"""`compare`: set-gradient descent against the naive baseline."""
import argparse
import logging

from setgrad.models.config import ExperimentConfig
from setgrad.services.experiment_service import compare_methods

from . import add_experiment_arguments, experiment_from_args

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("compare", help="compare descent and naive subgradient steps")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=handle)


def execute(experiment: ExperimentConfig) -> int:
    report = compare_methods(experiment)
    text = report.to_markdown()
    if experiment.report:
        with open(experiment.report, "w") as handle:
            handle.write(text)
        logger.info("report written to %s", experiment.report)
    print(text, end="")
    return 0


def handle(args: argparse.Namespace) -> int:
    return execute(experiment_from_args(args, mode="compare"))
