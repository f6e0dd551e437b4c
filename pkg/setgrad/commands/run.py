"""`run`: descent or naive baseline with a streamed trace and a JSON summary."""
import argparse
import logging

from setgrad.models.config import ExperimentConfig
from setgrad.repositories.trace_repository import TraceWriter, write_summary
from setgrad.services.experiment_service import run_experiment, summarize

from . import add_experiment_arguments, experiment_from_args

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="run the set-gradient descent or the naive baseline")
    parser.add_argument(
        "--mode",
        choices=["descent", "naive", "compare", "min-norm", "duality-check", "sample-grad"],
        default=None,
        help="experiment mode (default descent)",
    )
    add_experiment_arguments(parser)
    parser.set_defaults(handler=handle)


def execute(experiment: ExperimentConfig) -> int:
    if experiment.mode not in ("descent", "naive"):
        from . import compare, duality_check, min_norm, sample_grad

        delegates = {
            "compare": compare.execute,
            "min-norm": min_norm.execute,
            "duality-check": duality_check.execute,
            "sample-grad": sample_grad.execute,
        }
        return delegates[experiment.mode](experiment)

    if experiment.out:
        dim = len(experiment.x0)
        with TraceWriter(experiment.out, dim) as writer:
            trajectory = run_experiment(experiment, writer.write)
        logger.info("trace written to %s", experiment.out)
    else:
        trajectory = run_experiment(experiment)
    print(write_summary(summarize(trajectory), experiment.summary))
    return 0


def handle(args: argparse.Namespace) -> int:
    return execute(experiment_from_args(args))
