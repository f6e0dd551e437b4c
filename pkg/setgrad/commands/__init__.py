"""Register all subcommands and the flags they share."""
import argparse
import json
from typing import Iterable, Optional

from setgrad.exceptions import ConfigValidationError, InputError
from setgrad.models.config import ExperimentConfig, load_experiment_config
from setgrad.utils.formatters import parse_vector

# flag destination -> (help, type); vector-valued keys are parsed after argparse
EXPERIMENT_FLAGS = {
    "fn": ("built-in function name", str),
    "alpha": ("valley weight alpha", float),
    "weights": ("weighted_abs weights, comma separated", str),
    "coefficients": ("linear coefficients, comma separated", str),
    "spec_path": ("max_affine JSON document", str),
    "x0": ("start point, comma separated", str),
    "points": ("hull points file (.csv or .json)", str),
    "eps": ("initial radius eps0", float),
    "theta": ("shrink factor in (0, 1)", float),
    "sigma": ("stationarity threshold", float),
    "eps_min": ("smallest radius before declaring stationarity", float),
    "samples": ("gradient samples per hull", int),
    "armijo": ("Armijo constant in (0, 1]", float),
    "max_iter": ("iteration limit", int),
    "seed": ("random seed", int),
    "norm": ("euclidean, l1, linf or p:<exponent>", str),
    "workers": ("sampling threads", int),
    "step": ("naive step length", float),
    "iters": ("naive iteration count", int),
    "target": ("target value for comparisons", float),
    "tol": ("min-norm tolerance", float),
    "tau": ("perturbation radius for direction quality", float),
    "out": ("output file", str),
    "summary": ("summary JSON file", str),
    "report": ("report file", str),
}

VECTOR_KEYS = ("weights", "coefficients", "x0")


def add_experiment_arguments(parser: argparse.ArgumentParser, keys: Optional[Iterable[str]] = None) -> None:
    """Add ``--config`` plus one flag per experiment key."""
    parser.add_argument("--config", help="JSON experiment file; flags override its values")
    for key in keys or EXPERIMENT_FLAGS:
        help_text, kind = EXPERIMENT_FLAGS[key]
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key, type=kind, default=None, help=help_text)
    if keys is None or "exact" in keys:
        parser.add_argument(
            "--exact",
            action=argparse.BooleanOptionalAction,
            default=None,
            help="use exact set gradients when the function has them",
        )


def _file_layer(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path) as handle:
            document = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigValidationError([{"field": "config", "message": str(exc)}]) from exc
    if not isinstance(document, dict):
        raise ConfigValidationError([{"field": "config", "message": "config file must hold a JSON object"}])
    return document


def _flag_layer(args: argparse.Namespace) -> dict:
    layer = {}
    problems = []
    for key in list(EXPERIMENT_FLAGS) + ["exact", "mode"]:
        value = getattr(args, key, None)
        if value is None:
            continue
        if key in VECTOR_KEYS:
            try:
                value = parse_vector(value, key)
            except InputError as exc:
                problems.append({"field": key, "message": str(exc)})
                continue
        layer[key] = value
    if problems:
        raise ConfigValidationError(problems)
    return layer


def experiment_from_args(args: argparse.Namespace, mode: Optional[str] = None) -> ExperimentConfig:
    """defaults < --config file < flags < SETGRAD_SEED; ``mode`` pins the subcommand's mode."""
    forced = {"mode": mode} if mode else {}
    return load_experiment_config(_file_layer(getattr(args, "config", None)), _flag_layer(args), forced)


def register_commands(subparsers) -> None:
    """Register all subcommands with the parser."""
    from setgrad.commands import compare, duality_check, min_norm, run, sample_grad

    commands = [run, compare, min_norm, duality_check, sample_grad]
    for command in commands:
        command.register(subparsers)
