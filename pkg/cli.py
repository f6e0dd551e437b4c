"""Command-line entry point: ``python cli.py <command> [flags]``."""
import json
import logging
import sys
from typing import List, Optional

from setgrad import configure_logging, create_parser
from setgrad.exceptions import ConfigValidationError, InputError, SetGradError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FAILURE = 3


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the subcommand and map errors to exit codes."""
    configure_logging()
    parser = create_parser()
    args = parser.parse_args(argv)
    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help(sys.stderr)
        return EXIT_INPUT
    try:
        return handler(args)
    except ConfigValidationError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        logger.error("Invalid input: %s", exc)
        print(json.dumps({"error": "invalid_input", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except SetGradError as exc:
        logger.error("Run failed: %s", exc, exc_info=True)
        return EXIT_FAILURE
    except Exception as exc:
        logger.error("Unexpected error: %s", exc, exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(run())
