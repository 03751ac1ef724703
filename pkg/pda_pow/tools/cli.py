import argparse
import importlib
import logging
import sys
import traceback

from pda_pow.config import ValidationError
from pda_pow.config_utils.logging import configure_logging
from pda_pow.utils import LazyRegistry

logger = logging.getLogger(__name__)

EXIT_COMPUTATION_ERROR = 1
EXIT_USAGE_ERROR = 2


def _lazy_import(module: str, name: str):
    return lambda: getattr(importlib.import_module(module), name)


# Imported on demand, so a subcommand only loads what it needs.
COMMANDS = LazyRegistry(
    "command",
    {
        "consecutive": _lazy_import("pda_pow.tools.consecutive", "ConsecutiveConfig"),
        "table": _lazy_import("pda_pow.tools.table", "TableConfig"),
        "simulate": _lazy_import("pda_pow.tools.simulate", "SimulateConfig"),
        "nakamoto": _lazy_import("pda_pow.tools.nakamoto", "NakamotoConfig"),
        "reduce-info": _lazy_import("pda_pow.tools.reduce_info", "ReduceInfoConfig"),
    },
)


def pda_pow(args=None):
    # (Pre-)configure logging
    configure_logging()
    parser = argparse.ArgumentParser(prog="pda-pow", add_help=False)
    parser.add_argument("subcommand", choices=COMMANDS.keys())
    parsed, unparsed = parser.parse_known_args(args)
    try:
        COMMANDS[parsed.subcommand].parse_and_run(unparsed)
    except (ValidationError, FileNotFoundError):
        logger.error(traceback.format_exc())
        sys.exit(EXIT_USAGE_ERROR)
    except Exception:  # noqa
        logger.critical(traceback.format_exc())
        sys.exit(EXIT_COMPUTATION_ERROR)


if __name__ == "__main__":
    pda_pow()
