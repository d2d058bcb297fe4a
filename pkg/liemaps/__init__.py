"""Liemaps main module."""
import sys

import fire

from liemaps.cli import CliBench, CliMaps
from liemaps.utils import FormatError, NumericError, logger


def run(argv=None) -> int:
    """Runs one command and returns its exit code.

    0 on success, 1 on usage or format errors, 2 on numeric failures.

    Args:
        argv: command line without the program name, sys.argv[1:] when None
    """
    try:
        fire.Fire({"maps": CliMaps, "bench": CliBench}, command=argv)
    except fire.core.FireExit as err:
        return 0 if err.code in (0, None) else 1
    except NumericError as err:
        logger.error("%s", err)
        return 2
    except (FormatError, ValueError) as err:
        logger.error("%s", err)
        return 1
    return 0


def main():
    # pylint: disable=missing-function-docstring
    sys.exit(run())
