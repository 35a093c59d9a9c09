"""
Main Application - Q-Aware L2O
Aurelia: "El punto de entrada del CLI, aquí todo se conecta"
"""
import argparse
import logging
import sys
import time
from typing import List, Optional

from qaware.config import get_settings
from qaware.commands import COMMANDS
from qaware.errors import QAwareError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _global_flags(parser: argparse.ArgumentParser, default):
    parser.add_argument("--threads", type=int, default=default, help="Workers para bench y validación")
    parser.add_argument("--seed", type=int, default=default, help="Semilla global")
    parser.add_argument("--log-level", default=default, help="DEBUG, INFO, WARNING, ERROR")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="qaware",
        description=f"{settings.app_name} {settings.app_version}: optimizador aprendido para algoritmos variacionales",
    )
    _global_flags(parser, None)

    # Los flags globales también se aceptan después del sub-comando
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for register in COMMANDS:
        register(subparsers, parents=[common])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    args = build_parser().parse_args(argv)
    args.threads = args.threads or settings.threads
    args.seed_given = getattr(args, "seed", None) is not None
    args.seed = args.seed if args.seed_given else settings.seed

    logging.basicConfig(level=(args.log_level or settings.log_level).upper(), format=LOG_FORMAT)

    start_time = time.time()
    try:
        code = args.handler(args)
    except QAwareError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        if settings.debug:
            raise
        return 2
    except Exception as exc:
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        if settings.debug:
            raise
        return 1

    logger.info(f"{args.command} - Time: {time.time() - start_time:.3f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
