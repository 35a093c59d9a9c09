"""
Bench Command - Q-Aware L2O
Livia: "La suite completa, reanudable si se corta"
"""
import argparse
import logging
from pathlib import Path

from qaware.schemas import load_suite
from qaware.services import BenchService, summarize

logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    suite = load_suite(args.suite)
    if args.seed_given:
        # --seed explícito manda sobre la semilla de la suite
        suite = suite.model_copy(update={"seed": args.seed})
    out = Path(args.out) if args.out else None
    records = BenchService(args.threads).run_suite(suite, out, base_dir=Path(args.suite).parent)
    print(summarize(records).to_string(index=False))
    return 0


def register(subparsers, parents=()):
    parser = subparsers.add_parser("bench", parents=list(parents), help="Ejecuta una suite de experimentos")
    parser.add_argument("--suite", required=True)
    parser.add_argument("--out", default=None, help="Directorio de resultados (por defecto el de la suite)")
    parser.set_defaults(handler=handle)
    return parser
