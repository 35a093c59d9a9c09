"""
Report Command - Q-Aware L2O
Elena: "De los resultados a tablas y figuras"
"""
import argparse

from qaware.services import load_records, report
from qaware.services.reports import REPORT_KINDS


def handle(args: argparse.Namespace) -> int:
    records = load_records(args.in_dir)
    report(records, args.kind, args.out, early_step=args.early_step)
    return 0


def register(subparsers, parents=()):
    parser = subparsers.add_parser("report", parents=list(parents), help="Genera CSV, JSON o SVG desde resultados")
    parser.add_argument("--in", dest="in_dir", required=True, help="Directorio de salida de run/bench")
    parser.add_argument("--kind", required=True, choices=REPORT_KINDS)
    parser.add_argument("--out", required=True)
    parser.add_argument("--early-step", type=int, default=10, help="Paso de la barra temprana en svg_bars")
    parser.set_defaults(handler=handle)
    return parser
