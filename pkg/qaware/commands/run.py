"""
Run Command - Q-Aware L2O
Julia: "Una tarea, un optimizador, K semillas"
"""
import argparse
import logging
from pathlib import Path

from qaware.config import get_settings
from qaware.schemas import OptimizerSpec, SuiteEntry, SuiteSpec, load_task_spec
from qaware.services import BenchService, summarize

logger = logging.getLogger(__name__)


def build_suite(args: argparse.Namespace) -> SuiteSpec:
    """Una suite de una sola entrada: las celdas y semillas salen igual que en `bench`"""
    task = load_task_spec(args.task)
    optimizer = OptimizerSpec.parse(args.optimizer, lr=args.lr)
    entry = SuiteEntry(task=task, optimizers=[optimizer], replicates=args.seeds, steps=args.steps)
    return SuiteSpec(name=f"run-{optimizer.optimizer_id()}", seed=args.seed, entries=[entry], out_dir=args.out)


def handle(args: argparse.Namespace) -> int:
    suite = build_suite(args)
    records = BenchService(args.threads).run_suite(suite, Path(args.out), base_dir=Path(args.task).parent)
    print(summarize(records).to_string(index=False))
    return 0


def register(subparsers, parents=()):
    parser = subparsers.add_parser(
        "run",
        parents=list(parents),
        help="Corre un optimizador sobre una tarea con varias semillas",
    )
    parser.add_argument("--task", required=True)
    parser.add_argument("--optimizer", required=True, help="gd, momentum, adam, adagrad, rmsprop, qngd, l2o:<ckpt>, l2o-dm:<ckpt>")
    parser.add_argument("--lr", type=float, default=None)
    parser.add_argument("--steps", type=int, default=get_settings().default_steps)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--out", required=True)
    parser.set_defaults(handler=handle)
    return parser
