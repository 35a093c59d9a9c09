"""
Meta-Train Command - Q-Aware L2O
Livia: "Entrena el optimizador en una tarea y deja el checkpoint listo"
"""
import argparse
import logging
from pathlib import Path

from qaware.config import get_settings
from qaware.schemas import load_meta_config, load_task
from qaware.services import meta_train

logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    task = load_task(args.task)
    config = load_meta_config(args.config)
    out = Path(args.out) if args.out else Path(get_settings().checkpoint_dir) / f"l2o_{task.task_id}.json"
    result = meta_train(task, config, seed=args.seed, threads=args.threads, out=out)
    logger.info(f"✅ Checkpoint en {out} (etapa {result.best_stage}, schedule final {result.schedule})")
    return 0


def register(subparsers, parents=()):
    parser = subparsers.add_parser(
        "meta-train",
        parents=list(parents),
        help="Meta-entrena el optimizador aprendido con curriculum",
    )
    parser.add_argument("--task", required=True, help="Especificación JSON de la tarea de entrenamiento")
    parser.add_argument("--config", required=True, help="MetaConfig en JSON")
    parser.add_argument("--out", default=None, help="Ruta del checkpoint (por defecto en checkpoint_dir)")
    parser.set_defaults(handler=handle)
    return parser
