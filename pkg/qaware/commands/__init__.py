"""
Commands - Q-Aware L2O
Aurelia: "Todos los sub-comandos organizados por módulo"
"""
from .meta_train import register as register_meta_train
from .run import register as register_run
from .bench import register as register_bench
from .report import register as register_report

COMMANDS = [
    register_meta_train,
    register_run,
    register_bench,
    register_report,
]

__all__ = [
    "COMMANDS",
    "register_meta_train",
    "register_run",
    "register_bench",
    "register_report",
]
