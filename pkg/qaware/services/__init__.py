"""
Services - Q-Aware L2O
"""
from .objective import (
    Objective,
    make_objective,
)
from .baselines import (
    baseline_step,
    run_baseline,
)
from .l2o import (
    L2OCell,
    L2OOptimizer,
    unroll,
    meta_grad,
)
from .checkpoint import (
    save_checkpoint,
    load_checkpoint,
)
from .meta_trainer import (
    MetaTrainer,
    MetaTrainingResult,
    meta_train,
)
from .reports import (
    load_records,
    report,
)
from .bench import (
    BenchService,
    get_bench_service,
    run_suite,
    summarize,
)

__all__ = [
    # Objective
    "Objective",
    "make_objective",
    # Baselines
    "baseline_step",
    "run_baseline",
    # L2O
    "L2OCell",
    "L2OOptimizer",
    "unroll",
    "meta_grad",
    "save_checkpoint",
    "load_checkpoint",
    # Meta-entrenamiento
    "MetaTrainer",
    "MetaTrainingResult",
    "meta_train",
    # Bench
    "BenchService",
    "get_bench_service",
    "run_suite",
    "summarize",
    "load_records",
    "report",
]
