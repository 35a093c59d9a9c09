"""
Models - Q-Aware L2O
Aurelia: "Exportamos todo desde aquí para imports limpios"
"""
from .circuit import (
    GateKind,
    GateOp,
    PauliTerm,
    PauliSum,
    StateVector,
    CircuitTemplate,
)
from .task import (
    TaskKind,
    Graph,
    LabeledDataset,
    Task,
)
from .optimizer import (
    OptimizerKind,
    BaselineConfig,
    OptState,
)
from .l2o import (
    L2OMode,
    MetaConfig,
)
from .run import (
    RunRecord,
    TrainingLogRow,
)

__all__ = [
    # Circuit
    "GateKind",
    "GateOp",
    "PauliTerm",
    "PauliSum",
    "StateVector",
    "CircuitTemplate",
    # Task
    "TaskKind",
    "Graph",
    "LabeledDataset",
    "Task",
    # Optimizer
    "OptimizerKind",
    "BaselineConfig",
    "OptState",
    # L2O
    "L2OMode",
    "MetaConfig",
    # Run
    "RunRecord",
    "TrainingLogRow",
]
