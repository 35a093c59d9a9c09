"""
Modelos de Corridas - Q-Aware L2O
Julia: "Una trayectoria = (tarea, optimizador, semilla), con todo lo que pasó"
"""
import math
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class RunRecord(BaseModel):
    task_id: str
    optimizer_id: str
    seed: int
    replicate: int = 0
    # losses[0] es la pérdida inicial
    losses: List[float]
    wall_ms: List[float] = Field(default_factory=list)
    final_metrics: Dict[str, float] = Field(default_factory=dict)
    final_theta: List[float] = Field(default_factory=list)
    diverged: bool = False
    failure: Optional[str] = None

    @model_validator(mode="after")
    def _check_finite(self):
        # Una corrida divergente se corta en el último valor finito
        if any(not math.isfinite(v) for v in self.losses):
            raise ValueError("Pérdida no finita; marca la corrida como divergente y córtala")
        if not self.losses:
            raise ValueError("Una corrida necesita al menos la pérdida inicial")
        return self

    @property
    def steps(self) -> int:
        return len(self.losses) - 1

    @property
    def final_loss(self) -> float:
        return self.losses[-1]

    def loss_at(self, step: int) -> float:
        return self.losses[min(step, len(self.losses) - 1)]


class TrainingLogRow(BaseModel):
    """Fila del log de meta-entrenamiento (curva de entrenamiento/validación)"""
    kind: str  # "train" | "validation"
    stage: int
    unroll: int
    trajectory: int
    outer_loss: float
    mean_loss: float
    diverged: bool = False
    accepted: Optional[bool] = None
