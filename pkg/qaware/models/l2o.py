"""
Modelos del Optimizador Aprendido - Q-Aware L2O
Julia: "La receta del meta-entrenamiento, configurable de punta a punta"
"""
import hashlib
import json
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class L2OMode(str, Enum):
    FULL = "full"
    # Ablación tipo L2O-DM: B = I, nunca se calcula la métrica
    IDENTITY_PRECOND = "identity_precond"


class MetaConfig(BaseModel):
    # Curriculum
    schedule: List[int] = Field(default_factory=lambda: [10, 20, 40, 60, 80])
    extend_schedule: bool = False
    extend_step: int = 20
    max_unroll: int = 200

    # Meta-optimizador
    meta_lr: float = 1e-3
    trajectories_per_stage: int = 20
    validation_seeds: List[int] = Field(default_factory=lambda: [1000, 1001, 1002, 1003, 1004])
    meta_grad_clip: Optional[float] = None

    # Pesos w_t de la pérdida externa; None = todos 1
    step_weights: Optional[List[float]] = None

    # Red
    hidden_size: int = 20
    num_layers: int = 2
    init_scale: float = 0.1
    lambda_a: float = 0.01
    lambda_b: float = 0.01
    preprocess_p: float = 10.0
    mode: L2OMode = L2OMode.FULL

    # Política de detach
    detach_gradient: bool = True
    detach_metric: bool = True

    @model_validator(mode="after")
    def _check_schedule(self):
        if not self.schedule:
            raise ValueError("El schedule no puede estar vacío")
        if any(t < 1 for t in self.schedule):
            raise ValueError("Cada longitud de unroll debe ser >= 1")
        if any(b <= a for a, b in zip(self.schedule, self.schedule[1:])):
            raise ValueError(f"El schedule debe ser estrictamente creciente: {self.schedule}")
        if self.step_weights is not None and len(self.step_weights) < self.longest_unroll:
            raise ValueError(
                f"step_weights necesita al menos {self.longest_unroll} pesos, "
                f"llegaron {len(self.step_weights)}"
            )
        if not self.detach_metric:
            raise ValueError("detach_metric=False no está soportado (g† siempre es constante)")
        if self.trajectories_per_stage < 1:
            raise ValueError("trajectories_per_stage debe ser >= 1")
        if not self.validation_seeds:
            raise ValueError("Se necesita al menos una semilla de validación")
        return self

    @property
    def longest_unroll(self) -> int:
        if self.extend_schedule:
            return max(self.max_unroll, self.schedule[-1])
        return self.schedule[-1]

    def weights_for(self, horizon: int) -> List[float]:
        if self.step_weights is None:
            return [1.0] * horizon
        return list(self.step_weights[:horizon])

    def config_hash(self) -> str:
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()
