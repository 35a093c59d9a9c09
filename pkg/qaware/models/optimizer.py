"""
Modelos de Optimizadores - Q-Aware L2O
Julia: "Los hiperparámetros por defecto de los baselines, tal cual la tabla"
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, model_validator


class OptimizerKind(str, Enum):
    GD = "gd"
    MOMENTUM = "momentum"
    ADAM = "adam"
    ADAGRAD = "adagrad"
    RMSPROP = "rmsprop"
    QNGD = "qngd"


class BaselineConfig(BaseModel):
    kind: OptimizerKind
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    rho: float = 0.9
    momentum: float = 0.9
    qng_lambda: float = 0.01

    @model_validator(mode="after")
    def _check_ranges(self):
        if not self.lr > 0:
            raise ValueError(f"lr debe ser positivo, llegó {self.lr}")
        for name in ("beta1", "beta2", "rho", "momentum"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} fuera de [0, 1): {value}")
        if not self.eps > 0:
            raise ValueError("eps debe ser positivo")
        if self.qng_lambda < 0:
            raise ValueError("qng_lambda no puede ser negativo")
        return self

    @property
    def needs_metric(self) -> bool:
        return self.kind == OptimizerKind.QNGD

    def optimizer_id(self) -> str:
        return f"{self.kind.value}(lr={self.lr:g})"


class OptState(BaseModel):
    """Acumuladores por coordenada y contador de pasos"""
    step: int = 0
    first_moment: Optional[np.ndarray] = None
    second_moment: Optional[np.ndarray] = None
    velocity: Optional[np.ndarray] = None
    sq_grad_sum: Optional[np.ndarray] = None

    class Config:
        arbitrary_types_allowed = True

    @classmethod
    def zeros(cls, n_params: int) -> "OptState":
        return cls(
            step=0,
            first_moment=np.zeros(n_params),
            second_moment=np.zeros(n_params),
            velocity=np.zeros(n_params),
            sq_grad_sum=np.zeros(n_params),
        )
