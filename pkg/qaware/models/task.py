"""
Modelos de Tarea - Q-Aware L2O
Julia: "Cada familia de benchmark, todo bien categorizadito"
"""
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .circuit import CircuitTemplate, PauliSum


class TaskKind(str, Enum):
    RANDOM_PQC = "random_pqc"
    VQE_HEA = "vqe_hea"
    QAOA_MAXCUT = "qaoa_maxcut"
    QAOA_SK = "qaoa_sk"
    REUPLOAD = "reupload"


# === Grafos ===
class Graph(BaseModel):
    n_vertices: int
    # (i, j, peso) con i < j
    edges: Tuple[Tuple[int, int, float], ...]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_edges(self):
        seen = set()
        for i, j, w in self.edges:
            if i == j:
                raise ValueError(f"Auto-lazo en el vértice {i}")
            if not (0 <= i < j < self.n_vertices):
                raise ValueError(f"Arista inválida ({i}, {j}) para {self.n_vertices} vértices")
            if (i, j) in seen:
                raise ValueError(f"Arista duplicada ({i}, {j})")
            if not math.isfinite(w):
                raise ValueError(f"Peso no finito en ({i}, {j})")
            seen.add((i, j))
        return self

    @classmethod
    def from_pairs(cls, n_vertices: int, pairs: List[Tuple], default_weight: float = 1.0) -> "Graph":
        """Acepta (i, j) o (i, j, w) en cualquier orden y normaliza a i < j"""
        edges = []
        for pair in pairs:
            i, j = int(pair[0]), int(pair[1])
            w = float(pair[2]) if len(pair) > 2 else default_weight
            edges.append((min(i, j), max(i, j), w))
        return cls(n_vertices=n_vertices, edges=tuple(sorted(edges)))


# === Datasets ===
class LabeledDataset(BaseModel):
    points: np.ndarray  # (N, 2) en [-1, 1]^2
    labels: np.ndarray  # (N,) en {0, 1}
    radius: float

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_shapes(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        self.labels = np.asarray(self.labels, dtype=int).reshape(-1)
        if self.points.shape[0] != self.labels.shape[0]:
            raise ValueError("points y labels con longitudes distintas")
        if self.points.shape[0] == 0:
            raise ValueError("Dataset vacío")
        return self

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def label_fraction(self, label: int) -> float:
        return float(np.mean(self.labels == label))


# === Tarea ===
class Task(BaseModel):
    """
    El optimizee: circuito + observable (o regla de re-upload) + metadatos.
    Para REUPLOAD el circuito es la plantilla por punto con 3*layers slots de ángulo
    y el vector entrenable vive en el objetivo (θ, ω, α0, α1).
    """
    task_id: str
    kind: TaskKind
    circuit: CircuitTemplate
    observable: Optional[PauliSum] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)
    train_set: Optional[LabeledDataset] = None
    test_set: Optional[LabeledDataset] = None

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_observable(self):
        if self.kind == TaskKind.REUPLOAD:
            if self.train_set is None:
                raise ValueError("La tarea de re-upload necesita dataset de entrenamiento")
        else:
            if self.observable is None:
                raise ValueError(f"La tarea {self.kind.value} necesita observable")
            self.observable.check_qubits(self.circuit.n_qubits)
        return self

    @property
    def n_params(self) -> int:
        if self.kind == TaskKind.REUPLOAD:
            # θ (3L) + ω (3L) + α0, α1
            return 2 * self.circuit.n_params + 2
        return self.circuit.n_params
