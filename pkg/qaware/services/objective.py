"""
Funciones Objetivo - Q-Aware L2O
Julia: "Todos los optimizadores ven la misma interfaz: costo, gradiente, métrica"
"""
import logging
from typing import Optional

import numpy as np

from qaware.errors import SimulationError
from qaware.models import Task, TaskKind
from qaware.services import geometry, reupload
from qaware.services.simulator import circuit_expectation

logger = logging.getLogger(__name__)

# Paso de la diferencia central del Hessiano
HESSIAN_STEP = 1e-4


class Objective:
    """
    Costo C(θ) con gradiente exacto y métrica de Fubini-Study.
    `metric_calls` cuenta las evaluaciones de la métrica.
    """

    def __init__(self, n_params: int, task: Optional[Task] = None):
        self.n_params = n_params
        self.task = task
        self.metric_calls = 0
        self.grad_calls = 0

    @property
    def task_id(self) -> str:
        return self.task.task_id if self.task is not None else "objective"

    def _check(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n_params,):
            raise SimulationError(f"θ tiene forma {theta.shape}, se esperaba ({self.n_params},)")
        return theta

    def cost(self, theta: np.ndarray) -> float:
        raise NotImplementedError

    def _grad(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _metric(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grad(self, theta: np.ndarray) -> np.ndarray:
        self.grad_calls += 1
        return self._grad(self._check(theta))

    def metric(self, theta: np.ndarray) -> np.ndarray:
        self.metric_calls += 1
        return self._metric(self._check(theta))

    def hessian(self, theta: np.ndarray, step: float = HESSIAN_STEP) -> np.ndarray:
        """Diferencia central del gradiente exacto, simetrizada"""
        theta = self._check(theta)
        columns = []
        for k in range(self.n_params):
            e = np.zeros(self.n_params)
            e[k] = step
            columns.append((self._grad(theta + e) - self._grad(theta - e)) / (2 * step))
        hess = np.stack(columns, axis=1)
        return 0.5 * (hess + hess.T)


class CircuitObjective(Objective):
    """⟨ψ(θ)|H|ψ(θ)⟩ para PQC aleatorio, VQE y QAOA"""

    def __init__(self, task: Task):
        super().__init__(task.circuit.n_params, task)

    def cost(self, theta: np.ndarray) -> float:
        return circuit_expectation(self.task.circuit, self._check(theta), self.task.observable)

    def _grad(self, theta: np.ndarray) -> np.ndarray:
        return geometry.circuit_param_shift_grad(self.task.circuit, self.task.observable, theta)

    def _metric(self, theta: np.ndarray) -> np.ndarray:
        return geometry.metric_tensor(self.task.circuit, theta, allow_shared_slots=True)


class ReuploadObjective(Objective):
    """Costo de fidelidades promediado sobre el dataset de entrenamiento"""

    def __init__(self, task: Task):
        super().__init__(task.n_params, task)

    def cost(self, theta: np.ndarray) -> float:
        return reupload.reupload_cost(self.task.circuit, self._check(theta), self.task.train_set)

    def _grad(self, theta: np.ndarray) -> np.ndarray:
        return reupload.reupload_grad(self.task.circuit, theta, self.task.train_set)

    def _metric(self, theta: np.ndarray) -> np.ndarray:
        return reupload.reupload_metric(self.task.circuit, theta, self.task.train_set)


class QuadraticObjective(Objective):
    """C(θ) = θᵀAθ con métrica identidad; gancho clásico para pruebas"""

    def __init__(self, matrix: np.ndarray):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        super().__init__(matrix.shape[0])
        self.matrix = 0.5 * (matrix + matrix.T)

    def cost(self, theta: np.ndarray) -> float:
        theta = self._check(theta)
        return float(theta @ self.matrix @ theta)

    def _grad(self, theta: np.ndarray) -> np.ndarray:
        return 2.0 * self.matrix @ theta

    def _metric(self, theta: np.ndarray) -> np.ndarray:
        return np.eye(self.n_params)


def make_objective(task: Task) -> Objective:
    if task.kind == TaskKind.REUPLOAD:
        return ReuploadObjective(task)
    return CircuitObjective(task)
