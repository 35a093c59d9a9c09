"""
Geometría Cuántica - Q-Aware L2O
Julia: "Gradientes exactos, la métrica de Fubini-Study y el precondicionador mezclado"
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh

from qaware.config import get_settings
from qaware.errors import MetricError, SimulationError, SlotReuseError
from qaware.models import CircuitTemplate, PauliSum, StateVector, Task, TaskKind
from qaware.services import reupload
from qaware.services.simulator import (
    apply_gate,
    apply_pauli_generator,
    circuit_expectation,
    init_zero_state,
)

logger = logging.getLogger(__name__)

SHIFT = np.pi / 2

# Tolerancias de las invariantes de la métrica
SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-8


# === Gradiente ===
def circuit_param_shift_grad(circuit: CircuitTemplate, obs: PauliSum, theta: np.ndarray) -> np.ndarray:
    """
    Regla de parameter-shift por ocurrencia de compuerta:
    ∂C/∂θ_k = Σ_occ scale · (C(a + π/2) - C(a - π/2)) / 2
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise SimulationError(f"θ tiene forma {theta.shape}, se esperaba ({circuit.n_params},)")

    grad = np.zeros(circuit.n_params)
    for slot, occurrences in circuit.slot_occurrences.items():
        for index in occurrences:
            plus = circuit_expectation(circuit, theta, obs, shift=(index, SHIFT))
            minus = circuit_expectation(circuit, theta, obs, shift=(index, -SHIFT))
            grad[slot] += circuit.gates[index].scale * (plus - minus) / 2
    return grad


def param_shift_grad(task: Task, theta: np.ndarray) -> np.ndarray:
    if task.kind == TaskKind.REUPLOAD:
        return reupload.reupload_grad(task.circuit, theta, task.train_set)
    return circuit_param_shift_grad(task.circuit, task.observable, theta)


# === Métrica de Fubini-Study ===
def derivative_states(circuit: CircuitTemplate, theta: np.ndarray) -> Tuple[np.ndarray, StateVector]:
    """
    |∂_k ψ⟩ para cada slot: estado previo a la ocurrencia, compuerta, generador (-i/2)P
    y el resto del circuito. Las ocurrencias de un slot compartido se suman con su escala.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise SimulationError(f"θ tiene forma {theta.shape}, se esperaba ({circuit.n_params},)")

    state = init_zero_state(circuit.n_qubits)
    after_gate: Dict[int, StateVector] = {}
    for i, gate in enumerate(circuit.gates):
        angle = circuit.gate_angle(i, theta) if gate.is_parameterized else None
        apply_gate(state, gate, angle)
        if gate.is_parameterized:
            after_gate[i] = state.copy()
    psi = state

    derivs = np.zeros((circuit.n_params, 2 ** circuit.n_qubits), dtype=complex)
    for i, snapshot in after_gate.items():
        gate = circuit.gates[i]
        d = apply_pauli_generator(snapshot, gate)
        for j in range(i + 1, len(circuit.gates)):
            later = circuit.gates[j]
            apply_gate(d, later, circuit.gate_angle(j, theta) if later.is_parameterized else None)
        derivs[gate.param_slot] += gate.scale * d.amplitudes
    return derivs, psi


def metric_tensor(
    circuit: CircuitTemplate, theta: np.ndarray, allow_shared_slots: bool = False
) -> np.ndarray:
    """g_ij = Re(⟨∂_iψ|∂_jψ⟩ - ⟨∂_iψ|ψ⟩⟨ψ|∂_jψ⟩), matriz completa"""
    if circuit.has_shared_slots and not allow_shared_slots:
        shared = [k for k, occ in circuit.slot_occurrences.items() if len(occ) > 1]
        raise SlotReuseError(f"Slots reutilizados: {shared[:10]}")

    derivs, psi = derivative_states(circuit, theta)
    overlaps = derivs.conj() @ derivs.T
    berry = derivs.conj() @ psi.amplitudes
    g = np.real(overlaps - np.outer(berry, berry.conj()))
    return 0.5 * (g + g.T)


def task_metric(task: Task, theta: np.ndarray) -> np.ndarray:
    """Métrica usada por QNGD y L2O; admite los slots compartidos de QAOA"""
    if task.kind == TaskKind.REUPLOAD:
        return reupload.reupload_metric(task.circuit, theta, task.train_set)
    return metric_tensor(task.circuit, theta, allow_shared_slots=True)


# === Pseudo-inversa y precondicionador ===
def pinv_psd(g: np.ndarray, cutoff: Optional[float] = None) -> np.ndarray:
    """Pseudo-inversa de Moore-Penrose por eigendescomposición; autovalores < cutoff -> 0"""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise MetricError(f"La métrica debe ser cuadrada, llegó {g.shape}")
    if not np.all(np.isfinite(g)):
        raise MetricError("La métrica contiene valores no finitos")
    if np.max(np.abs(g - g.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(g), initial=0.0)):
        raise MetricError("La métrica no es simétrica")

    cutoff = get_settings().pinv_cutoff if cutoff is None else cutoff
    eigenvalues, eigenvectors = eigh(g)
    if eigenvalues.size and eigenvalues[0] < -PSD_TOL:
        logger.warning(f"Métrica con autovalor negativo {eigenvalues[0]:.3e}")
    inverse = np.zeros_like(eigenvalues)
    keep = eigenvalues >= cutoff
    inverse[keep] = 1.0 / eigenvalues[keep]
    pinv = (eigenvectors * inverse) @ eigenvectors.T
    return 0.5 * (pinv + pinv.T)


def blend_preconditioner(g_pinv: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """B = D_{1-γ} g† + D_γ (escalado por filas)"""
    g_pinv = np.asarray(g_pinv, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if g_pinv.shape != (gamma.shape[0], gamma.shape[0]):
        raise MetricError(f"Dimensiones incompatibles: g† {g_pinv.shape}, γ {gamma.shape}")
    if np.any(gamma < 0.0) or np.any(gamma > 1.0) or not np.all(np.isfinite(gamma)):
        raise MetricError("γ debe estar en [0, 1]")
    return (1.0 - gamma)[:, None] * g_pinv + np.diag(gamma)


def check_metric(g: np.ndarray) -> List[str]:
    """Lista de invariantes violadas (simetría, PSD); vacía si todo bien"""
    problems = []
    if np.max(np.abs(g - g.T), initial=0.0) > SYMMETRY_TOL:
        problems.append("no simétrica")
    if g.size and np.min(np.linalg.eigvalsh(g)) < -PSD_TOL:
        problems.append("no semidefinida positiva")
    return problems
