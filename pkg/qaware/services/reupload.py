"""
Clasificador de Re-upload - Q-Aware L2O
Julia: "Un solo qubit, muchos puntos: todo vectorizado sobre el dataset"

Vector entrenable: [θ (3L), ω (3L), α0, α1]. Para cada punto x se usa
x̃ = (x1, x2, 0) y el ángulo del slot (l, k) es φ = x̃_k ω_{l,k} + θ_{l,k}.
"""
import logging
from typing import Tuple

import numpy as np

from qaware.errors import SimulationError
from qaware.models import CircuitTemplate, GateOp, LabeledDataset
from qaware.services.simulator import rotation_matrices

logger = logging.getLogger(__name__)

SHIFT = np.pi / 2


def split_params(params: np.ndarray, n_slots: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    params = np.asarray(params, dtype=float)
    if params.shape != (2 * n_slots + 2,):
        raise SimulationError(
            f"Vector entrenable con forma {params.shape}, se esperaba ({2 * n_slots + 2},)"
        )
    return params[:n_slots], params[n_slots:2 * n_slots], params[2 * n_slots:]


def padded_features(points: np.ndarray, n_slots: int) -> np.ndarray:
    """x̃ repetido por capa: (N, 3L)"""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    padded = np.concatenate([points, np.zeros((points.shape[0], 1))], axis=1)
    return np.tile(padded, (1, n_slots // 3))


def encode_angles(params: np.ndarray, points: np.ndarray, n_slots: int) -> np.ndarray:
    theta, omega, _ = split_params(params, n_slots)
    return padded_features(points, n_slots) * omega[None, :] + theta[None, :]


def _apply_one(states: np.ndarray, gate: GateOp, phi: np.ndarray) -> np.ndarray:
    matrices = rotation_matrices(gate.kind, gate.scale * phi[:, gate.param_slot])
    return np.einsum("nij,nj->ni", matrices, states)


def _apply_batched(states: np.ndarray, circuit: CircuitTemplate, phi: np.ndarray, start: int = 0):
    for gate in circuit.gates[start:]:
        states = _apply_one(states, gate, phi)
    return states


def batched_states(circuit: CircuitTemplate, phi: np.ndarray) -> np.ndarray:
    """Estados finales (N, 2) de la plantilla de un qubit para cada fila de ángulos"""
    states = np.zeros((phi.shape[0], 2), dtype=complex)
    states[:, 0] = 1.0
    return _apply_batched(states, circuit, phi)


def fidelities(circuit: CircuitTemplate, phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    states = batched_states(circuit, phi)
    probs = np.abs(states) ** 2
    return probs[:, 0], probs[:, 1]


def point_costs(alpha: np.ndarray, f0: np.ndarray, f1: np.ndarray, labels: np.ndarray) -> np.ndarray:
    return (alpha[0] * f0 - (1 - labels)) ** 2 + (alpha[1] * f1 - labels) ** 2


# === Costo, gradiente y métrica ===
def reupload_cost(circuit: CircuitTemplate, params: np.ndarray, dataset: LabeledDataset) -> float:
    n_slots = circuit.n_params
    _, _, alpha = split_params(params, n_slots)
    f0, f1 = fidelities(circuit, encode_angles(params, dataset.points, n_slots))
    return float(np.mean(point_costs(alpha, f0, f1, dataset.labels)))


def reupload_grad(circuit: CircuitTemplate, params: np.ndarray, dataset: LabeledDataset) -> np.ndarray:
    """Parameter-shift sobre F0 por punto + regla de la cadena; α analítico"""
    n_slots = circuit.n_params
    _, _, alpha = split_params(params, n_slots)
    phi = encode_angles(params, dataset.points, n_slots)
    features = padded_features(dataset.points, n_slots)
    labels = dataset.labels
    f0, f1 = fidelities(circuit, phi)

    r0 = alpha[0] * f0 - (1 - labels)
    r1 = alpha[1] * f1 - labels

    dphi = np.zeros_like(phi)
    for s in range(n_slots):
        plus, minus = phi.copy(), phi.copy()
        plus[:, s] += SHIFT
        minus[:, s] -= SHIFT
        df0 = (fidelities(circuit, plus)[0] - fidelities(circuit, minus)[0]) / 2
        # F1 = 1 - F0
        dphi[:, s] = 2 * r0 * alpha[0] * df0 - 2 * r1 * alpha[1] * df0

    grad = np.empty(2 * n_slots + 2)
    grad[:n_slots] = dphi.mean(axis=0)
    grad[n_slots:2 * n_slots] = (dphi * features).mean(axis=0)
    grad[2 * n_slots] = np.mean(2 * r0 * f0)
    grad[2 * n_slots + 1] = np.mean(2 * r1 * f1)
    return grad


def point_metrics(circuit: CircuitTemplate, phi: np.ndarray) -> np.ndarray:
    """Métrica de Fubini-Study por punto respecto a φ: (N, 3L, 3L)"""
    n_points, n_gates = phi.shape[0], len(circuit.gates)
    forward = [None] * n_gates
    states = np.zeros((n_points, 2), dtype=complex)
    states[:, 0] = 1.0
    for i, gate in enumerate(circuit.gates):
        states = _apply_one(states, gate, phi)
        forward[i] = states
    psi = states

    derivs = np.zeros((n_points, circuit.n_params, 2), dtype=complex)
    for i, gate in enumerate(circuit.gates):
        d = _apply_generator(forward[i], gate.generator)
        d = _apply_batched(d, circuit, phi, start=i + 1)
        derivs[:, gate.param_slot, :] += gate.scale * d

    overlaps = np.einsum("nia,nja->nij", derivs.conj(), derivs)
    berry = np.einsum("nia,na->ni", derivs.conj(), psi)
    g = np.real(overlaps - berry[:, :, None] * berry.conj()[:, None, :])
    return 0.5 * (g + np.transpose(g, (0, 2, 1)))


def _apply_generator(states: np.ndarray, letter: str) -> np.ndarray:
    out = np.empty_like(states)
    if letter == "X":
        out[:, 0], out[:, 1] = states[:, 1], states[:, 0]
    elif letter == "Y":
        out[:, 0], out[:, 1] = -1j * states[:, 1], 1j * states[:, 0]
    else:
        out[:, 0], out[:, 1] = states[:, 0], -states[:, 1]
    return -0.5j * out


def reupload_metric(circuit: CircuitTemplate, params: np.ndarray, dataset: LabeledDataset) -> np.ndarray:
    """
    Promedio sobre puntos de J^T g_φ J con J = [I | diag(x̃)]; bloque identidad para α.
    """
    n_slots = circuit.n_params
    phi = encode_angles(params, dataset.points, n_slots)
    g = point_metrics(circuit, phi)

    features = padded_features(dataset.points, n_slots)
    scale = np.concatenate([np.ones_like(features), features], axis=1)
    tiled = np.tile(g, (1, 2, 2))
    block = np.mean(tiled * scale[:, :, None] * scale[:, None, :], axis=0)

    metric = np.eye(2 * n_slots + 2)
    metric[:2 * n_slots, :2 * n_slots] = block
    return metric


# === Clasificación ===
def classifier_predictions(circuit: CircuitTemplate, params: np.ndarray, points: np.ndarray) -> np.ndarray:
    """1 si F1 > F0; los empates van a 0"""
    f0, f1 = fidelities(circuit, encode_angles(params, points, circuit.n_params))
    return (f1 > f0).astype(int)


def classifier_accuracy(circuit: CircuitTemplate, params: np.ndarray, dataset: LabeledDataset) -> float:
    predictions = classifier_predictions(circuit, params, dataset.points)
    return float(np.mean(predictions == dataset.labels))
