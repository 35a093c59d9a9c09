"""
Simulador de Vector de Estado - Q-Aware L2O
Julia: "El sustrato numérico de todas las funciones de costo"

Convención: R_P(θ) = exp(-iθP/2) y el qubit 0 es el bit más significativo.
Las compuertas se aplican in-place por stride de qubit, sin matrices 2^n x 2^n.
"""
import logging
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from qaware.config import get_settings
from qaware.errors import SimulationError
from qaware.models import CircuitTemplate, GateKind, GateOp, PauliSum, StateVector

logger = logging.getLogger(__name__)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# Tolerancia para la parte imaginaria de un valor esperado
IMAG_TOL = 1e-10


def init_zero_state(n_qubits: int) -> StateVector:
    """|0...0⟩ con guarda de memoria"""
    max_qubits = get_settings().max_qubits
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= max_qubits:
        raise SimulationError(f"n_qubits debe estar en [1, {max_qubits}], llegó {n_qubits}")
    amplitudes = np.zeros(2 ** int(n_qubits), dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(n_qubits=int(n_qubits), amplitudes=amplitudes)


# === Matrices de rotación ===
def rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if kind == GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == GateKind.RZ:
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)
    raise SimulationError(f"{kind} no es una rotación")


def rotation_matrices(kind: GateKind, angles: np.ndarray) -> np.ndarray:
    """Versión vectorizada: (N,) ángulos -> (N, 2, 2)"""
    angles = np.asarray(angles, dtype=float)
    c, s = np.cos(angles / 2), np.sin(angles / 2)
    out = np.zeros(angles.shape + (2, 2), dtype=complex)
    if kind == GateKind.RX:
        out[..., 0, 0], out[..., 0, 1] = c, -1j * s
        out[..., 1, 0], out[..., 1, 1] = -1j * s, c
    elif kind == GateKind.RY:
        out[..., 0, 0], out[..., 0, 1] = c, -s
        out[..., 1, 0], out[..., 1, 1] = s, c
    elif kind == GateKind.RZ:
        out[..., 0, 0] = np.exp(-0.5j * angles)
        out[..., 1, 1] = np.exp(0.5j * angles)
    else:
        raise SimulationError(f"{kind} no es una rotación")
    return out


# === Aplicación de compuertas ===
def _slice(n_qubits: int, fixed: dict) -> tuple:
    index = [slice(None)] * n_qubits
    for q, bit in fixed.items():
        index[q] = bit
    return tuple(index)


def _check_targets(state: StateVector, targets: Tuple[int, ...]):
    for t in targets:
        if not 0 <= t < state.n_qubits:
            raise SimulationError(f"Target {t} fuera de rango para {state.n_qubits} qubits")


def _apply_single(state: StateVector, qubit: int, matrix: np.ndarray):
    psi = state.tensor()
    i0 = _slice(state.n_qubits, {qubit: 0})
    i1 = _slice(state.n_qubits, {qubit: 1})
    a0 = psi[i0].copy()
    a1 = psi[i1].copy()
    psi[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    psi[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def apply_pauli(state: StateVector, qubit: int, letter: str) -> StateVector:
    """Aplica X, Y o Z in-place sobre un qubit"""
    psi = state.tensor()
    i0 = _slice(state.n_qubits, {qubit: 0})
    i1 = _slice(state.n_qubits, {qubit: 1})
    if letter == "X":
        a0 = psi[i0].copy()
        psi[i0] = psi[i1]
        psi[i1] = a0
    elif letter == "Y":
        # Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
        a0 = psi[i0].copy()
        psi[i0] = -1j * psi[i1]
        psi[i1] = 1j * a0
    elif letter == "Z":
        psi[i1] *= -1
    else:
        raise SimulationError(f"Letra de Pauli desconocida: {letter}")
    return state


def apply_gate(state: StateVector, gate: GateOp, angle: Optional[float] = None) -> StateVector:
    """
    Aplica la compuerta in-place y regresa el mismo estado.
    Para rotaciones con slot, `angle` es el ángulo efectivo (ya escalado).
    """
    _check_targets(state, gate.targets)
    kind = gate.kind
    if kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
        if angle is None:
            if gate.fixed_angle is None:
                raise SimulationError(f"{kind.value} con slot {gate.param_slot} necesita ángulo")
            angle = gate.fixed_angle
        _apply_single(state, gate.targets[0], rotation_matrix(kind, angle))
    elif kind == GateKind.H:
        _apply_single(state, gate.targets[0], HADAMARD)
    elif kind == GateKind.CZ:
        a, b = gate.targets
        state.tensor()[_slice(state.n_qubits, {a: 1, b: 1})] *= -1
    elif kind == GateKind.CNOT:
        control, target = gate.targets
        psi = state.tensor()
        i10 = _slice(state.n_qubits, {control: 1, target: 0})
        i11 = _slice(state.n_qubits, {control: 1, target: 1})
        tmp = psi[i10].copy()
        psi[i10] = psi[i11]
        psi[i11] = tmp
    else:
        raise SimulationError(f"Compuerta desconocida: {kind}")
    return state


def apply_pauli_generator(state: StateVector, gate: GateOp) -> StateVector:
    """Regresa un estado nuevo (-i/2)·P|ψ⟩ con P el generador de la rotación"""
    if gate.generator is None:
        raise SimulationError(f"{gate.kind.value} no es una compuerta parametrizada")
    _check_targets(state, gate.targets)
    out = apply_pauli(state.copy(), gate.targets[0], gate.generator)
    out.amplitudes *= -0.5j
    return out


# === Mediciones ===
@lru_cache(maxsize=64)
def _cached_diagonal(obs: PauliSum, n_qubits: int) -> np.ndarray:
    diag = obs.diagonal(n_qubits)
    diag.setflags(write=False)
    return diag


def expectation(state: StateVector, obs: PauliSum) -> float:
    """Σ_k c_k ⟨ψ|P_k|ψ⟩ con verificación de hermiticidad"""
    try:
        obs.check_qubits(state.n_qubits)
    except ValueError as e:
        raise SimulationError(str(e)) from e

    if obs.is_diagonal:
        probs = np.abs(state.amplitudes) ** 2
        return float(np.dot(_cached_diagonal(obs, state.n_qubits), probs))

    total = 0.0 + 0.0j
    scale = 0.0
    for term in obs.terms:
        scale += abs(term.coefficient)
        if term.is_identity:
            total += term.coefficient * np.vdot(state.amplitudes, state.amplitudes)
            continue
        phi = state.copy()
        for q, letter in term.ops:
            apply_pauli(phi, q, letter)
        total += term.coefficient * np.vdot(state.amplitudes, phi.amplitudes)

    if abs(total.imag) > IMAG_TOL * max(1.0, scale):
        raise SimulationError(f"Valor esperado con parte imaginaria {total.imag:.3e}")
    return float(total.real)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """⟨a|b⟩, conjugado-lineal en a"""
    if a.n_qubits != b.n_qubits:
        raise SimulationError(f"Dimensiones distintas: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# === Circuitos completos ===
def run_circuit(
    circuit: CircuitTemplate,
    theta: np.ndarray,
    initial: Optional[StateVector] = None,
    shift: Optional[Tuple[int, float]] = None,
) -> StateVector:
    """
    U(θ)|ψ0⟩. `shift=(gate_index, delta)` desplaza solo el ángulo de esa ocurrencia
    (regla de parameter-shift por compuerta).
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise SimulationError(f"θ tiene forma {theta.shape}, se esperaba ({circuit.n_params},)")
    if initial is None:
        state = init_zero_state(circuit.n_qubits)
    else:
        if initial.n_qubits != circuit.n_qubits:
            raise SimulationError("El estado inicial no coincide con el circuito")
        state = initial.copy()

    for i, gate in enumerate(circuit.gates):
        angle = None
        if gate.is_parameterized:
            angle = circuit.gate_angle(i, theta)
            if shift is not None and shift[0] == i:
                angle += shift[1]
        elif shift is not None and shift[0] == i and gate.fixed_angle is not None:
            angle = gate.fixed_angle + shift[1]
        apply_gate(state, gate, angle)
    return state


def circuit_expectation(
    circuit: CircuitTemplate,
    theta: np.ndarray,
    obs: PauliSum,
    shift: Optional[Tuple[int, float]] = None,
) -> float:
    return expectation(run_circuit(circuit, theta, shift=shift), obs)
