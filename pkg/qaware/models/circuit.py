"""
Modelos de Circuito - Q-Aware L2O
Julia: "Aquí definimos el estado, las compuertas y los observables"
"""
import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, PrivateAttr, field_validator, model_validator


class GateKind(str, Enum):
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    H = "H"
    CZ = "CZ"
    CNOT = "CNOT"


ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)
TWO_QUBIT = (GateKind.CZ, GateKind.CNOT)

# Generador de cada rotación: R_P(θ) = exp(-iθP/2)
GENERATOR = {GateKind.RX: "X", GateKind.RY: "Y", GateKind.RZ: "Z"}

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


# === Estado ===
class StateVector(BaseModel):
    """
    Vector de estado denso. El qubit 0 es el bit más significativo del índice.
    """
    n_qubits: int
    amplitudes: np.ndarray

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check_length(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != 2 ** self.n_qubits:
            raise ValueError(
                f"Se esperaban {2 ** self.n_qubits} amplitudes, llegaron {amps.shape}"
            )
        self.amplitudes = amps
        return self

    def copy(self) -> "StateVector":
        return StateVector(n_qubits=self.n_qubits, amplitudes=self.amplitudes.copy())

    def tensor(self) -> np.ndarray:
        """Vista (2,)*n sobre las amplitudes; escribir en ella modifica el estado"""
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


# === Compuertas ===
class GateOp(BaseModel):
    kind: GateKind
    targets: Tuple[int, ...]
    param_slot: Optional[int] = None
    fixed_angle: Optional[float] = None
    # Ángulo efectivo = scale * θ[param_slot] (QAOA escala por peso de arista)
    scale: float = 1.0

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_shape(self):
        if any(t < 0 for t in self.targets):
            raise ValueError(f"Target negativo en {self.kind.value}: {self.targets}")
        if self.kind in ROTATIONS:
            if len(self.targets) != 1:
                raise ValueError(f"{self.kind.value} necesita exactamente un target")
            if (self.param_slot is None) == (self.fixed_angle is None):
                raise ValueError(
                    f"{self.kind.value} necesita exactamente uno de param_slot o fixed_angle"
                )
            if self.param_slot is not None and self.param_slot < 0:
                raise ValueError("param_slot negativo")
            if not math.isfinite(self.scale):
                raise ValueError("scale no finito")
        elif self.kind == GateKind.H:
            if len(self.targets) != 1:
                raise ValueError("H necesita exactamente un target")
            self._check_no_angle()
        else:
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError(f"{self.kind.value} necesita dos targets distintos")
            self._check_no_angle()
        return self

    def _check_no_angle(self):
        if self.param_slot is not None or self.fixed_angle is not None:
            raise ValueError(f"{self.kind.value} no lleva ángulo")

    @property
    def is_parameterized(self) -> bool:
        return self.param_slot is not None

    @property
    def generator(self) -> Optional[str]:
        return GENERATOR.get(self.kind)

    @classmethod
    def rotation(
        cls,
        kind: GateKind,
        target: int,
        slot: Optional[int] = None,
        angle: Optional[float] = None,
        scale: float = 1.0,
    ) -> "GateOp":
        return cls(kind=kind, targets=(target,), param_slot=slot, fixed_angle=angle, scale=scale)

    @classmethod
    def h(cls, target: int) -> "GateOp":
        return cls(kind=GateKind.H, targets=(target,))

    @classmethod
    def cz(cls, a: int, b: int) -> "GateOp":
        return cls(kind=GateKind.CZ, targets=(a, b))

    @classmethod
    def cnot(cls, control: int, target: int) -> "GateOp":
        return cls(kind=GateKind.CNOT, targets=(control, target))


# === Observables ===
class PauliTerm(BaseModel):
    coefficient: float
    # Pares (qubit, letra) ordenados por qubit; vacío = identidad
    ops: Tuple[Tuple[int, str], ...] = ()

    class Config:
        frozen = True

    @field_validator("ops", mode="before")
    @classmethod
    def _accept_mapping(cls, value):
        if isinstance(value, dict):
            value = value.items()
        return tuple(sorted(tuple(pair) for pair in value))

    @model_validator(mode="after")
    def _check_ops(self):
        if not math.isfinite(self.coefficient):
            raise ValueError(f"Coeficiente no finito: {self.coefficient}")
        qubits = [q for q, _ in self.ops]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"Qubit repetido dentro del término: {self.ops}")
        for q, letter in self.ops:
            if q < 0:
                raise ValueError(f"Índice de qubit negativo: {q}")
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"Letra de Pauli desconocida: {letter}")
        return self

    @property
    def is_identity(self) -> bool:
        return len(self.ops) == 0

    @property
    def is_diagonal(self) -> bool:
        return all(letter == "Z" for _, letter in self.ops)

    @property
    def max_qubit(self) -> int:
        return max((q for q, _ in self.ops), default=-1)

    def label(self) -> str:
        if self.is_identity:
            return "I"
        return " ".join(f"{letter}{q}" for q, letter in self.ops)


class PauliSum(BaseModel):
    terms: Tuple[PauliTerm, ...]

    class Config:
        frozen = True

    @classmethod
    def from_terms(cls, terms: List[Tuple[float, Dict[int, str]]]) -> "PauliSum":
        return cls(terms=tuple(PauliTerm(coefficient=c, ops=ops) for c, ops in terms))

    @property
    def n_qubits_required(self) -> int:
        return 1 + max((t.max_qubit for t in self.terms), default=-1)

    @property
    def is_diagonal(self) -> bool:
        return all(t.is_diagonal for t in self.terms)

    def without_identity(self) -> "PauliSum":
        return PauliSum(terms=tuple(t for t in self.terms if not t.is_identity))

    def check_qubits(self, n_qubits: int):
        needed = self.n_qubits_required
        if needed > n_qubits:
            raise ValueError(
                f"El observable usa el qubit {needed - 1} pero el estado tiene {n_qubits}"
            )

    def diagonal(self, n_qubits: int) -> np.ndarray:
        """Diagonal en la base computacional (solo términos Z)"""
        if not self.is_diagonal:
            raise ValueError("El observable tiene términos no diagonales")
        self.check_qubits(n_qubits)
        idx = np.arange(2 ** n_qubits)
        # z_q = +1 para bit 0, -1 para bit 1 (qubit 0 = MSB)
        z = 1 - 2 * ((idx[None, :] >> (n_qubits - 1 - np.arange(n_qubits)[:, None])) & 1)
        diag = np.zeros(2 ** n_qubits)
        for term in self.terms:
            values = np.ones(2 ** n_qubits)
            for q, _ in term.ops:
                values = values * z[q]
            diag += term.coefficient * values
        return diag

    def to_matrix(self, n_qubits: int) -> np.ndarray:
        """Matriz densa 2^n x 2^n; solo para oráculos y pruebas"""
        self.check_qubits(n_qubits)
        dim = 2 ** n_qubits
        matrix = np.zeros((dim, dim), dtype=complex)
        for term in self.terms:
            letters = dict(term.ops)
            op = np.array([[1.0 + 0j]])
            for q in range(n_qubits):
                op = np.kron(op, PAULI_MATRICES[letters.get(q, "I")])
            matrix += term.coefficient * op
        return matrix


# === Plantilla de circuito ===
class CircuitTemplate(BaseModel):
    n_qubits: int
    gates: Tuple[GateOp, ...]
    n_params: int

    _occurrences: Dict[int, Tuple[int, ...]] = PrivateAttr(default_factory=dict)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check_slots(self):
        if self.n_qubits < 1:
            raise ValueError("El circuito necesita al menos un qubit")
        occurrences: Dict[int, List[int]] = {k: [] for k in range(self.n_params)}
        for i, gate in enumerate(self.gates):
            if any(t >= self.n_qubits for t in gate.targets):
                raise ValueError(f"Target fuera de rango en {gate.kind.value}{gate.targets}")
            if gate.param_slot is not None:
                if gate.param_slot >= self.n_params:
                    raise ValueError(f"Slot {gate.param_slot} >= n_params={self.n_params}")
                occurrences[gate.param_slot].append(i)
        missing = [k for k, v in occurrences.items() if not v]
        if missing:
            raise ValueError(f"Slots sin compuerta: {missing}")
        self._occurrences = {k: tuple(v) for k, v in occurrences.items()}
        return self

    @property
    def slot_occurrences(self) -> Dict[int, Tuple[int, ...]]:
        return self._occurrences

    @property
    def has_shared_slots(self) -> bool:
        return any(len(v) > 1 for v in self.slot_occurrences.values())

    def gate_angle(self, index: int, theta: np.ndarray) -> float:
        gate = self.gates[index]
        if gate.param_slot is None:
            return gate.fixed_angle if gate.fixed_angle is not None else 0.0
        return gate.scale * float(theta[gate.param_slot])
