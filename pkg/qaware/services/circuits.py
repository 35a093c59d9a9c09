"""
Constructores de Tareas - Q-Aware L2O
Julia: "Cinco familias de benchmark, todas deterministas dada la semilla"
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from qaware.errors import TaskValidationError
from qaware.models import (
    CircuitTemplate,
    GateKind,
    GateOp,
    Graph,
    LabeledDataset,
    PauliSum,
    PauliTerm,
    Task,
    TaskKind,
)
from qaware.services.oracles import gen_circle_dataset

logger = logging.getLogger(__name__)

# Capa fija inicial del PQC aleatorio
PQC_INIT_ANGLE = np.pi / 4

# Rotaciones candidatas por qubit y capa
PQC_ROTATIONS = (GateKind.RX, GateKind.RY, GateKind.RZ)


def _build_circuit(n_qubits: int, gates: List[GateOp], n_params: int) -> CircuitTemplate:
    try:
        return CircuitTemplate(n_qubits=n_qubits, gates=tuple(gates), n_params=n_params)
    except ValueError as e:
        raise TaskValidationError(f"Circuito inválido: {e}") from e


# === PQC aleatorio ===
def build_random_pqc(
    n_qubits: int, layers: int, seed: int, task_id: Optional[str] = None
) -> Task:
    """
    RY(π/4) en cada qubit, luego por capa una rotación aleatoria en {X,Y,Z}
    por qubit y una cadena de CZ. Observable Z0 Z1.
    """
    if n_qubits < 2:
        raise TaskValidationError(f"El PQC aleatorio necesita al menos 2 qubits, llegó {n_qubits}")
    if layers < 1:
        raise TaskValidationError(f"layers debe ser >= 1, llegó {layers}")

    rng = np.random.default_rng(seed)
    gates = [GateOp.rotation(GateKind.RY, q, angle=PQC_INIT_ANGLE) for q in range(n_qubits)]
    for layer in range(layers):
        choices = rng.integers(0, len(PQC_ROTATIONS), size=n_qubits)
        for q in range(n_qubits):
            gates.append(
                GateOp.rotation(PQC_ROTATIONS[choices[q]], q, slot=layer * n_qubits + q)
            )
        for q in range(n_qubits - 1):
            gates.append(GateOp.cz(q, q + 1))

    observable = PauliSum.from_terms([(1.0, {0: "Z", 1: "Z"})])
    return Task(
        task_id=task_id or f"random_pqc_n{n_qubits}_l{layers}_s{seed}",
        kind=TaskKind.RANDOM_PQC,
        circuit=_build_circuit(n_qubits, gates, n_qubits * layers),
        observable=observable,
        metadata={"n_qubits": n_qubits, "layers": layers, "seed": seed},
    )


# === VQE con ansatz hardware-efficient ===
def build_vqe_hea(
    hamiltonian: PauliSum,
    n_qubits: int,
    layers: int,
    task_id: Optional[str] = None,
    source: Optional[str] = None,
) -> Task:
    if layers < 1:
        raise TaskValidationError(f"layers debe ser >= 1, llegó {layers}")
    if n_qubits < 1:
        raise TaskValidationError("El ansatz necesita al menos un qubit")
    if hamiltonian.n_qubits_required > n_qubits:
        raise TaskValidationError(
            f"El Hamiltoniano usa el qubit {hamiltonian.n_qubits_required - 1} "
            f"pero el ansatz tiene {n_qubits}"
        )

    gates: List[GateOp] = []
    for layer in range(layers):
        base = layer * 2 * n_qubits
        for q in range(n_qubits):
            gates.append(GateOp.rotation(GateKind.RY, q, slot=base + 2 * q))
            gates.append(GateOp.rotation(GateKind.RZ, q, slot=base + 2 * q + 1))
        for q in range(n_qubits - 1):
            gates.append(GateOp.cnot(q, q + 1))

    return Task(
        task_id=task_id or f"vqe_hea_n{n_qubits}_l{layers}",
        kind=TaskKind.VQE_HEA,
        circuit=_build_circuit(n_qubits, gates, 2 * n_qubits * layers),
        observable=hamiltonian,
        metadata={"n_qubits": n_qubits, "layers": layers, "hamiltonian_source": source},
    )


# === QAOA ===
def compile_qaoa_layers(
    n_qubits: int, couplings: List[Tuple[int, int, float]], p_layer: int
) -> List[GateOp]:
    """
    Compila Π_l exp(-iβ_l Σ X) exp(-iγ_l Σ c_ij Z_i Z_j) precedido de H en todos los qubits.
    exp(-iγ c ZZ) = CNOT · RZ_j(2cγ) · CNOT; exp(-iβ X) = RX(2β).
    Slots: γ_l = 2l, β_l = 2l + 1.
    """
    gates = [GateOp.h(q) for q in range(n_qubits)]
    for layer in range(p_layer):
        gamma_slot, beta_slot = 2 * layer, 2 * layer + 1
        for i, j, c in couplings:
            gates.append(GateOp.cnot(i, j))
            gates.append(GateOp.rotation(GateKind.RZ, j, slot=gamma_slot, scale=2.0 * c))
            gates.append(GateOp.cnot(i, j))
        for q in range(n_qubits):
            gates.append(GateOp.rotation(GateKind.RX, q, slot=beta_slot, scale=2.0))
    return gates


def maxcut_hamiltonian(graph: Graph) -> PauliSum:
    """H_C = Σ (w/2)(Z_i Z_j - I); -⟨z|H_C|z⟩ es el valor del corte"""
    terms = []
    for i, j, w in graph.edges:
        terms.append(PauliTerm(coefficient=w / 2, ops={i: "Z", j: "Z"}))
        terms.append(PauliTerm(coefficient=-w / 2, ops={}))
    return PauliSum(terms=tuple(terms))


def build_qaoa_maxcut(graph: Graph, p_layer: int, task_id: Optional[str] = None) -> Task:
    if p_layer < 1:
        raise TaskValidationError(f"p_layer debe ser >= 1, llegó {p_layer}")
    if not graph.edges:
        raise TaskValidationError("El grafo no tiene aristas")

    # Coeficiente de Z_i Z_j en H_C es w/2
    couplings = [(i, j, w / 2) for i, j, w in graph.edges]
    gates = compile_qaoa_layers(graph.n_vertices, couplings, p_layer)
    return Task(
        task_id=task_id or f"qaoa_maxcut_v{graph.n_vertices}_e{len(graph.edges)}_p{p_layer}",
        kind=TaskKind.QAOA_MAXCUT,
        circuit=_build_circuit(graph.n_vertices, gates, 2 * p_layer),
        observable=maxcut_hamiltonian(graph),
        metadata={"graph": graph, "p_layer": p_layer},
    )


def sk_couplings(n: int, seed: int) -> np.ndarray:
    """Matriz triangular superior de J_ij = ±1"""
    rng = np.random.default_rng(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(n, n))
    return np.triu(signs, k=1)


def sk_hamiltonian(J: np.ndarray) -> PauliSum:
    n = J.shape[0]
    norm = 1.0 / np.sqrt(n)
    terms = [
        PauliTerm(coefficient=float(J[i, j] * norm), ops={i: "Z", j: "Z"})
        for i in range(n)
        for j in range(i + 1, n)
        if J[i, j] != 0
    ]
    return PauliSum(terms=tuple(terms))


def build_qaoa_sk(n: int, p_layer: int, seed: int, task_id: Optional[str] = None) -> Task:
    if n < 2:
        raise TaskValidationError(f"El modelo SK necesita n >= 2, llegó {n}")
    if p_layer < 1:
        raise TaskValidationError(f"p_layer debe ser >= 1, llegó {p_layer}")

    J = sk_couplings(n, seed)
    hamiltonian = sk_hamiltonian(J)
    couplings = [(i, j, float(J[i, j]) / np.sqrt(n)) for i in range(n) for j in range(i + 1, n)]
    gates = compile_qaoa_layers(n, couplings, p_layer)
    return Task(
        task_id=task_id or f"qaoa_sk_n{n}_p{p_layer}_s{seed}",
        kind=TaskKind.QAOA_SK,
        circuit=_build_circuit(n, gates, 2 * p_layer),
        observable=hamiltonian,
        metadata={"n": n, "p_layer": p_layer, "seed": seed, "couplings": J},
    )


# === Clasificador de re-upload ===
def reupload_template(layers: int) -> CircuitTemplate:
    """Plantilla por punto: RZ, RY, RZ por capa con slots frescos (φ = x̃·ω + θ)"""
    gates = []
    for layer in range(layers):
        gates.append(GateOp.rotation(GateKind.RZ, 0, slot=3 * layer))
        gates.append(GateOp.rotation(GateKind.RY, 0, slot=3 * layer + 1))
        gates.append(GateOp.rotation(GateKind.RZ, 0, slot=3 * layer + 2))
    return _build_circuit(1, gates, 3 * layers)


def build_reupload(
    layers: int,
    train_set: Optional[LabeledDataset] = None,
    test_set: Optional[LabeledDataset] = None,
    seed: int = 0,
    n_train: int = 200,
    n_test: int = 4000,
    radius: Optional[float] = None,
    task_id: Optional[str] = None,
) -> Task:
    if layers < 1:
        raise TaskValidationError(f"layers debe ser >= 1, llegó {layers}")
    if train_set is None:
        train_set, generated_test = gen_circle_dataset(n_train, n_test, seed, radius=radius)
        test_set = test_set or generated_test

    return Task(
        task_id=task_id or f"reupload_l{layers}_s{seed}",
        kind=TaskKind.REUPLOAD,
        circuit=reupload_template(layers),
        observable=None,
        metadata={"layers": layers, "seed": seed, "radius": train_set.radius},
        train_set=train_set,
        test_set=test_set,
    )
