"""
Generadores y Oráculos - Q-Aware L2O
Julia: "Grafos, datasets y las respuestas exactas contra las que medimos todo"
"""
import logging
from typing import Optional, Tuple

import networkx as nx
import numpy as np
from scipy.linalg import eigh

from qaware.config import get_settings
from qaware.errors import TaskValidationError
from qaware.models import Graph, LabeledDataset, PauliSum

logger = logging.getLogger(__name__)

# Bloque de enumeración para la fuerza bruta
ENUM_CHUNK = 1 << 16

MAX_RESAMPLES = 1000


# === Grafos Erdős–Rényi ===
def _derived_seed(seed: int, attempt: int) -> int:
    return int(np.random.default_rng([seed, attempt]).integers(0, 2**31 - 1))


def gen_er_graph(n_vertices: int, p: float, seed: int) -> Graph:
    """G(V, p) sin pesos; si sale sin aristas se re-muestrea con una semilla derivada"""
    if n_vertices < 2:
        raise TaskValidationError(f"El grafo necesita al menos 2 vértices, llegó {n_vertices}")
    if not 0.0 < p <= 1.0:
        raise TaskValidationError(f"p debe estar en (0, 1], llegó {p}")

    current_seed = seed
    for attempt in range(MAX_RESAMPLES):
        g = nx.gnp_random_graph(n_vertices, p, seed=current_seed)
        if g.number_of_edges() > 0:
            if attempt > 0:
                logger.info(f"Grafo ER re-muestreado {attempt} veces (semilla base {seed})")
            return Graph.from_pairs(n_vertices, list(g.edges()))
        current_seed = _derived_seed(seed, attempt + 1)
    raise TaskValidationError(f"No se obtuvo un grafo con aristas tras {MAX_RESAMPLES} intentos")


# === Dataset del círculo ===
def default_radius() -> float:
    """sqrt(2/π) balancea las clases en [-1,1]^2; sqrt(2) deja todo adentro"""
    if get_settings().balanced_radius:
        return float(np.sqrt(2.0 / np.pi))
    return float(np.sqrt(2.0))


def circle_labels(points: np.ndarray, radius: float) -> np.ndarray:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    # norma contra radio: radius**2 redondea hacia arriba en el borde
    return (np.hypot(points[:, 0], points[:, 1]) < radius).astype(int)


def gen_circle_dataset(
    n_train: int, n_test: int, seed: int, radius: Optional[float] = None
) -> Tuple[LabeledDataset, LabeledDataset]:
    if n_train < 1 or n_test < 1:
        raise TaskValidationError("Los tamaños de train y test deben ser >= 1")
    radius = default_radius() if radius is None else float(radius)
    if radius <= 0:
        raise TaskValidationError(f"El radio debe ser positivo, llegó {radius}")

    rng = np.random.default_rng(seed)
    train_points = rng.uniform(-1.0, 1.0, size=(n_train, 2))
    test_points = rng.uniform(-1.0, 1.0, size=(n_test, 2))
    train = LabeledDataset(points=train_points, labels=circle_labels(train_points, radius), radius=radius)
    test = LabeledDataset(points=test_points, labels=circle_labels(test_points, radius), radius=radius)
    return train, test


# === MaxCut por fuerza bruta ===
def assignment_bits(indices: np.ndarray, n_vertices: int) -> np.ndarray:
    """Bits de cada índice; el vértice 0 es el bit más significativo (como el qubit 0)"""
    shifts = n_vertices - 1 - np.arange(n_vertices)
    return (indices[:, None] >> shifts[None, :]) & 1


def cut_values(graph: Graph, bits: np.ndarray) -> np.ndarray:
    values = np.zeros(bits.shape[0])
    for i, j, w in graph.edges:
        values += w * (bits[:, i] != bits[:, j])
    return values


def brute_force_maxcut(graph: Graph) -> Tuple[float, Tuple[int, ...]]:
    """Máximo corte y una asignación óptima; gana el índice binario más bajo en empates"""
    limit = get_settings().brute_force_max_vertices
    if graph.n_vertices > limit:
        raise TaskValidationError(f"Fuerza bruta limitada a {limit} vértices, llegaron {graph.n_vertices}")

    best_value = -np.inf
    best_index = 0
    total = 1 << graph.n_vertices
    for start in range(0, total, ENUM_CHUNK):
        indices = np.arange(start, min(start + ENUM_CHUNK, total), dtype=np.int64)
        values = cut_values(graph, assignment_bits(indices, graph.n_vertices))
        k = int(np.argmax(values))
        # Estrictamente mayor: un bloque posterior nunca gana un empate
        if values[k] > best_value:
            best_value = float(values[k])
            best_index = int(indices[k])

    bits = assignment_bits(np.array([best_index]), graph.n_vertices)[0]
    return best_value, tuple(int(b) for b in bits)


# === Diagonalización exacta ===
def exact_ground_energy(hamiltonian: PauliSum, n_qubits: int) -> float:
    limit = get_settings().exact_diag_max_qubits
    if n_qubits > limit:
        raise TaskValidationError(f"Diagonalización exacta limitada a {limit} qubits, llegaron {n_qubits}")
    try:
        hamiltonian.check_qubits(n_qubits)
    except ValueError as e:
        raise TaskValidationError(str(e)) from e

    if hamiltonian.is_diagonal:
        return float(np.min(hamiltonian.diagonal(n_qubits)))
    matrix = hamiltonian.to_matrix(n_qubits)
    eigenvalues = eigh(matrix, eigvals_only=True, subset_by_index=[0, 0])
    return float(eigenvalues[0])
