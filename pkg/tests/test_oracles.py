"""
Pruebas de generadores y oráculos exactos.
"""
import numpy as np
import pytest
from math import sqrt

from qaware.errors import TaskValidationError
from qaware.models import Graph, PauliSum
from qaware.services.circuits import sk_hamiltonian
from qaware.services.oracles import (
    brute_force_maxcut,
    circle_labels,
    default_radius,
    exact_ground_energy,
    gen_circle_dataset,
    gen_er_graph,
)


# =============================================================================
# Grafos Erdős–Rényi
# =============================================================================

def test_er_complete_graph():
    graph = gen_er_graph(5, 1.0, seed=0)
    assert len(graph.edges) == 10
    assert all(w == 1.0 for _, _, w in graph.edges)


def test_er_is_deterministic():
    assert gen_er_graph(5, 0.5, seed=42) == gen_er_graph(5, 0.5, seed=42)


@pytest.mark.parametrize("seed", range(10))
def test_er_never_empty(seed):
    graph = gen_er_graph(3, 0.05, seed)
    assert len(graph.edges) >= 1
    assert graph == gen_er_graph(3, 0.05, seed)


@pytest.mark.parametrize("V,p", [(1, 0.5), (5, 0.0), (5, 1.5)])
def test_er_preconditions(V, p):
    with pytest.raises(TaskValidationError):
        gen_er_graph(V, p, seed=0)


def test_graph_rejects_self_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph.from_pairs(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_pairs(3, [(0, 1), (1, 0)])


# =============================================================================
# Dataset del círculo
# =============================================================================

def test_circle_labels_examples():
    labels = circle_labels(np.array([[0.0, 0.0], [1.0, 1.0]]), sqrt(2))
    np.testing.assert_array_equal(labels, [1, 0])


def test_circle_labels_boundary_is_outside():
    assert sqrt(2) ** 2 > 2.0
    points = np.array([[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [0.0, 1.0], [0.5, 0.0]])
    np.testing.assert_array_equal(circle_labels(points, sqrt(2)), [0, 0, 0, 1, 1])
    np.testing.assert_array_equal(circle_labels(np.array([[0.0, 1.0], [-1.0, 0.0]]), 1.0), [0, 0])


def test_circle_dataset_sizes_and_labels():
    train, test = gen_circle_dataset(200, 4000, seed=0)
    assert len(train) == 200 and len(test) == 4000
    assert np.all(np.abs(train.points) <= 1.0)
    inside = np.hypot(test.points[:, 0], test.points[:, 1]) < test.radius
    np.testing.assert_array_equal(test.labels, inside.astype(int))


def test_circle_dataset_default_radius_is_balanced():
    train, _ = gen_circle_dataset(4000, 1, seed=1)
    assert train.radius == pytest.approx(sqrt(2 / np.pi))
    # π r² / 4 = 1/2
    assert train.label_fraction(1) == pytest.approx(0.5, abs=0.03)


def test_circle_dataset_unbalanced_radius(monkeypatch):
    from qaware.config import get_settings

    monkeypatch.setenv("QAWARE_BALANCED_RADIUS", "false")
    get_settings.cache_clear()
    assert default_radius() == pytest.approx(sqrt(2))


def test_circle_dataset_is_deterministic():
    a, _ = gen_circle_dataset(10, 10, seed=5)
    b, _ = gen_circle_dataset(10, 10, seed=5)
    np.testing.assert_array_equal(a.points, b.points)


# =============================================================================
# MaxCut por fuerza bruta
# =============================================================================

def test_maxcut_triangle(triangle):
    value, _ = brute_force_maxcut(triangle)
    assert value == 2


def test_maxcut_single_edge():
    assert brute_force_maxcut(Graph.from_pairs(2, [(0, 1)])) == (1.0, (0, 1))


def test_maxcut_path_lowest_index_wins():
    value, bits = brute_force_maxcut(Graph.from_pairs(3, [(0, 1), (1, 2)]))
    assert value == 2
    assert bits == (0, 1, 0)


def test_maxcut_weighted():
    graph = Graph.from_pairs(3, [(0, 1, 3.0), (1, 2, 1.0), (0, 2, 1.0)])
    value, _ = brute_force_maxcut(graph)
    assert value == pytest.approx(4.0)


def test_maxcut_guard():
    with pytest.raises(TaskValidationError):
        brute_force_maxcut(Graph.from_pairs(25, [(0, 1)]))


# =============================================================================
# Diagonalización exacta
# =============================================================================

def test_ground_energy_of_z(z0):
    assert exact_ground_energy(z0, 1) == pytest.approx(-1.0)


def test_ground_energy_of_x_plus_z():
    h = PauliSum.from_terms([(1.0, {0: "X"}), (1.0, {0: "Z"})])
    assert exact_ground_energy(h, 1) == pytest.approx(-sqrt(2))


def test_ground_energy_of_two_spin_sk():
    h = sk_hamiltonian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert exact_ground_energy(h, 2) == pytest.approx(-1 / sqrt(2))


def test_ground_energy_guard(z0):
    with pytest.raises(TaskValidationError):
        exact_ground_energy(z0, 13)
