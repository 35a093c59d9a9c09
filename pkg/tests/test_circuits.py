"""
Pruebas de los constructores de tareas.

- Conteos de parámetros y compuertas por familia
- Determinismo por semilla
- Compilación de QAOA contra la exponencial densa
- Consistencia MaxCut / SK en la base computacional
- Fidelidades del clasificador de re-upload
"""
import numpy as np
import pytest
from math import pi, sqrt
from scipy.linalg import expm
from scipy.optimize import minimize

from qaware.errors import TaskValidationError
from qaware.models import GateKind, Graph, PauliSum, StateVector, TaskKind
from qaware.services.circuits import (
    build_qaoa_maxcut,
    build_qaoa_sk,
    build_random_pqc,
    build_reupload,
    build_vqe_hea,
    compile_qaoa_layers,
    maxcut_hamiltonian,
    sk_couplings,
)
from qaware.services.geometry import param_shift_grad
from qaware.services.objective import make_objective
from qaware.services.oracles import assignment_bits, cut_values, gen_er_graph
from qaware.services.reupload import encode_angles, fidelities
from qaware.services.simulator import apply_gate, circuit_expectation


def random_state(rng, n_qubits):
    amps = rng.normal(size=2 ** n_qubits) + 1j * rng.normal(size=2 ** n_qubits)
    return amps / np.linalg.norm(amps)


def apply_gates(amps, n_qubits, gates, angle):
    psi = StateVector(n_qubits=n_qubits, amplitudes=amps.copy())
    for gate in gates:
        apply_gate(psi, gate, gate.scale * angle if gate.is_parameterized else None)
    return psi.amplitudes


# =============================================================================
# Random PQC
# =============================================================================

def test_random_pqc_param_count():
    task = build_random_pqc(7, 5, seed=3)
    assert task.kind == TaskKind.RANDOM_PQC
    assert task.circuit.n_params == 35


def test_random_pqc_gate_count():
    task = build_random_pqc(2, 1, seed=11)
    kinds = [g.kind for g in task.circuit.gates]
    assert len(kinds) == 5
    assert kinds[:2] == [GateKind.RY, GateKind.RY]
    assert kinds[-1] == GateKind.CZ
    assert all(g.fixed_angle == pytest.approx(pi / 4) for g in task.circuit.gates[:2])


def test_random_pqc_is_deterministic():
    assert build_random_pqc(4, 3, seed=5).circuit == build_random_pqc(4, 3, seed=5).circuit


def test_random_pqc_observable_is_z0z1():
    task = build_random_pqc(3, 1, seed=0)
    assert [t.label() for t in task.observable.terms] == ["Z0 Z1"]


def test_random_pqc_needs_two_qubits():
    with pytest.raises(TaskValidationError):
        build_random_pqc(1, 2, seed=0)


# =============================================================================
# VQE HEA
# =============================================================================

def test_vqe_hea_param_count():
    h = PauliSum.from_terms([(1.0, {0: "Z", 3: "Z"})])
    assert build_vqe_hea(h, 4, 2).circuit.n_params == 16


def test_vqe_hea_single_qubit_has_no_cnot(z0):
    task = build_vqe_hea(z0, 1, 1)
    assert all(g.kind != GateKind.CNOT for g in task.circuit.gates)


def test_vqe_hea_zero_angles(z0):
    task = build_vqe_hea(z0, 1, 1)
    assert circuit_expectation(task.circuit, np.zeros(2), task.observable) == pytest.approx(1.0)


def test_vqe_hea_rejects_wide_hamiltonian():
    h = PauliSum.from_terms([(1.0, {2: "X"})])
    with pytest.raises(TaskValidationError):
        build_vqe_hea(h, 2, 1)


# =============================================================================
# QAOA MaxCut
# =============================================================================

def test_qaoa_param_count(triangle):
    assert build_qaoa_maxcut(triangle, 3).circuit.n_params == 6


def test_qaoa_triangle_at_zero(triangle):
    task = build_qaoa_maxcut(triangle, 1)
    assert circuit_expectation(task.circuit, np.zeros(2), task.observable) == pytest.approx(-1.5)


def test_qaoa_single_edge_reaches_full_cut(single_edge_qaoa):
    objective = make_objective(single_edge_qaoa)
    grid = [(g, b) for g in np.linspace(0, pi, 13) for b in np.linspace(0, pi / 2, 13)]
    start = min(grid, key=lambda x: objective.cost(np.array(x)))
    result = minimize(objective.cost, np.array(start), jac=objective.grad, method="BFGS", tol=1e-12)
    assert result.fun == pytest.approx(-1.0, abs=1e-8)
    assert np.max(np.abs(param_shift_grad(single_edge_qaoa, result.x))) < 1e-6


def test_qaoa_rejects_empty_graph():
    with pytest.raises(TaskValidationError):
        build_qaoa_maxcut(Graph(n_vertices=3, edges=()), 1)


def test_qaoa_slots_are_shared(triangle):
    circuit = build_qaoa_maxcut(triangle, 2).circuit
    assert circuit.has_shared_slots
    assert len(circuit.slot_occurrences[0]) == 3
    assert len(circuit.slot_occurrences[1]) == 3


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_maxcut_hamiltonian_matches_cut_values(seed):
    graph = gen_er_graph(6, 0.6, seed)
    diag = maxcut_hamiltonian(graph).diagonal(6)
    bits = assignment_bits(np.arange(64), 6)
    np.testing.assert_allclose(-diag, cut_values(graph, bits), atol=1e-12)


@pytest.mark.parametrize("seed", [0, 1])
def test_qaoa_cost_layer_matches_expm(rng, seed):
    graph = Graph.from_pairs(4, [(0, 1, 1.0), (1, 2, 0.5), (0, 3, 2.0), (2, 3, 1.0)])
    couplings = [(i, j, w / 2) for i, j, w in graph.edges]
    gates = compile_qaoa_layers(4, couplings, 1)
    cost_layer = gates[4:4 + 3 * len(graph.edges)]
    mixer = gates[4 + 3 * len(graph.edges):]
    gamma, beta = 0.37 + seed, -0.81 + seed

    amps = random_state(rng, 4)
    h_c = maxcut_hamiltonian(graph).without_identity().to_matrix(4)
    np.testing.assert_allclose(
        apply_gates(amps, 4, cost_layer, gamma), expm(-1j * gamma * h_c) @ amps, atol=1e-8
    )

    h_m = PauliSum.from_terms([(1.0, {q: "X"}) for q in range(4)]).to_matrix(4)
    np.testing.assert_allclose(apply_gates(amps, 4, mixer, beta), expm(-1j * beta * h_m) @ amps, atol=1e-8)


# =============================================================================
# QAOA SK
# =============================================================================

@pytest.mark.parametrize("p_layer", [1, 2, 3, 4, 5])
def test_sk_param_count(p_layer):
    assert build_qaoa_sk(8, p_layer, seed=0).circuit.n_params == 2 * p_layer


def test_sk_couplings_are_deterministic():
    np.testing.assert_array_equal(sk_couplings(6, 4), sk_couplings(6, 4))
    J = sk_couplings(6, 4)
    assert set(np.unique(J[np.triu_indices(6, k=1)])) <= {-1.0, 1.0}
    assert np.all(np.tril(J) == 0)


def test_sk_cost_at_basis_states():
    task = build_qaoa_sk(5, 1, seed=2)
    J = task.metadata["couplings"]
    diag = task.observable.diagonal(5)
    z = 1 - 2 * assignment_bits(np.arange(32), 5)
    direct = np.einsum("ki,ij,kj->k", z, J, z) / sqrt(5)
    np.testing.assert_allclose(diag, direct, atol=1e-12)


def test_sk_needs_two_spins():
    with pytest.raises(TaskValidationError):
        build_qaoa_sk(1, 1, seed=0)


# =============================================================================
# Re-upload
# =============================================================================

def test_reupload_trainable_length():
    task = build_reupload(3, n_train=20, n_test=20)
    assert task.n_params == 20
    assert task.circuit.n_params == 9


def test_reupload_zero_params_cost_is_one():
    task = build_reupload(2, n_train=50, n_test=10, seed=3)
    assert make_objective(task).cost(np.zeros(task.n_params)) == pytest.approx(1.0)


def test_reupload_fidelities_sum_to_one(rng):
    task = build_reupload(3, n_train=64, n_test=8, seed=1)
    params = rng.uniform(-pi, pi, size=task.n_params)
    f0, f1 = fidelities(task.circuit, encode_angles(params, task.train_set.points, task.circuit.n_params))
    np.testing.assert_allclose(f0 + f1, 1.0, atol=1e-12)


def test_reupload_records_radius():
    task = build_reupload(1, n_train=10, n_test=10, radius=0.5)
    assert task.metadata["radius"] == pytest.approx(0.5)


def test_reupload_needs_layers():
    with pytest.raises(TaskValidationError):
        build_reupload(0)
