"""
Pruebas de los esquemas de entrada: tareas, optimizadores, suites y configuraciones
"""
import json
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from qaware.errors import OptimizerConfigError, TaskValidationError
from qaware.models import L2OMode, OptimizerKind, TaskKind
from qaware.schemas import (
    LrGrid,
    LrSearch,
    OptimizerSpec,
    SuiteSpec,
    load_meta_config,
    load_suite,
    load_task,
    parse_task_spec,
)

DATA = Path(__file__).resolve().parents[1] / "data"


# =============================================================================
# Tareas
# =============================================================================

@pytest.mark.parametrize("path", sorted((DATA / "tasks").glob("*.json")), ids=lambda p: p.stem)
def test_bundled_tasks_build(path):
    task = load_task(path)
    assert task.n_params > 0


def test_ring_task_resolves_graph_relative_to_file():
    task = load_task(DATA / "tasks" / "qaoa_maxcut_ring6_p1.json")
    assert task.kind == TaskKind.QAOA_MAXCUT
    assert task.circuit.n_qubits == 6
    assert task.n_params == 2


def test_h2_task_reads_hamiltonian():
    task = load_task(DATA / "tasks" / "vqe_h2_hea_l2.json")
    assert task.circuit.n_qubits == 4
    assert task.n_params == 16


def test_unknown_task_kind():
    with pytest.raises(TaskValidationError):
        parse_task_spec({"kind": "grover", "n": 3})


def test_task_extra_fields_forbidden():
    with pytest.raises(TaskValidationError):
        parse_task_spec({"kind": "random_pqc", "n_qubits": 3, "layers": 1, "depth": 4})


def test_maxcut_needs_one_graph_source():
    with pytest.raises(TaskValidationError):
        parse_task_spec({"kind": "qaoa_maxcut", "p_layer": 1})
    with pytest.raises(TaskValidationError):
        parse_task_spec({
            "kind": "qaoa_maxcut", "p_layer": 1, "graph_file": "g.json",
            "er": {"vertices": 4, "p": 0.5},
        })


def test_missing_and_invalid_files(tmp_path):
    with pytest.raises(TaskValidationError):
        load_task(tmp_path / "nope.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{kind: random_pqc", encoding="utf-8")
    with pytest.raises(TaskValidationError):
        load_task(broken)


# =============================================================================
# Optimizadores
# =============================================================================

def test_learned_optimizer_names():
    full = OptimizerSpec.parse("l2o:checkpoints/a.json")
    assert full.is_l2o
    assert full.mode == L2OMode.FULL
    assert full.checkpoint == "checkpoints/a.json"
    assert full.optimizer_id() == "l2o"

    dm = OptimizerSpec.parse("l2o-dm:b.json")
    assert dm.mode == L2OMode.IDENTITY_PRECOND
    assert dm.optimizer_id() == "l2o-dm"


def test_learned_optimizer_needs_checkpoint():
    with pytest.raises(OptimizerConfigError):
        OptimizerSpec.parse("l2o")


def test_unknown_optimizer():
    with pytest.raises(OptimizerConfigError):
        OptimizerSpec.parse("lbfgs")


def test_baseline_config_and_id():
    spec = OptimizerSpec.parse("momentum", lr=0.05)
    config = spec.baseline_config()
    assert config.kind == OptimizerKind.MOMENTUM
    assert config.lr == 0.05
    assert spec.optimizer_id() == "momentum(lr=0.05)"
    assert OptimizerSpec(name="adam", label="adam-tuned").optimizer_id() == "adam-tuned"


def test_bad_hyperparameters():
    spec = OptimizerSpec(name="rmsprop", hyperparams={"rho": 1.5})
    with pytest.raises(OptimizerConfigError):
        spec.baseline_config()


def test_lr_grid():
    assert LrGrid(values=[0.1, 0.2]).expand() == [0.1, 0.2]
    assert LrGrid(log_min=-3, log_max=-1, n=3).expand() == pytest.approx([1e-3, 1e-2, 1e-1])
    with pytest.raises(OptimizerConfigError):
        LrGrid(log_min=-3).expand()


def test_lr_search_is_seeded():
    rates = LrSearch(n=6, low=1e-3, high=1e-1, seed=4).expand()
    assert rates == LrSearch(n=6, low=1e-3, high=1e-1, seed=4).expand()
    assert all(1e-3 <= r <= 1e-1 for r in rates)
    with pytest.raises(OptimizerConfigError):
        LrSearch(low=0.1, high=0.01).expand()


def test_expand_drops_search_fields():
    spec = OptimizerSpec(name="gd", lr_grid=LrGrid(values=[0.1, 0.01]))
    expanded = spec.expand()
    assert [s.lr for s in expanded] == [0.1, 0.01]
    assert all(s.lr_grid is None for s in expanded)


def test_learned_optimizer_has_no_lr_grid():
    with pytest.raises(ValidationError):
        OptimizerSpec(name="l2o:a.json", lr_grid=LrGrid(values=[0.1]))


# =============================================================================
# Suites y configuraciones
# =============================================================================

@pytest.mark.parametrize("path", sorted((DATA / "suites").glob("*.json")), ids=lambda p: p.stem)
def test_bundled_suites_validate(path):
    suite = load_suite(path)
    assert suite.entries
    for entry in suite.entries:
        assert entry.optimizer_specs()


def test_ablation_suite_labels():
    suite = load_suite(DATA / "suites" / "ablation.json")
    ids = [spec.optimizer_id() for spec in suite.entries[0].optimizer_specs()]
    assert ids == ["l2o", "l2o-dm", "l2o-no-curriculum"]


@pytest.mark.parametrize("path", sorted((DATA / "suites").glob("*.json")), ids=lambda p: p.stem)
def test_bundled_suites_have_unique_optimizer_ids(path):
    suite = load_suite(path)
    for entry in suite.entries:
        ids = [spec.optimizer_id() for spec in entry.optimizer_specs()]
        assert len(ids) == len(set(ids))


def test_bundled_suites_use_the_pqc_checkpoint():
    for path in sorted((DATA / "suites").glob("*.json")):
        if path.stem == "ablation":
            continue
        for entry in load_suite(path).entries:
            for spec in entry.optimizer_specs():
                if spec.is_l2o:
                    assert spec.checkpoint == "checkpoints/l2o_pqc.json", path.stem


def test_maxcut_suite_sweeps_qngd_learning_rates():
    entry = load_suite(DATA / "suites" / "qaoa_maxcut.json").entries[0]
    assert (entry.task.er.vertices, entry.task.er.p, entry.task.p_layer) == (5, 0.5, 3)
    rates = [spec.lr for spec in entry.optimizer_specs() if spec.name == "qngd"]
    np.testing.assert_allclose(sorted(rates), np.logspace(-4, -2, 5))
    assert [spec.name for spec in entry.optimizer_specs() if spec.is_l2o] == ["l2o"]


def test_random_pqc_suite_uses_unseen_sizes():
    suite = load_suite(DATA / "suites" / "random_pqc.json")
    shapes = [(e.task.n_qubits, e.task.layers, e.task.seed) for e in suite.entries]
    assert len(shapes) == 10
    assert all(n in (6, 7, 8) and l in (4, 5, 6) for n, l, _ in shapes)
    # la instancia de meta-entrenamiento no se evalúa
    assert (7, 5, 0) not in shapes


def test_protocol_suites_sizes():
    sk = load_suite(DATA / "suites" / "qaoa_sk.json").entries[0]
    assert (sk.task.n, sk.task.p_layer, sk.replicates) == (6, 3, 5)
    baselines = {spec.name for spec in sk.optimizer_specs() if not spec.is_l2o}
    assert baselines == {"gd", "momentum", "adam", "adagrad", "rmsprop", "qngd"}

    ablation = load_suite(DATA / "suites" / "ablation.json").entries[0]
    assert (ablation.task.n_qubits, ablation.task.layers) == (7, 8)

    reupload = load_suite(DATA / "suites" / "reupload.json").entries[0]
    assert "gd" in {spec.name for spec in reupload.optimizer_specs()}
    assert load_suite(DATA / "suites" / "vqe_h2.json").entries[0].replicates == 10


def test_suite_validation(tmp_path):
    with pytest.raises(ValidationError):
        SuiteSpec.model_validate({"entries": []})
    bad = tmp_path / "suite.json"
    bad.write_text(json.dumps({"entries": [{
        "task": {"kind": "random_pqc", "n_qubits": 2, "layers": 1},
        "optimizers": ["gd"],
        "replicates": 0,
    }]}), encoding="utf-8")
    with pytest.raises(TaskValidationError):
        load_suite(bad)


def test_meta_configs():
    assert load_meta_config(DATA / "configs" / "meta_default.json").schedule == [10, 20, 40, 60, 80]
    assert load_meta_config(DATA / "configs" / "meta_no_curriculum.json").schedule == [80]
    identity = load_meta_config(DATA / "configs" / "meta_identity_precond.json")
    assert identity.mode == L2OMode.IDENTITY_PRECOND


def test_meta_config_rejects_unsorted_schedule(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"schedule": [20, 10]}), encoding="utf-8")
    with pytest.raises(TaskValidationError):
        load_meta_config(path)
