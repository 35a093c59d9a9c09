"""
Pruebas del meta-entrenamiento con curriculum (configuraciones diminutas)
"""
import math

import numpy as np
import pandas as pd
import pytest
import torch

from qaware.errors import MetaTrainingAborted
from qaware.models import MetaConfig
from qaware.services import meta_trainer
from qaware.services.checkpoint import load_checkpoint
from qaware.services.circuits import build_random_pqc
from qaware.services.l2o import UnrollResult
from qaware.services.meta_trainer import MetaTrainer, meta_train, sample_theta0


@pytest.fixture
def task():
    return build_random_pqc(3, 2, seed=4)


def tiny_config(**kwargs) -> MetaConfig:
    values = dict(
        schedule=[2, 3],
        trajectories_per_stage=2,
        validation_seeds=[100, 101],
        hidden_size=4,
        meta_lr=0.01,
    )
    values.update(kwargs)
    return MetaConfig(**values)


def test_sample_theta0_range_and_seed():
    theta = sample_theta0(500, seed=3)
    assert theta.shape == (500,)
    assert np.all((theta >= -np.pi) & (theta < np.pi))
    np.testing.assert_array_equal(theta, sample_theta0(500, seed=3))


@pytest.mark.slow
def test_meta_train_writes_artifacts(task, tmp_path):
    out = tmp_path / "l2o.json"
    result = meta_train(task, tiny_config(), seed=1, out=out)

    assert result.cell is not None
    assert result.best_stage in (0, 1)
    assert out.is_file()
    log = pd.read_csv(tmp_path / "l2o_log.csv")
    assert (tmp_path / "l2o_log.svg").read_text(encoding="utf-8").startswith("<?xml")
    assert set(log["kind"]) <= {"train", "validation"}
    assert (log["kind"] == "train").sum() >= 2
    assert list(log["trajectory"]) == list(range(len(log)))

    cell, config = load_checkpoint(out)
    assert config == tiny_config()
    for a, b in zip(cell.parameters(), result.cell.parameters()):
        assert torch.equal(a, b)


@pytest.mark.slow
def test_meta_train_is_deterministic(task, tmp_path):
    meta_train(task, tiny_config(), seed=5, threads=1, out=tmp_path / "a.json")
    meta_train(task, tiny_config(), seed=5, threads=2, out=tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_training_moves_the_weights(task):
    trainer = MetaTrainer(task, tiny_config(schedule=[2]), seed=0)
    before = [p.detach().clone() for p in trainer.cell.parameters()]
    trainer._train_stage(0, 2)
    changed = [not torch.equal(a, b) for a, b in zip(before, trainer.cell.parameters())]
    assert any(changed)


def test_validation_skips_the_hessian(task, monkeypatch):
    trainer = MetaTrainer(task, tiny_config(detach_gradient=False), seed=0)

    def no_hessian(self, theta, *args, **kwargs):
        raise AssertionError("hessian en validación")

    monkeypatch.setattr(type(trainer.objective), "hessian", no_hessian)
    losses = trainer.validate(trainer.cell, 2)
    assert len(losses) == 2 and all(math.isfinite(v) for v in losses)
    assert trainer.config.detach_gradient is False


def test_stage_acceptance_uses_any_seed(task, monkeypatch):
    trainer = MetaTrainer(task, tiny_config(schedule=[1, 2, 3], trajectories_per_stage=1), seed=0)
    # Por etapa: [actual] o [actual, mejor]
    answers = iter([
        [1.0, 1.0],
        [0.9, 2.0], [1.0, 1.0],  # una semilla mejora: se acepta
        [1.5, 1.5], [1.0, 1.0],  # ninguna mejora: se termina
    ])
    monkeypatch.setattr(trainer, "validate", lambda cell, steps: next(answers))

    result = trainer.train()
    validation = [row for row in result.log if row.kind == "validation"]
    assert [row.accepted for row in validation] == [True, True, False]
    assert result.best_stage == 1


def test_rejected_stage_keeps_best_snapshot(task, monkeypatch):
    trainer = MetaTrainer(task, tiny_config(schedule=[1, 2], trajectories_per_stage=1), seed=0)
    snapshots = []

    def validate(cell, steps):
        snapshots.append(cell)
        return [1.0, 1.0] if len(snapshots) == 1 else [2.0, 2.0] if cell is trainer.cell else [1.0, 1.0]

    monkeypatch.setattr(trainer, "validate", validate)
    result = trainer.train()
    assert result.best_stage == 0
    assert result.cell is not trainer.cell
    assert result.cell is snapshots[-1]


def test_schedule_extension(task, monkeypatch):
    config = tiny_config(schedule=[1, 2], trajectories_per_stage=1, extend_schedule=True,
                         extend_step=1, max_unroll=4)
    trainer = MetaTrainer(task, config, seed=0)
    monkeypatch.setattr(trainer, "validate", lambda cell, steps: [0.0] if cell is trainer.cell else [1.0])
    result = trainer.train()
    assert result.schedule == [1, 2, 3, 4]
    assert result.best_stage == 3


def test_all_diverged_stage_aborts(task, monkeypatch):
    def diverged(objective, theta0, steps, cell, config, weights=None):
        return UnrollResult(
            outer_loss=torch.tensor(math.inf, dtype=torch.float64),
            losses=[0.0],
            thetas=[np.asarray(theta0)],
            diverged=True,
            failure="pérdida no finita",
        )

    monkeypatch.setattr(meta_trainer, "unroll", diverged)
    trainer = MetaTrainer(task, tiny_config(), seed=0)
    with pytest.raises(MetaTrainingAborted):
        trainer.train()
    assert all(row.diverged for row in trainer.log)
