"""
Meta-Entrenamiento con Curriculum - Q-Aware L2O
Livia: "Unroll cada vez más largo, y paramos cuando validación ya no mejora"
"""
import copy
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
import torch

from qaware.errors import MetaTrainingAborted
from qaware.models import MetaConfig, Task, TrainingLogRow
from qaware.services.checkpoint import save_checkpoint
from qaware.services.l2o import L2OCell, unroll
from qaware.services.objective import make_objective
from qaware.services.reports import plot_training_log

logger = logging.getLogger(__name__)


def sample_theta0(n_params: int, seed: int) -> np.ndarray:
    """θ0 uniforme en [-π, π) por coordenada"""
    return np.random.default_rng(seed).uniform(-np.pi, np.pi, size=n_params)


@dataclass
class MetaTrainingResult:
    cell: L2OCell
    config: MetaConfig
    log: List[TrainingLogRow] = field(default_factory=list)
    schedule: List[int] = field(default_factory=list)
    best_stage: int = 0

    def log_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.log])


class MetaTrainer:
    """
    Por etapa i con unroll T_i: una trayectoria por meta-iteración con θ0 fresco,
    Adam sobre el meta-gradiente. Al cerrar la etapa se valida a T_{i+1} contra
    el mejor snapshot; si ninguna semilla mejora se termina.
    """

    def __init__(self, task: Task, config: MetaConfig, seed: int = 0, threads: int = 1):
        self.task = task
        self.config = config
        self.seed = seed
        # la validación corre sin grafo, sin Hessiano
        self.validation_config = config.model_copy(update={"detach_gradient": True})
        self.threads = max(1, threads)
        self.objective = make_objective(task)

        generator = torch.Generator().manual_seed(seed)
        self.cell = L2OCell(hidden_size=config.hidden_size, num_layers=config.num_layers)
        self.cell.reset_parameters(config.init_scale, generator=generator)
        self.optimizer = torch.optim.Adam(self.cell.parameters(), lr=config.meta_lr)
        self.rng = np.random.default_rng(seed)
        self.log: List[TrainingLogRow] = []

    # === Validación ===
    def _validation_loss(self, cell: L2OCell, val_seed: int, steps: int) -> float:
        objective = make_objective(self.task)
        theta0 = sample_theta0(self.objective.n_params, val_seed)
        with torch.no_grad():
            result = unroll(objective, theta0, steps, cell, self.validation_config)
        return float(result.outer_loss)

    def validate(self, cell: L2OCell, steps: int) -> List[float]:
        """Pérdida externa por semilla de validación, en el orden de las semillas"""
        seeds = self.config.validation_seeds
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda s: self._validation_loss(cell, s, steps), seeds))

    # === Entrenamiento ===
    def _train_stage(self, stage: int, steps: int):
        finished = 0
        for trajectory in range(self.config.trajectories_per_stage):
            theta0 = self.rng.uniform(-np.pi, np.pi, size=self.objective.n_params)
            self.optimizer.zero_grad()
            result = unroll(self.objective, theta0, steps, self.cell, self.config)
            row = TrainingLogRow(
                kind="train",
                stage=stage,
                unroll=steps,
                trajectory=len(self.log),
                outer_loss=float(result.outer_loss) if not result.diverged else float("inf"),
                mean_loss=float(np.mean(result.losses[1:])) if len(result.losses) > 1 else result.losses[0],
                diverged=result.diverged,
            )
            self.log.append(row)
            if result.diverged:
                logger.warning(f"Trayectoria {trajectory} de la etapa {stage} divergió: {result.failure}")
                continue

            result.outer_loss.backward()
            if self.config.meta_grad_clip is not None:
                torch.nn.utils.clip_grad_norm_(self.cell.parameters(), self.config.meta_grad_clip)
            self.optimizer.step()
            finished += 1

        if finished == 0:
            raise MetaTrainingAborted(
                f"Todas las trayectorias de la etapa {stage} (T={steps}) divergieron"
            )

    def train(self) -> MetaTrainingResult:
        schedule = list(self.config.schedule)
        best_cell: Optional[L2OCell] = None
        best_stage = 0
        stage = 0

        logger.info(f"🚀 Meta-entrenamiento en {self.task.task_id}: schedule {schedule}")
        while stage < len(schedule):
            steps = schedule[stage]
            logger.info(f"Etapa {stage}: unroll T={steps}")
            self._train_stage(stage, steps)

            val_steps = schedule[stage + 1] if stage + 1 < len(schedule) else schedule[-1]
            current = self.validate(self.cell, val_steps)
            accepted = True
            if best_cell is not None:
                previous = self.validate(best_cell, val_steps)
                accepted = any(c < p for c, p in zip(current, previous))
                logger.info(
                    f"Validación T={val_steps}: actual {np.mean(current):.5f} vs mejor {np.mean(previous):.5f}"
                )
            else:
                logger.info(f"Validación T={val_steps}: {np.mean(current):.5f}")

            self.log.append(
                TrainingLogRow(
                    kind="validation",
                    stage=stage,
                    unroll=val_steps,
                    trajectory=len(self.log),
                    outer_loss=float(np.mean(current)),
                    mean_loss=float(np.mean(current)) / val_steps,
                    diverged=not all(np.isfinite(current)),
                    accepted=accepted,
                )
            )

            if not accepted:
                logger.info(f"Sin mejora en validación tras la etapa {stage}; se conserva la etapa {best_stage}")
                break
            best_cell = copy.deepcopy(self.cell)
            best_stage = stage

            if (
                self.config.extend_schedule
                and stage == len(schedule) - 1
                and schedule[-1] + self.config.extend_step <= self.config.max_unroll
            ):
                schedule.append(schedule[-1] + self.config.extend_step)
                logger.info(f"Schedule extendido a T={schedule[-1]}")
            stage += 1

        logger.info(f"✅ Meta-entrenamiento terminado; mejor etapa {best_stage}")
        return MetaTrainingResult(
            cell=best_cell,
            config=self.config,
            log=self.log,
            schedule=schedule,
            best_stage=best_stage,
        )


def meta_train(
    train_task: Task,
    config: MetaConfig,
    seed: int = 0,
    threads: int = 1,
    out: Optional[Union[str, Path]] = None,
) -> MetaTrainingResult:
    result = MetaTrainer(train_task, config, seed=seed, threads=threads).train()
    if out is not None:
        write_training_artifacts(result, out)
    return result


def write_training_artifacts(result: MetaTrainingResult, out: Union[str, Path]) -> Dict[str, Path]:
    """Checkpoint + log CSV + curva SVG junto al checkpoint"""
    out = Path(out)
    paths = {"checkpoint": save_checkpoint(result.cell, result.config, out)}
    log_path = out.with_name(out.stem + "_log.csv")
    result.log_frame().to_csv(log_path, index=False)
    paths["log"] = log_path
    paths["svg"] = plot_training_log(result.log_frame(), out.with_name(out.stem + "_log.svg"))
    return paths
