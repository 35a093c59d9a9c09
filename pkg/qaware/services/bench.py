"""
Harness de Experimentos - Q-Aware L2O
Livia: "Cada celda (tarea, optimizador, réplica) es reproducible y reanudable"
"""
import hashlib
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import torch

from qaware.config import get_settings
from qaware.errors import TaskValidationError
from qaware.models import LabeledDataset, RunRecord, Task, TaskKind
from qaware.schemas import OptimizerSpec, SuiteSpec, parse_task_spec
from qaware.services import reupload
from qaware.services.baselines import run_baseline
from qaware.services.checkpoint import load_checkpoint
from qaware.services.circuits import reupload_template
from qaware.services.l2o import L2OOptimizer
from qaware.services.meta_trainer import sample_theta0
from qaware.services.objective import make_objective
from qaware.services.reports import metrics_frame, records_frame, timings_frame
from qaware.services.oracles import brute_force_maxcut, exact_ground_energy

logger = logging.getLogger(__name__)

# Paso de la comparación temprana (barras 10 vs final)
EARLY_STEP = 10


# === Semillas ===
def cell_seed(suite_seed: int, task_id: str, optimizer_id: str, replicate: int) -> int:
    """sha256("suite_seed|task_id|optimizer_id|replicate") reducido a 63 bits"""
    digest = hashlib.sha256(f"{suite_seed}|{task_id}|{optimizer_id}|{replicate}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & ((1 << 63) - 1)


# === Métricas ===
def approximation_ratio(record: RunRecord, c_max: float) -> List[float]:
    """Corte esperado -⟨H_C⟩ entre C_max, por paso"""
    if not c_max > 0:
        raise TaskValidationError(f"C_max debe ser positivo, llegó {c_max}")
    return [-loss / c_max for loss in record.losses]


def classifier_accuracy(weights: np.ndarray, dataset: LabeledDataset, layers: int) -> float:
    return reupload.classifier_accuracy(reupload_template(layers), weights, dataset)


def final_metrics(task: Task, record: RunRecord) -> Dict[str, float]:
    metrics = {
        "final_loss": record.final_loss,
        "loss_at_10": record.loss_at(EARLY_STEP),
    }
    settings = get_settings()
    if task.kind == TaskKind.QAOA_MAXCUT:
        c_max, _ = brute_force_maxcut(task.metadata["graph"])
        metrics["c_max"] = c_max
        metrics["approx_ratio"] = approximation_ratio(record, c_max)[-1]
    elif task.kind in (TaskKind.VQE_HEA, TaskKind.QAOA_SK):
        if task.circuit.n_qubits <= settings.exact_diag_max_qubits:
            exact = exact_ground_energy(task.observable, task.circuit.n_qubits)
            metrics["exact_energy" if task.kind == TaskKind.VQE_HEA else "ground_energy"] = exact
            metrics["energy_error"] = record.final_loss - exact
    elif task.kind == TaskKind.REUPLOAD and record.final_theta:
        layers = task.metadata["layers"]
        theta = np.asarray(record.final_theta)
        metrics["train_accuracy"] = classifier_accuracy(theta, task.train_set, layers)
        if task.test_set is not None:
            metrics["test_accuracy"] = classifier_accuracy(theta, task.test_set, layers)
        metrics["radius"] = task.train_set.radius
    return metrics


# === Celdas ===
@dataclass(frozen=True)
class CellJob:
    task_spec: str  # JSON de la especificación
    base_dir: Optional[str]
    optimizer: str  # JSON del OptimizerSpec
    task_id: str
    optimizer_id: str
    replicate: int
    seed: int
    steps: int

    @property
    def key(self) -> Tuple[str, str, int]:
        return (self.task_id, self.optimizer_id, self.replicate)

    def filename(self) -> str:
        raw = f"{self.task_id}__{self.optimizer_id}__r{self.replicate}"
        return re.sub(r"[^A-Za-z0-9._-]+", "_", raw) + ".json"


_TASKS: Dict[Tuple[str, Optional[str]], Task] = {}
_CHECKPOINTS: Dict[str, tuple] = {}


def _task_for(spec_json: str, base_dir: Optional[str]) -> Task:
    key = (spec_json, base_dir)
    if key not in _TASKS:
        spec = parse_task_spec(json.loads(spec_json))
        _TASKS[key] = spec.build(Path(base_dir) if base_dir else None)
    return _TASKS[key]


def _checkpoint_for(path: str):
    if path not in _CHECKPOINTS:
        _CHECKPOINTS[path] = load_checkpoint(path)
    return _CHECKPOINTS[path]


def run_cell(job: CellJob) -> RunRecord:
    """Ejecuta una celda; determinista dada la semilla de la celda"""
    task = _task_for(job.task_spec, job.base_dir)
    spec = OptimizerSpec.model_validate_json(job.optimizer)
    objective = make_objective(task)
    theta0 = sample_theta0(objective.n_params, job.seed)

    if spec.is_l2o:
        cell, config = _checkpoint_for(spec.checkpoint)
        optimizer = L2OOptimizer(cell, config, mode=spec.mode)
        record = optimizer.run(objective, theta0, job.steps, seed=job.seed, replicate=job.replicate,
                               optimizer_id=job.optimizer_id)
    else:
        record = run_baseline(objective, spec.baseline_config(), theta0, job.steps, seed=job.seed,
                              replicate=job.replicate, optimizer_id=job.optimizer_id)

    if not record.diverged:
        record.final_metrics = final_metrics(task, record)
    return record


def _init_worker():
    torch.set_num_threads(1)


# === Resumen ===
def summarize(records: Sequence[RunRecord]) -> pd.DataFrame:
    """
    Por (tarea, optimizador): n, media, desviación muestral, min y max de la pérdida final.
    Las corridas divergentes no entran a la media y se cuentan aparte.
    """
    if not records:
        raise ValueError("No hay corridas que resumir")
    rows = []
    frame = pd.DataFrame(
        [
            {"task_id": r.task_id, "optimizer_id": r.optimizer_id, "final": r.final_loss, "diverged": r.diverged}
            for r in records
        ]
    )
    for (task_id, optimizer_id), group in frame.groupby(["task_id", "optimizer_id"], sort=True):
        ok = group.loc[~group["diverged"], "final"].sort_values()
        n = int(ok.shape[0])
        rows.append({
            "task_id": task_id,
            "optimizer_id": optimizer_id,
            "n": n,
            "mean": float(ok.mean()) if n else float("nan"),
            "std": float(ok.std(ddof=1)) if n > 1 else 0.0,
            "min": float(ok.min()) if n else float("nan"),
            "max": float(ok.max()) if n else float("nan"),
            "diverged": int(group["diverged"].sum()),
        })
    return pd.DataFrame(rows, columns=["task_id", "optimizer_id", "n", "mean", "std", "min", "max", "diverged"])


def summarize_metrics(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = [
        {"task_id": r.task_id, "optimizer_id": r.optimizer_id, "metric": name, "value": value}
        for r in records
        if not r.diverged
        for name, value in r.final_metrics.items()
    ]
    columns = ["task_id", "optimizer_id", "metric", "n", "mean", "std", "min", "max"]
    if not rows:
        return pd.DataFrame(columns=columns)
    frame = pd.DataFrame(rows)
    grouped = frame.groupby(["task_id", "optimizer_id", "metric"], sort=True)["value"]
    out = grouped.agg(n="count", mean="mean", std=lambda v: v.std(ddof=1) if len(v) > 1 else 0.0,
                      min="min", max="max").reset_index()
    return out[columns]


def ablation_table(summary: pd.DataFrame) -> pd.DataFrame:
    """Filas = tarea, columnas = optimizador, celdas `media ± std`"""
    cells = summary.assign(cell=[
        f"{m:.4f} ± {s:.4f}" if n else "diverged"
        for m, s, n in zip(summary["mean"], summary["std"], summary["n"])
    ])
    return cells.pivot(index="task_id", columns="optimizer_id", values="cell").fillna("")


# === Servicio ===
class BenchService:
    """Ejecuta suites escribiendo cada celda terminada en `<out>/cells/`"""

    def __init__(self, threads: Optional[int] = None):
        self.threads = threads or get_settings().threads

    def plan(self, suite: SuiteSpec, base_dir: Optional[Path] = None) -> List[CellJob]:
        jobs = []
        for entry in suite.entries:
            task_json = json.dumps(entry.task.model_dump(mode="json"), sort_keys=True)
            task = _task_for(task_json, str(base_dir) if base_dir else None)
            for spec in entry.optimizer_specs():
                optimizer_id = spec.optimizer_id()
                for replicate in range(entry.replicates):
                    jobs.append(CellJob(
                        task_spec=task_json,
                        base_dir=str(base_dir) if base_dir else None,
                        optimizer=spec.model_dump_json(),
                        task_id=task.task_id,
                        optimizer_id=optimizer_id,
                        replicate=replicate,
                        seed=cell_seed(suite.seed, task.task_id, optimizer_id, replicate),
                        steps=entry.steps,
                    ))
        keys = [job.key for job in jobs]
        if len(set(keys)) != len(keys):
            raise TaskValidationError("La suite repite celdas (misma tarea, optimizador y réplica)")
        return jobs

    def _check_checkpoints(self, jobs: List[CellJob]):
        for job in jobs:
            spec = OptimizerSpec.model_validate_json(job.optimizer)
            if spec.is_l2o:
                _checkpoint_for(spec.checkpoint)

    def run_suite(
        self, suite: SuiteSpec, out_dir: Optional[Path] = None, base_dir: Optional[Path] = None
    ) -> List[RunRecord]:
        out_dir = Path(out_dir or suite.out_dir or get_settings().results_dir)
        cells_dir = out_dir / "cells"
        cells_dir.mkdir(parents=True, exist_ok=True)

        jobs = self.plan(suite, base_dir)
        self._check_checkpoints(jobs)

        records: Dict[Tuple[str, str, int], RunRecord] = {}
        pending = []
        for job in jobs:
            path = cells_dir / job.filename()
            if path.is_file():
                records[job.key] = RunRecord.model_validate_json(path.read_text(encoding="utf-8"))
                logger.info(f"Celda ya calculada, se omite: {path.name}")
            else:
                pending.append(job)

        logger.info(f"Suite '{suite.name}': {len(jobs)} celdas, {len(pending)} pendientes, {self.threads} workers")
        if self.threads > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=self.threads, initializer=_init_worker) as pool:
                for job, record in zip(pending, pool.map(run_cell, pending)):
                    self._collect(job, record, cells_dir, records)
        else:
            for job in pending:
                self._collect(job, run_cell(job), cells_dir, records)

        ordered = sorted(records.values(), key=lambda r: (r.task_id, r.optimizer_id, r.replicate))
        write_results(ordered, out_dir)
        return ordered

    @staticmethod
    def _collect(job: CellJob, record: RunRecord, cells_dir: Path, records: dict):
        path = cells_dir / job.filename()
        tmp = path.with_suffix(".tmp")
        tmp.write_text(record.model_dump_json(indent=2), encoding="utf-8")
        tmp.replace(path)
        records[job.key] = record
        status = "divergió" if record.diverged else f"final {record.final_loss:.6f}"
        logger.info(f"Celda {job.task_id} / {job.optimizer_id} / r{job.replicate}: {status}")


_bench_service: Optional[BenchService] = None


def get_bench_service() -> BenchService:
    global _bench_service
    if _bench_service is None:
        _bench_service = BenchService()
    return _bench_service


def run_suite(suite: SuiteSpec, out_dir: Optional[Path] = None, threads: Optional[int] = None,
              base_dir: Optional[Path] = None) -> List[RunRecord]:
    service = BenchService(threads) if threads else get_bench_service()
    return service.run_suite(suite, out_dir, base_dir)


def write_results(records: Sequence[RunRecord], out_dir: Path) -> Dict[str, Path]:
    """results.csv es exactamente task_id,optimizer_id,seed,step,loss; los tiempos van aparte"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = summarize(records)
    frames = {
        "results": records_frame(records),
        "timings": timings_frame(records),
        "metrics": metrics_frame(records),
        "summary": summary,
        "summary_metrics": summarize_metrics(records),
    }
    paths = {}
    for name, frame in frames.items():
        paths[name] = out_dir / f"{name}.csv"
        frame.to_csv(paths[name], index=False)
    paths["ablation"] = out_dir / "ablation.csv"
    ablation_table(summary).to_csv(paths["ablation"])
    logger.info(f"Resultados escritos en {out_dir} ({len(records)} corridas)")
    return paths
