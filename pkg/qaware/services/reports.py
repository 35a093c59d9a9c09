"""
Reportes y Figuras - Q-Aware L2O
Elena: "SVG deterministas: el mismo experimento produce el mismo archivo"
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from qaware.config import get_settings
from qaware.errors import TaskValidationError
from qaware.models import RunRecord

logger = logging.getLogger(__name__)

REPORT_KINDS = ("csv", "json", "svg_curves", "svg_bars")
RESULT_COLUMNS = ["task_id", "optimizer_id", "seed", "step", "loss"]
# Garantía de Goemans-Williamson
GW_RATIO = 0.878


# === Tablas ===
def _ordered(records: Sequence[RunRecord]) -> List[RunRecord]:
    return sorted(records, key=lambda r: (r.task_id, r.optimizer_id, r.replicate, r.seed))


def records_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = [
        (r.task_id, r.optimizer_id, r.seed, step, loss)
        for r in _ordered(records)
        for step, loss in enumerate(r.losses)
    ]
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def timings_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = [
        (r.task_id, r.optimizer_id, r.seed, step + 1, ms)
        for r in _ordered(records)
        for step, ms in enumerate(r.wall_ms)
    ]
    return pd.DataFrame(rows, columns=["task_id", "optimizer_id", "seed", "step", "wall_ms"])


def metrics_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = [
        (r.task_id, r.optimizer_id, r.seed, r.replicate, r.diverged, name, value)
        for r in _ordered(records)
        for name, value in sorted(r.final_metrics.items())
    ]
    return pd.DataFrame(
        rows, columns=["task_id", "optimizer_id", "seed", "replicate", "diverged", "metric", "value"]
    )


# === Carga ===
def load_records(in_dir: Union[str, Path]) -> List[RunRecord]:
    """Lee `cells/*.json`; si no existen, reconstruye las pérdidas desde results.csv"""
    in_dir = Path(in_dir)
    cells = sorted((in_dir / "cells").glob("*.json"))
    if cells:
        return _ordered([RunRecord.model_validate_json(p.read_text(encoding="utf-8")) for p in cells])

    results = in_dir / "results.csv"
    if not results.is_file():
        raise TaskValidationError(f"No hay resultados en {in_dir}")
    frame = pd.read_csv(results)
    missing = set(RESULT_COLUMNS) - set(frame.columns)
    if missing:
        raise TaskValidationError(f"results.csv sin columnas {sorted(missing)}")

    records = []
    for (task_id, optimizer_id, seed), group in frame.groupby(["task_id", "optimizer_id", "seed"], sort=True):
        group = group.sort_values("step")
        records.append(RunRecord(
            task_id=str(task_id),
            optimizer_id=str(optimizer_id),
            seed=int(seed),
            losses=group["loss"].astype(float).tolist(),
        ))
    logger.warning(f"Sin celdas en {in_dir}; registros reconstruidos desde results.csv (sin métricas)")
    return records


# === Figuras ===
def _configure():
    plt.rcParams["svg.hashsalt"] = get_settings().svg_hashsalt
    plt.rcParams["svg.fonttype"] = "path"


def _save_svg(fig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _curve(record: RunRecord) -> np.ndarray:
    """Pérdida por paso, o razón de aproximación si la tarea es MaxCut"""
    losses = np.asarray(record.losses)
    c_max = record.final_metrics.get("c_max")
    if c_max:
        return -losses / c_max
    return losses


def _tasks(records: Sequence[RunRecord]) -> Dict[str, Dict[str, List[RunRecord]]]:
    grouped: Dict[str, Dict[str, List[RunRecord]]] = {}
    for record in _ordered(records):
        grouped.setdefault(record.task_id, {}).setdefault(record.optimizer_id, []).append(record)
    return grouped


def plot_curves(records: Sequence[RunRecord], path: Union[str, Path]) -> Path:
    """Una gráfica por tarea: media en color pleno, cada semilla en claro y banda de ±std"""
    if not records:
        raise ValueError("No hay corridas que graficar")
    _configure()
    grouped = _tasks(records)
    fig, axes = plt.subplots(len(grouped), 1, figsize=(7, 3.5 * len(grouped)), squeeze=False)

    for ax, (task_id, by_optimizer) in zip(axes[:, 0], grouped.items()):
        is_ratio = False
        for index, (optimizer_id, runs) in enumerate(by_optimizer.items()):
            color = f"C{index % 10}"
            curves = [_curve(r) for r in runs]
            is_ratio = is_ratio or any("c_max" in r.final_metrics for r in runs)
            for curve in curves:
                ax.plot(np.arange(len(curve)), curve, color=color, alpha=0.2, linewidth=0.8)

            # La media solo usa corridas completas; las divergentes quedan como trazas
            complete = [c for r, c in zip(runs, curves) if not r.diverged]
            if not complete:
                continue
            length = min(len(c) for c in complete)
            stack = np.stack([c[:length] for c in complete])
            mean, std = stack.mean(axis=0), stack.std(axis=0)
            steps = np.arange(length)
            ax.plot(steps, mean, color=color, linewidth=1.8, label=optimizer_id)
            ax.fill_between(steps, mean - std, mean + std, color=color, alpha=0.15, linewidth=0)

        if is_ratio:
            ax.axhline(GW_RATIO, color="black", linestyle="--", linewidth=1, label=f"r = {GW_RATIO}")
        ax.set_title(task_id)
        ax.set_xlabel("Iteración")
        ax.set_ylabel("Razón de aproximación" if is_ratio else "Pérdida")
        ax.legend(fontsize="small")

    fig.tight_layout()
    return _save_svg(fig, path)


def plot_bars(records: Sequence[RunRecord], path: Union[str, Path], early_step: int = 10) -> Path:
    """Barras pareadas por optimizador: pérdida tras `early_step` (claro) y al final (pleno)"""
    if not records:
        raise ValueError("No hay corridas que graficar")
    _configure()
    grouped = _tasks(records)
    fig, axes = plt.subplots(1, len(grouped), figsize=(4.5 * len(grouped), 4), squeeze=False)

    for ax, (task_id, by_optimizer) in zip(axes[0, :], grouped.items()):
        names = list(by_optimizer)
        x = np.arange(len(names))
        width = 0.38
        for index, optimizer_id in enumerate(names):
            runs = [r for r in by_optimizer[optimizer_id] if not r.diverged]
            if not runs:
                continue
            color = f"C{index % 10}"
            early = np.array([r.loss_at(early_step) for r in runs])
            final = np.array([r.final_loss for r in runs])
            ax.bar(x[index] - width / 2, early.mean(), width, yerr=early.std(), color=color, alpha=0.4)
            ax.bar(x[index] + width / 2, final.mean(), width, yerr=final.std(), color=color)
        ax.set_xticks(x)
        ax.set_xticklabels(names, rotation=30, ha="right", fontsize="small")
        ax.set_title(task_id)
        ax.set_ylabel(f"Pérdida (paso {early_step} vs final)")

    fig.tight_layout()
    return _save_svg(fig, path)


def plot_training_log(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Pérdida externa de entrenamiento por trayectoria y validación al cierre de cada etapa"""
    _configure()
    fig, ax = plt.subplots(figsize=(7, 4))
    if not frame.empty:
        train = frame[(frame["kind"] == "train") & (~frame["diverged"])]
        validation = frame[frame["kind"] == "validation"]
        # Normalizada por T para comparar etapas de distinto largo
        ax.plot(train["trajectory"], train["outer_loss"] / train["unroll"], color="C0", alpha=0.6,
                linewidth=0.8, label="entrenamiento")
        ax.plot(validation["trajectory"], validation["mean_loss"], color="C1", marker="o", label="validación")
        for trajectory in validation.loc[validation["accepted"] == False, "trajectory"]:  # noqa: E712
            ax.axvline(trajectory, color="C3", linestyle=":", linewidth=1)
    ax.set_xlabel("Trayectoria")
    ax.set_ylabel("Pérdida externa / T")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return _save_svg(fig, path)


# === Reporte ===
def write_json(records: Sequence[RunRecord], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [r.model_dump(mode="json", exclude={"wall_ms"}) for r in _ordered(records)]
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def report(records: Sequence[RunRecord], kind: str, path: Union[str, Path],
           early_step: Optional[int] = None) -> Path:
    if kind not in REPORT_KINDS:
        raise TaskValidationError(f"Tipo de reporte desconocido: {kind} (opciones: {', '.join(REPORT_KINDS)})")
    if not records:
        raise TaskValidationError("No hay corridas para reportar")

    path = Path(path)
    if kind == "csv":
        path.parent.mkdir(parents=True, exist_ok=True)
        records_frame(records).to_csv(path, index=False)
    elif kind == "json":
        write_json(records, path)
    elif kind == "svg_curves":
        plot_curves(records, path)
    else:
        plot_bars(records, path, early_step=early_step or 10)
    logger.info(f"📊 Reporte {kind} escrito en {path}")
    return path
