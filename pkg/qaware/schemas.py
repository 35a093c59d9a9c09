"""
Q-AWARE L2O - Schemas Pydantic para los archivos de entrada y salida
"""
import json
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from qaware.errors import OptimizerConfigError, TaskValidationError
from qaware.models import BaselineConfig, Graph, L2OMode, MetaConfig, OptimizerKind, Task


# ============================================
# Graph Schemas
# ============================================

class GraphFile(BaseModel):
    """`{"vertices": n, "edges": [[i, j, w], ...]}`; el peso es opcional (1.0)"""
    vertices: int
    edges: List[List[float]]

    def to_graph(self) -> Graph:
        for edge in self.edges:
            if len(edge) not in (2, 3):
                raise ValueError(f"Arista con {len(edge)} campos: {edge}")
        return Graph.from_pairs(self.vertices, [tuple(e) for e in self.edges])


class ErGraphSpec(BaseModel):
    vertices: int
    p: float
    seed: int = 0


# ============================================
# Task Spec Schemas
# ============================================

class _TaskSpecBase(BaseModel):
    task_id: Optional[str] = None

    class Config:
        extra = "forbid"

    def build(self, base_dir: Optional[Path] = None) -> Task:
        raise NotImplementedError

    @staticmethod
    def _resolve(path: str, base_dir: Optional[Path]) -> Path:
        candidate = Path(path)
        if not candidate.is_absolute() and base_dir is not None and not candidate.exists():
            candidate = base_dir / candidate
        return candidate


class RandomPQCSpec(_TaskSpecBase):
    kind: Literal["random_pqc"]
    n_qubits: int
    layers: int
    seed: int = 0

    def build(self, base_dir: Optional[Path] = None) -> Task:
        from qaware.services.circuits import build_random_pqc

        return build_random_pqc(self.n_qubits, self.layers, self.seed, task_id=self.task_id)


class VqeHeaSpec(_TaskSpecBase):
    kind: Literal["vqe_hea"]
    hamiltonian_file: str
    layers: int
    n_qubits: Optional[int] = None

    def build(self, base_dir: Optional[Path] = None) -> Task:
        from qaware.services.circuits import build_vqe_hea
        from qaware.services.hamiltonian_io import load_hamiltonian

        path = self._resolve(self.hamiltonian_file, base_dir)
        hamiltonian, n_file = load_hamiltonian(path)
        n_qubits = self.n_qubits or n_file
        task_id = self.task_id or f"vqe_hea_{path.stem}_l{self.layers}"
        return build_vqe_hea(hamiltonian, n_qubits, self.layers, task_id=task_id, source=str(path))


class QaoaMaxCutSpec(_TaskSpecBase):
    kind: Literal["qaoa_maxcut"]
    p_layer: int
    graph_file: Optional[str] = None
    er: Optional[ErGraphSpec] = None

    @model_validator(mode="after")
    def _one_graph_source(self):
        if (self.graph_file is None) == (self.er is None):
            raise ValueError("qaoa_maxcut necesita exactamente uno de graph_file o er")
        return self

    def build(self, base_dir: Optional[Path] = None) -> Task:
        from qaware.services.circuits import build_qaoa_maxcut
        from qaware.services.hamiltonian_io import load_graph
        from qaware.services.oracles import gen_er_graph

        if self.er is not None:
            graph = gen_er_graph(self.er.vertices, self.er.p, self.er.seed)
            default_id = f"qaoa_maxcut_er_v{self.er.vertices}_p{self.er.p:g}_s{self.er.seed}_p{self.p_layer}"
        else:
            path = self._resolve(self.graph_file, base_dir)
            graph = load_graph(path)
            default_id = f"qaoa_maxcut_{path.stem}_p{self.p_layer}"
        return build_qaoa_maxcut(graph, self.p_layer, task_id=self.task_id or default_id)


class QaoaSKSpec(_TaskSpecBase):
    kind: Literal["qaoa_sk"]
    n: int
    p_layer: int
    seed: int = 0

    def build(self, base_dir: Optional[Path] = None) -> Task:
        from qaware.services.circuits import build_qaoa_sk

        return build_qaoa_sk(self.n, self.p_layer, self.seed, task_id=self.task_id)


class ReuploadSpec(_TaskSpecBase):
    kind: Literal["reupload"]
    layers: int
    seed: int = 0
    n_train: int = 200
    n_test: int = 4000
    radius: Optional[float] = None

    def build(self, base_dir: Optional[Path] = None) -> Task:
        from qaware.services.circuits import build_reupload

        return build_reupload(
            self.layers,
            seed=self.seed,
            n_train=self.n_train,
            n_test=self.n_test,
            radius=self.radius,
            task_id=self.task_id,
        )


TaskSpec = Annotated[
    Union[RandomPQCSpec, VqeHeaSpec, QaoaMaxCutSpec, QaoaSKSpec, ReuploadSpec],
    Field(discriminator="kind"),
]

TASK_SPEC_ADAPTER = TypeAdapter(TaskSpec)


def _read_json(path: Union[str, Path], what: str) -> dict:
    path = Path(path)
    if not path.is_file():
        raise TaskValidationError(f"No existe el archivo de {what}: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise TaskValidationError(f"JSON inválido en {path}: {e}") from e


def parse_task_spec(payload: dict):
    try:
        return TASK_SPEC_ADAPTER.validate_python(payload)
    except ValidationError as e:
        raise TaskValidationError(f"Especificación de tarea inválida: {e}") from e


def load_task_spec(path: Union[str, Path]):
    return parse_task_spec(_read_json(path, "tarea"))


def load_task(path: Union[str, Path]) -> Task:
    path = Path(path)
    return load_task_spec(path).build(base_dir=path.parent)


def load_meta_config(path: Union[str, Path]) -> MetaConfig:
    try:
        return MetaConfig.model_validate(_read_json(path, "configuración"))
    except ValidationError as e:
        raise TaskValidationError(f"Configuración de meta-entrenamiento inválida: {e}") from e


# ============================================
# Optimizer Schemas
# ============================================

L2O_PREFIXES = {"l2o": L2OMode.FULL, "l2o-dm": L2OMode.IDENTITY_PRECOND}


class LrGrid(BaseModel):
    """Lista explícita o rejilla logarítmica 10^log_min .. 10^log_max"""
    values: Optional[List[float]] = None
    log_min: Optional[float] = None
    log_max: Optional[float] = None
    n: int = 5

    def expand(self) -> List[float]:
        if self.values is not None:
            return [float(v) for v in self.values]
        if self.log_min is None or self.log_max is None:
            raise OptimizerConfigError("lr_grid necesita values o log_min/log_max")
        return [float(v) for v in np.logspace(self.log_min, self.log_max, self.n)]


class LrSearch(BaseModel):
    """n tasas log-uniformes en [low, high], sembradas"""
    n: int = 5
    low: float = 1e-4
    high: float = 1e-1
    seed: int = 0

    def expand(self) -> List[float]:
        if not 0 < self.low < self.high:
            raise OptimizerConfigError("lr_search necesita 0 < low < high")
        rng = np.random.default_rng(self.seed)
        samples = rng.uniform(np.log10(self.low), np.log10(self.high), size=self.n)
        return [float(10 ** s) for s in samples]


class OptimizerSpec(BaseModel):
    """
    `adam`, `qngd`, ... para baselines; `l2o:<ckpt>` y `l2o-dm:<ckpt>` para el optimizador aprendido.
    """
    name: str
    lr: Optional[float] = None
    checkpoint: Optional[str] = None
    label: Optional[str] = None
    lr_grid: Optional[LrGrid] = None
    lr_search: Optional[LrSearch] = None
    hyperparams: Dict[str, float] = Field(default_factory=dict)

    class Config:
        extra = "forbid"

    @model_validator(mode="after")
    def _check_name(self):
        name, _, checkpoint = self.name.partition(":")
        if name in L2O_PREFIXES:
            self.name = name
            self.checkpoint = self.checkpoint or (checkpoint or None)
            if not self.checkpoint:
                raise ValueError(f"{name} necesita un checkpoint ('{name}:<ruta>')")
            if self.lr_grid is not None or self.lr_search is not None:
                raise ValueError("El optimizador aprendido no usa rejilla de lr")
        else:
            try:
                OptimizerKind(name)
            except ValueError:
                raise ValueError(f"Optimizador desconocido: {self.name}")
        return self

    @classmethod
    def parse(cls, text: str, lr: Optional[float] = None) -> "OptimizerSpec":
        try:
            return cls(name=text, lr=lr)
        except ValidationError as e:
            raise OptimizerConfigError(str(e)) from e

    @property
    def is_l2o(self) -> bool:
        return self.name in L2O_PREFIXES

    @property
    def mode(self) -> Optional[L2OMode]:
        return L2O_PREFIXES.get(self.name)

    def baseline_config(self) -> BaselineConfig:
        if self.is_l2o:
            raise OptimizerConfigError("El optimizador aprendido no tiene BaselineConfig")
        values = dict(self.hyperparams)
        if self.lr is not None:
            values["lr"] = self.lr
        try:
            return BaselineConfig(kind=OptimizerKind(self.name), **values)
        except ValidationError as e:
            raise OptimizerConfigError(f"Hiperparámetros inválidos para {self.name}: {e}") from e

    def optimizer_id(self) -> str:
        if self.label:
            return self.label
        if self.is_l2o:
            return self.name
        return self.baseline_config().optimizer_id()

    def expand(self) -> List["OptimizerSpec"]:
        """Una entrada por tasa de aprendizaje de la rejilla o de la búsqueda"""
        rates: List[float] = []
        if self.lr_grid is not None:
            rates += self.lr_grid.expand()
        if self.lr_search is not None:
            rates += self.lr_search.expand()
        if not rates:
            return [self]
        return [
            self.model_copy(update={"lr": lr, "lr_grid": None, "lr_search": None, "label": None})
            for lr in rates
        ]


# ============================================
# Suite Schemas
# ============================================

class SuiteEntry(BaseModel):
    task: TaskSpec
    optimizers: List[Union[str, OptimizerSpec]]
    replicates: int = 5
    steps: int = 200

    @model_validator(mode="after")
    def _check_entry(self):
        if not self.optimizers:
            raise ValueError("Cada entrada necesita al menos un optimizador")
        if self.replicates < 1 or self.steps < 1:
            raise ValueError("replicates y steps deben ser >= 1")
        self.optimizers = [
            OptimizerSpec(name=o) if isinstance(o, str) else o for o in self.optimizers
        ]
        return self

    def optimizer_specs(self) -> List[OptimizerSpec]:
        specs: List[OptimizerSpec] = []
        for spec in self.optimizers:
            specs.extend(spec.expand())
        return specs


class SuiteSpec(BaseModel):
    name: str = "suite"
    seed: int = 0
    entries: List[SuiteEntry]
    out_dir: Optional[str] = None

    @model_validator(mode="after")
    def _non_empty(self):
        if not self.entries:
            raise ValueError("La suite no tiene entradas")
        return self


def load_suite(path: Union[str, Path]) -> SuiteSpec:
    try:
        return SuiteSpec.model_validate(_read_json(path, "suite"))
    except ValidationError as e:
        raise TaskValidationError(f"Suite inválida: {e}") from e


# ============================================
# Checkpoint Schemas
# ============================================

CHECKPOINT_FORMAT_VERSION = 1


class TensorPayload(BaseModel):
    shape: List[int]
    values: List[float]


class CheckpointFile(BaseModel):
    format_version: int = CHECKPOINT_FORMAT_VERSION
    hidden_size: int
    num_layers: int
    lambda_a: float
    lambda_b: float
    preprocess_p: float
    mode: L2OMode
    detach_gradient: bool
    detach_metric: bool
    config_hash: str
    meta_config: MetaConfig
    tensors: Dict[str, TensorPayload]
