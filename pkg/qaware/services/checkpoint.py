"""
Checkpoints del Optimizador Aprendido - Q-Aware L2O
Aurelia: "Guardar y cargar debe dar exactamente los mismos bytes"
"""
import json
import logging
from pathlib import Path
from typing import Tuple, Union

import torch
from pydantic import ValidationError

from qaware.errors import CheckpointFormatError, CheckpointNotFoundError, CheckpointVersionError
from qaware.models import MetaConfig
from qaware.schemas import CHECKPOINT_FORMAT_VERSION, CheckpointFile, TensorPayload
from qaware.services.l2o import DTYPE, L2OCell

logger = logging.getLogger(__name__)

MIRRORED_FIELDS = (
    "hidden_size", "num_layers", "lambda_a", "lambda_b", "preprocess_p", "mode", "detach_gradient", "detach_metric",
)


def checkpoint_payload(cell: L2OCell, config: MetaConfig) -> CheckpointFile:
    if (cell.hidden_size, cell.num_layers) != (config.hidden_size, config.num_layers):
        raise CheckpointFormatError(
            f"La celda (H={cell.hidden_size}, capas={cell.num_layers}) no coincide con la configuración "
            f"(H={config.hidden_size}, capas={config.num_layers})"
        )
    tensors = {
        name: TensorPayload(
            shape=list(tensor.shape),
            values=tensor.detach().cpu().reshape(-1).tolist(),
        )
        for name, tensor in cell.state_dict().items()
    }
    return CheckpointFile(
        format_version=CHECKPOINT_FORMAT_VERSION,
        hidden_size=cell.hidden_size,
        num_layers=cell.num_layers,
        lambda_a=config.lambda_a,
        lambda_b=config.lambda_b,
        preprocess_p=config.preprocess_p,
        mode=config.mode,
        detach_gradient=config.detach_gradient,
        detach_metric=config.detach_metric,
        config_hash=config.config_hash(),
        meta_config=config,
        tensors=tensors,
    )


def dumps_checkpoint(cell: L2OCell, config: MetaConfig) -> str:
    # repr de float es el más corto que reproduce el valor: round trip exacto
    payload = checkpoint_payload(cell, config).model_dump(mode="json")
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_checkpoint(cell: L2OCell, config: MetaConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_checkpoint(cell, config), encoding="utf-8")
    logger.info(f"💾 Checkpoint guardado: {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[L2OCell, MetaConfig]:
    path = Path(path)
    if not path.is_file():
        raise CheckpointNotFoundError(f"No existe el checkpoint: {path}")

    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CheckpointFormatError(f"Checkpoint corrupto en {path}: {e}") from e
    if not isinstance(raw, dict):
        raise CheckpointFormatError(f"Checkpoint sin objeto raíz: {path}")

    version = raw.get("format_version")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointVersionError(
            f"Versión de checkpoint {version} no soportada (se espera {CHECKPOINT_FORMAT_VERSION})"
        )

    try:
        payload = CheckpointFile.model_validate(raw)
    except ValidationError as e:
        raise CheckpointFormatError(f"Checkpoint inválido en {path}: {e}") from e

    # los campos de cabecera repiten meta_config y deben coincidir
    for field in MIRRORED_FIELDS:
        header, inner = getattr(payload, field), getattr(payload.meta_config, field)
        if header != inner:
            raise CheckpointFormatError(f"{field}={header} no coincide con meta_config ({inner}): {path}")

    cell = L2OCell(hidden_size=payload.hidden_size, num_layers=payload.num_layers)
    expected = cell.state_dict()
    if set(expected) != set(payload.tensors):
        raise CheckpointFormatError(f"Los tensores del checkpoint no coinciden con la celda: {path}")

    state = {}
    for name, tensor in payload.tensors.items():
        if list(expected[name].shape) != tensor.shape:
            raise CheckpointFormatError(f"Forma inválida para {name}: {tensor.shape}")
        values = torch.tensor(tensor.values, dtype=DTYPE)
        if not torch.all(torch.isfinite(values)):
            raise CheckpointFormatError(f"Pesos no finitos en {name}")
        state[name] = values.reshape(tensor.shape)
    cell.load_state_dict(state)

    config = payload.meta_config
    if config.config_hash() != payload.config_hash:
        raise CheckpointFormatError(f"El hash de la configuración no coincide: {path}")
    logger.info(f"Checkpoint cargado: {path} (H={cell.hidden_size}, modo={config.mode.value})")
    return cell, config
