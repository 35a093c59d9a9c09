"""
Lectura de Hamiltonianos y Grafos - Q-Aware L2O
Aurelia: "Si una línea está mal, decimos cuál"
"""
import json
import logging
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from qaware.errors import HamiltonianParseError, TaskValidationError
from qaware.models import Graph, PauliSum, PauliTerm
from qaware.schemas import GraphFile

logger = logging.getLogger(__name__)

PAULI_TOKEN = re.compile(r"^([A-Za-z])(\d+)$")


def parse_hamiltonian_line(line: str, line_number: int, path: Optional[str] = None) -> Optional[PauliTerm]:
    """`<coef> <token>...` con token `I` o `<P><índice>`; regresa None en líneas vacías"""
    content = line.split("#", 1)[0].strip()
    if not content:
        return None

    tokens = content.split()
    try:
        coefficient = float(tokens[0])
    except ValueError:
        raise HamiltonianParseError(f"Coeficiente inválido '{tokens[0]}'", line_number, path)
    if not math.isfinite(coefficient):
        raise HamiltonianParseError(f"Coeficiente no finito '{tokens[0]}'", line_number, path)

    ops: Dict[int, str] = {}
    for token in tokens[1:]:
        if token == "I":
            continue
        match = PAULI_TOKEN.match(token)
        if not match:
            raise HamiltonianParseError(f"Token inválido '{token}'", line_number, path)
        letter, index = match.group(1), int(match.group(2))
        if letter == "I":
            continue
        if letter not in ("X", "Y", "Z"):
            raise HamiltonianParseError(f"Letra de Pauli desconocida '{letter}'", line_number, path)
        if index in ops:
            raise HamiltonianParseError(f"Qubit {index} repetido en el término", line_number, path)
        ops[index] = letter

    return PauliTerm(coefficient=coefficient, ops=ops)


def parse_hamiltonian(text: str, path: Optional[str] = None) -> Tuple[PauliSum, int]:
    terms: List[PauliTerm] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        term = parse_hamiltonian_line(line, line_number, path)
        if term is not None:
            terms.append(term)
    if not terms:
        raise HamiltonianParseError("El archivo no contiene términos", path=path)

    hamiltonian = PauliSum(terms=tuple(terms))
    return hamiltonian, max(1, hamiltonian.n_qubits_required)


def load_hamiltonian(path: Union[str, Path]) -> Tuple[PauliSum, int]:
    path = Path(path)
    if not path.is_file():
        raise TaskValidationError(f"No existe el archivo de Hamiltoniano: {path}")
    hamiltonian, n_qubits = parse_hamiltonian(path.read_text(encoding="utf-8"), str(path))
    logger.info(f"Hamiltoniano cargado: {path.name} ({len(hamiltonian.terms)} términos, {n_qubits} qubits)")
    return hamiltonian, n_qubits


def load_graph(path: Union[str, Path]) -> Graph:
    """`{"vertices": n, "edges": [[i, j, w], ...]}`"""
    path = Path(path)
    if not path.is_file():
        raise TaskValidationError(f"No existe el archivo de grafo: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        return GraphFile.model_validate(payload).to_graph()
    except (json.JSONDecodeError, ValidationError, ValueError) as e:
        raise TaskValidationError(f"Grafo inválido en {path}: {e}") from e
