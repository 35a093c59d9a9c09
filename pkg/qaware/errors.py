"""
Errores - Q-Aware L2O
Aurelia: "Un error con nombre se atiende rápido"
"""
from typing import Optional


class QAwareError(Exception):
    """Base de todos los errores del proyecto"""


class SimulationError(QAwareError, ValueError):
    """Qubits fuera de rango, targets inválidos, ángulos faltantes o dimensiones distintas"""


class TaskValidationError(QAwareError, ValueError):
    """Precondiciones de un builder o esquema de archivo inválido"""


class HamiltonianParseError(TaskValidationError):
    def __init__(self, message: str, line_number: Optional[int] = None, path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        where = f"{path}:" if path else ""
        prefix = f"{where}línea {line_number}: " if line_number is not None else where
        super().__init__(f"{prefix}{message}")


class SlotReuseError(QAwareError, ValueError):
    """Un slot de parámetro aparece en más de una compuerta"""


class NonFiniteError(QAwareError, ArithmeticError):
    """NaN o Inf en gradientes, pérdidas o features"""


class OptimizerConfigError(QAwareError, ValueError):
    pass


class CheckpointNotFoundError(QAwareError, FileNotFoundError):
    pass


class CheckpointFormatError(QAwareError, ValueError):
    pass


class CheckpointVersionError(CheckpointFormatError):
    pass


class MetaTrainingAborted(QAwareError, RuntimeError):
    """Todas las trayectorias de una etapa divergieron"""


class MetricError(QAwareError, ValueError):
    """Métrica no simétrica, dimensiones incompatibles o γ fuera de [0, 1]"""
