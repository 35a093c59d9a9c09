"""
Configuración - Q-Aware L2O
Aurelia: "Las variables de entorno van aquí, NUNCA hardcodeadas"
"""
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # App
    app_name: str = "Q-Aware L2O"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Ejecución
    threads: int = 1
    seed: int = 0
    default_steps: int = 200  # horizonte universal de los experimentos

    # Storage
    results_dir: str = "results"
    checkpoint_dir: str = "checkpoints"

    # Guardas de memoria
    max_qubits: int = 24
    exact_diag_max_qubits: int = 12
    brute_force_max_vertices: int = 24

    # Geometría
    pinv_cutoff: float = 1e-6

    # Clasificador de re-upload: radio balanceado sqrt(2/pi) en vez de sqrt(2)
    balanced_radius: bool = True

    # Reportes
    svg_hashsalt: str = "qaware"

    class Config:
        env_prefix = "QAWARE_"
        env_file = ".env"
        env_file_encoding = "utf-8"


@lru_cache()
def get_settings() -> Settings:
    return Settings()
