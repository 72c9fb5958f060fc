"""
Configuración del laboratorio QAbacus
"""
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Configuración global del laboratorio"""

    # Aplicación
    app_name: str = "QAbacus"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Reproducibilidad
    deterministic: bool = True
    random_seed: int = 20040524

    # Física (ħ = m = 1)
    omega: float = 1.0

    # Base del oscilador (envolventes de la CLI)
    n_max: int = 64

    # Oráculo de malla
    grid_points: int = 2048
    grid_half_width: float = 10.0  # en unidades de 1/sqrt(omega)
    steps_per_period: int = 4096

    # Compuertas
    leakage_limit: float = 0.5

    # Salida
    float_digits: int = 17
    parallel_jobs: int = 1

    class Config:
        env_file = ".env"
        env_prefix = "QABACUS_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Obtener configuración singleton"""
    return Settings()
