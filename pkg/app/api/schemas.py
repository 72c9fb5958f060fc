"""
Esquemas Pydantic para comandos e informes
"""
import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Annotated, List, Literal, Optional, Union

ComplexPair = List[float]


def complex_pair(z: complex) -> ComplexPair:
    """Números complejos como [re, im]"""
    return [float(np.real(z)), float(np.imag(z))]


def matrix_pairs(matrix: np.ndarray) -> List[List[ComplexPair]]:
    return [[complex_pair(z) for z in row] for row in np.asarray(matrix)]


def parse_matrix(value) -> np.ndarray:
    """
    Matriz 2x2 desde JSON: entradas reales o pares [re, im]

    Raises:
        ValueError: forma distinta de 2x2
    """
    rows = np.asarray(value, dtype=float)
    if rows.shape == (2, 2):
        return rows.astype(complex)
    if rows.shape == (2, 2, 2):
        return rows[..., 0] + 1j * rows[..., 1]
    raise ValueError(f"Se esperaba una matriz 2x2 (real o de pares [re, im]), forma {rows.shape}")


# ===================================
# COMANDOS
# ===================================
class CommandBase(BaseModel):
    """Opciones comunes a todos los verbos"""
    output: Optional[str] = Field(None, description="Archivo de salida (stdout si se omite)")
    format: Literal["json", "csv"] = "json"
    log_level: str = "WARNING"
    omega: float = Field(1.0, gt=0.0, description="Frecuencia angular ω")

    model_config = {"extra": "forbid", "allow_inf_nan": False}

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value):
        level = value.upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"nivel de log desconocido '{value}'")
        return level


class SpectrumCommand(CommandBase):
    verb: Literal["spectrum"] = "spectrum"
    theta: float = 0.0
    levels: int = Field(6, ge=1, le=64)
    sweep: Optional[int] = Field(None, ge=2, description="Barrido de θ en [0, π] con N puntos")
    format: Literal["json", "csv"] = "csv"


class GateCommand(CommandBase):
    verb: Literal["gate"] = "gate"
    mu: Optional[float] = Field(None, ge=0.0, le=np.pi)
    nu: float = 0.0
    theta_plus: Optional[float] = None
    theta_minus: Optional[float] = None
    v_plus: float = 0.0
    v_minus: float = 0.0
    half_periods: int = Field(1, ge=1)
    schedule: Optional[str] = None
    envelope: Literal["ground", "polynomial", "coherent"] = "ground"

    @model_validator(mode="after")
    def check_source(self):
        sources = [self.mu is not None,
                   self.theta_plus is not None or self.theta_minus is not None,
                   self.schedule is not None]
        if sum(sources) != 1:
            raise ValueError("Indique exactamente una fuente: --mu, --theta-plus/--theta-minus o --schedule")
        if self.format != "json":
            raise ValueError("gate sólo emite JSON")
        return self


class CompileCommand(CommandBase):
    verb: Literal["compile"] = "compile"
    target: str

    @field_validator("format")
    @classmethod
    def json_only(cls, value):
        if value != "json":
            raise ValueError("compile sólo emite JSON")
        return value


class VerifyCommand(CommandBase):
    verb: Literal["verify"] = "verify"
    schedule: str
    grid_points: int = Field(2048, ge=4)
    steps_per_period: int = Field(4096, ge=16)
    envelope: Literal["ground", "polynomial", "coherent"] = "polynomial"

    @field_validator("format")
    @classmethod
    def json_only(cls, value):
        if value != "json":
            raise ValueError("verify sólo emite JSON")
        return value


class ScatterCommand(CommandBase):
    verb: Literal["scatter"] = "scatter"
    mu: Optional[float] = Field(None, ge=0.0, le=np.pi)
    nu: float = 0.0
    u: Optional[str] = Field(None, description="Matriz U en JSON")
    k: List[float] = Field(default_factory=lambda: [0.5, 1.0, 5.0, 20.0])
    oracle: bool = False
    format: Literal["json", "csv"] = "csv"

    @model_validator(mode="after")
    def check_barrier(self):
        if (self.mu is None) == (self.u is None):
            raise ValueError("Indique la barrera con --mu/--nu o con --u")
        if any(k <= 0.0 for k in self.k):
            raise ValueError("Los números de onda deben ser positivos")
        return self


Command = Annotated[
    Union[SpectrumCommand, GateCommand, CompileCommand, VerifyCommand, ScatterCommand],
    Field(discriminator="verb"),
]


# ===================================
# INFORMES
# ===================================
class SpectrumRow(BaseModel):
    """Nivel de Robin; eta = desplazamiento respecto del nivel de Neumann en unidades de ω"""
    theta: float
    n: int
    energy: float
    eta: float


class GateReport(BaseModel):
    matrix: List[List[ComplexPair]]
    leakage: float
    fidelity_vs_ideal: Optional[float] = Field(None, description="null si el programa no es ideal")
    ideal: Optional[List[List[ComplexPair]]] = None


class ComparisonReport(BaseModel):
    initial: List[ComplexPair]
    analytic: List[ComplexPair]
    oracle: List[ComplexPair]
    deviation: float
    analytic_leakage: float
    oracle_leakage: float


class VerifyReport(BaseModel):
    omega: float
    grid_points: int
    max_deviation: float
    max_oracle_leakage: float
    fidelity: float
    analytic_gate: List[List[ComplexPair]]
    oracle_gate: List[List[ComplexPair]]
    comparisons: List[ComparisonReport]


class ScatterRow(BaseModel):
    k: float
    T: float
    R: float
    T_oracle: Optional[float] = None
    R_oracle: Optional[float] = None
