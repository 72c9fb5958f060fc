"""
Pulsos de medio periodo y programas (PulseSchedule)
"""
import json
import numpy as np
from pydantic import BaseModel, Field, field_validator
from typing import Annotated, List, Literal, Union

MAX_HALF_PERIODS = 10 ** 6


# ===================================
# PULSOS
# ===================================
class SigmaPulse(BaseModel):
    """Barrera σ(μ, ν): compuerta de reflexión exacta por medio periodo"""
    type: Literal["sigma"] = "sigma"
    mu: float = Field(..., ge=0.0, le=np.pi, description="Ángulo μ en [0, π]")
    nu: float = Field(0.0, description="Fase ν (radianes)")
    half_periods: int = Field(1, ge=1, description="Duración en unidades de T/2")

    model_config = {"extra": "forbid", "allow_inf_nan": False}


class WallPulse(BaseModel):
    """Pared impenetrable con ángulos de Robin y desplazamiento constante por lado"""
    type: Literal["wall"] = "wall"
    theta_plus: float = Field(0.0, ge=0.0, lt=2.0 * np.pi)
    theta_minus: float = Field(0.0, ge=0.0, lt=2.0 * np.pi)
    v_plus: float = Field(0.0, description="Potencial añadido a la derecha (energía)")
    v_minus: float = Field(0.0, description="Potencial añadido a la izquierda (energía)")
    half_periods: int = Field(1, ge=1)

    model_config = {"extra": "forbid", "allow_inf_nan": False}

    @property
    def is_exact(self) -> bool:
        """Neumann o Dirichlet en ambos lados: la envolvente se conserva"""
        return all(t in (0.0, np.pi) for t in (self.theta_plus, self.theta_minus))


class FreePulse(BaseModel):
    """Oscilador sin barrera (U = σ₁)"""
    type: Literal["free"] = "free"
    half_periods: int = Field(1, ge=1)

    model_config = {"extra": "forbid", "allow_inf_nan": False}


Pulse = Annotated[Union[SigmaPulse, WallPulse, FreePulse], Field(discriminator="type")]


class PulseSchedule(BaseModel):
    """Programa: lista ordenada de pulsos aplicados de izquierda a derecha"""
    omega: float = Field(..., gt=0.0)
    pulses: List[Pulse] = Field(..., min_length=1)

    model_config = {"extra": "forbid", "allow_inf_nan": False}

    @field_validator("pulses")
    @classmethod
    def check_duration(cls, pulses):
        total = sum(p.half_periods for p in pulses)
        if total > MAX_HALF_PERIODS:
            raise ValueError(f"Duración total {total} supera {MAX_HALF_PERIODS} medios periodos")
        return pulses

    @property
    def total_half_periods(self) -> int:
        return sum(p.half_periods for p in self.pulses)

    def to_json(self) -> str:
        """Documento canónico; floats con repr de Python (ida y vuelta exacta)"""
        return json.dumps(self.model_dump(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PulseSchedule":
        return cls.model_validate(json.loads(text))
