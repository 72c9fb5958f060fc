"""
Evolución analítica por medios periodos
Los pulsos σ actúan exactamente como σ(μ, ν) sobre el par (derecha, izquierda)
para cualquier perfil; las paredes evolucionan cada semirrecta en su base de
Robin. Las fases se miden respecto del fundamental libre, e^{−iωt/2}.
"""

import numpy as np
from dataclasses import dataclass, field
from loguru import logger
from typing import List, Tuple

from app.physics.barrier import sigma_matrix
from app.physics.errors import LeakageOverflow
from app.physics.gatelab import GateMatrix, QubitState, decode, encode_half_line
from app.physics.pulses import FreePulse, PulseSchedule, SigmaPulse, WallPulse
from app.physics.spectral import Envelope, HalfLineState, half_line_grid, robin_evolve

DEFAULT_LEAKAGE_LIMIT = 0.5


@dataclass(frozen=True)
class TrajectoryPoint:
    """Instantánea tras un pulso"""
    pulse_index: int
    half_periods: int
    alpha0: complex
    alpha1: complex
    leakage: float


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    state: HalfLineState
    alpha0: complex
    alpha1: complex
    leakage: float
    trajectory: List[TrajectoryPoint] = field(default_factory=list)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1], dtype=complex)


# ===================================
# MAPAS DE MEDIO PERIODO
# ===================================
def sigma_half_period(alpha0: complex, alpha1: complex, mu: float, nu: float) -> Tuple[complex, complex]:
    """(α₀, α₁) ↦ σ(μ, ν)·(α₀, α₁); la envolvente no cambia"""
    if abs(abs(alpha0) ** 2 + abs(alpha1) ** 2 - 1.0) > 1e-10:
        raise ValueError("Las amplitudes del qubit deben estar normalizadas")
    out = sigma_matrix(mu, nu) @ np.array([alpha0, alpha1], dtype=complex)
    return complex(out[0]), complex(out[1])


def _sigma_power(mu: float, nu: float, half_periods: int) -> np.ndarray:
    return np.linalg.matrix_power(sigma_matrix(mu, nu), half_periods)


def evolve_wall(state: HalfLineState, theta_plus: float, theta_minus: float,
                v_plus: float = 0.0, v_minus: float = 0.0, half_periods: int = 1) -> HalfLineState:
    """Pared impenetrable: cada lado evoluciona en su base de Robin más su desplazamiento"""
    grid = state.grid
    duration = half_periods * np.pi / grid.omega
    right = robin_evolve(state.right, theta_plus, grid, duration) * np.exp(-1j * v_plus * duration)
    left = robin_evolve(state.left, theta_minus, grid, duration) * np.exp(-1j * v_minus * duration)
    return HalfLineState(right, left, grid)


def wall_half_period(state: HalfLineState, theta_plus: float, theta_minus: float,
                     v_plus: float, v_minus: float, envelope: Envelope,
                     half_periods: int = 1) -> EvolutionResult:
    """
    Pulso de pared y proyección sobre el qubit

    Para θ ∈ {0, π} la envolvente se conserva; para θ genérico los niveles
    de Robin no equiespaciados dispersan el perfil y aparece fuga.
    """
    evolved = evolve_wall(state, theta_plus, theta_minus, v_plus, v_minus, half_periods)
    alpha0, alpha1, leakage = decode(evolved, envelope)
    if leakage > 1e-6:
        logger.debug(f"🌊 Pared θ=({theta_plus:.4f}, {theta_minus:.4f}): fuga {leakage:.3e}")
    return EvolutionResult(evolved, alpha0, alpha1, leakage)


def apply_pulse(state: HalfLineState, pulse) -> HalfLineState:
    if isinstance(pulse, SigmaPulse):
        return state.mix(_sigma_power(pulse.mu, pulse.nu, pulse.half_periods))
    if isinstance(pulse, FreePulse):
        return state.mix(_sigma_power(np.pi, 0.0, pulse.half_periods))
    if isinstance(pulse, WallPulse):
        return evolve_wall(state, pulse.theta_plus, pulse.theta_minus,
                           pulse.v_plus, pulse.v_minus, pulse.half_periods)
    raise TypeError(f"Pulso desconocido: {type(pulse).__name__}")


# ===================================
# PROGRAMAS
# ===================================
def run_schedule(schedule: PulseSchedule, initial: QubitState,
                 leakage_limit: float = DEFAULT_LEAKAGE_LIMIT) -> EvolutionResult:
    """
    Aplicar los pulsos de izquierda a derecha

    Raises:
        LeakageOverflow: si la fuga acumulada supera `leakage_limit`
    """
    envelope = initial.envelope
    if not np.isclose(envelope.omega, schedule.omega):
        raise ValueError("La envolvente y el programa usan frecuencias distintas")

    state = encode_half_line(initial, half_line_grid(schedule.omega))
    alpha0, alpha1, leakage = initial.alpha0, initial.alpha1, 0.0
    trajectory: List[TrajectoryPoint] = []
    elapsed = 0

    for index, pulse in enumerate(schedule.pulses):
        state = apply_pulse(state, pulse)
        elapsed += pulse.half_periods
        alpha0, alpha1, leakage = decode(state, envelope)
        trajectory.append(TrajectoryPoint(index, elapsed, alpha0, alpha1, leakage))
        if leakage > leakage_limit:
            logger.error(f"❌ Pulso {index} ({pulse.type}): fuga {leakage:.4f}")
            raise LeakageOverflow(leakage, leakage_limit)

    return EvolutionResult(state, alpha0, alpha1, leakage, trajectory)


def effective_gate(schedule: PulseSchedule, env: Envelope,
                   leakage_limit: float = DEFAULT_LEAKAGE_LIMIT) -> GateMatrix:
    """Columnas = evolución de |0⟩ y |1⟩; la fuga reportada es la peor de las dos"""
    columns = []
    worst = 0.0
    for amplitudes in ((1.0, 0.0), (0.0, 1.0)):
        result = run_schedule(schedule, QubitState(*amplitudes, env), leakage_limit)
        columns.append(result.amplitudes)
        worst = max(worst, result.leakage)

    gate = GateMatrix(np.column_stack(columns), worst)
    logger.info(f"🧮 Compuerta efectiva ({len(schedule.pulses)} pulsos): fuga {worst:.3e}")
    return gate
