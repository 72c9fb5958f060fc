"""
Verificación analítico-frente-a-malla
Ejecuta programas de pulsos con el oráculo de malla y compara amplitudes,
compuertas y fugas con la evolución analítica.
"""

import numpy as np
import pandas as pd
from dataclasses import dataclass, field
from joblib import Parallel, delayed
from loguru import logger
from typing import Iterable, List, Optional, Tuple

from app.physics.barrier import sigma_matrix, wall_matrix
from app.physics.evolve import effective_gate, run_schedule
from app.physics.gatelab import QubitState, decode, encode_grid, gate_fidelity
from app.physics.oracle import Grid, GridState, build_hamiltonian, propagate
from app.physics.pulses import FreePulse, PulseSchedule, SigmaPulse, WallPulse
from app.physics.spectral import Envelope, PotentialSpec


@dataclass(frozen=True, eq=False)
class GridRun:
    """Resultado de un programa propagado sobre la malla"""
    state: GridState
    alpha0: complex
    alpha1: complex
    leakage: float
    trajectory: List[Tuple[complex, complex, float]] = field(default_factory=list)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1], dtype=complex)


@dataclass(frozen=True)
class ScheduleComparison:
    """Amplitudes analíticas y de malla para un estado inicial"""
    initial: Tuple[complex, complex]
    analytic: Tuple[complex, complex]
    oracle: Tuple[complex, complex]
    analytic_leakage: float
    oracle_leakage: float

    @property
    def deviation(self) -> float:
        return float(np.max(np.abs(np.subtract(self.analytic, self.oracle))))


@dataclass(frozen=True)
class VerificationReport:
    comparisons: List[ScheduleComparison]
    analytic_gate: np.ndarray
    oracle_gate: np.ndarray
    fidelity: float
    grid_points: int

    @property
    def max_deviation(self) -> float:
        return max(c.deviation for c in self.comparisons)

    @property
    def max_oracle_leakage(self) -> float:
        return max(c.oracle_leakage for c in self.comparisons)


def pulse_on_grid(pulse, omega: float) -> Tuple[np.ndarray, PotentialSpec]:
    """Interacción U(2) y potencial que el oráculo usa para un pulso"""
    if isinstance(pulse, SigmaPulse):
        return sigma_matrix(pulse.mu, pulse.nu), PotentialSpec(omega)
    if isinstance(pulse, FreePulse):
        return sigma_matrix(np.pi, 0.0), PotentialSpec(omega)
    if isinstance(pulse, WallPulse):
        return (wall_matrix(pulse.theta_plus, pulse.theta_minus),
                PotentialSpec(omega, v_add_right=pulse.v_plus, v_add_left=pulse.v_minus))
    raise TypeError(f"Pulso desconocido: {type(pulse).__name__}")


def schedule_on_grid(schedule: PulseSchedule, initial: QubitState,
                     grid: Optional[Grid] = None, steps_per_period: int = 4096) -> GridRun:
    """
    Propagar el programa con Crank–Nicolson, un Hamiltoniano por pulso

    Las amplitudes se refieren al fundamental libre: se multiplica por
    e^{iωt/2} antes de proyectar.
    """
    omega = schedule.omega
    grid = grid or Grid.for_oscillator(omega)
    dt = PotentialSpec(omega).period / steps_per_period

    state = encode_grid(initial, grid)
    trajectory = []
    for pulse in schedule.pulses:
        u, pot = pulse_on_grid(pulse, omega)
        state = propagate(state, build_hamiltonian(grid, pot, u), pulse.half_periods * pot.half_period, dt)
        reference = np.exp(0.5j * omega * state.t)
        alpha0, alpha1, leakage = decode(state, initial.envelope)
        trajectory.append((alpha0 * reference, alpha1 * reference, leakage))

    alpha0, alpha1, leakage = trajectory[-1]
    return GridRun(state, alpha0, alpha1, leakage, trajectory)


def compare_schedule(schedule: PulseSchedule, initial: QubitState,
                     grid: Optional[Grid] = None, steps_per_period: int = 4096) -> ScheduleComparison:
    analytic = run_schedule(schedule, initial)
    oracle = schedule_on_grid(schedule, initial, grid, steps_per_period)
    return ScheduleComparison(
        initial=(initial.alpha0, initial.alpha1),
        analytic=(analytic.alpha0, analytic.alpha1),
        oracle=(oracle.alpha0, oracle.alpha1),
        analytic_leakage=analytic.leakage,
        oracle_leakage=oracle.leakage,
    )


def oracle_gate(schedule: PulseSchedule, envelope: Envelope, grid: Optional[Grid] = None,
                steps_per_period: int = 4096) -> Tuple[np.ndarray, float]:
    """Compuerta extraída de la malla (sin exigir unitariedad) y su peor fuga"""
    runs = [schedule_on_grid(schedule, QubitState(a, b, envelope), grid, steps_per_period)
            for a, b in ((1.0, 0.0), (0.0, 1.0))]
    matrix = np.column_stack([r.amplitudes for r in runs])
    return matrix, max(r.leakage for r in runs)


def verify_schedule(schedule: PulseSchedule, envelope: Optional[Envelope] = None,
                    grid: Optional[Grid] = None, steps_per_period: int = 4096) -> VerificationReport:
    """
    Comparar el programa sobre |0⟩, |1⟩ y (|0⟩ + i|1⟩)/√2

    Por defecto la envolvente es y⁴e^{−ωy²/2}, que pertenece al dominio de
    cualquier condición de interfaz.
    """
    omega = schedule.omega
    envelope = envelope or Envelope.polynomial(omega)
    grid = grid or Grid.for_oscillator(omega)
    logger.info(f"🔬 Verificando {len(schedule.pulses)} pulsos ({schedule.total_half_periods} T/2) "
                f"en malla n={grid.n}")

    inputs = [(1.0, 0.0), (0.0, 1.0), (1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0))]
    comparisons = [compare_schedule(schedule, QubitState(a, b, envelope), grid, steps_per_period)
                   for a, b in inputs]

    analytic = effective_gate(schedule, envelope).matrix
    grid_matrix = np.column_stack([comparisons[0].oracle, comparisons[1].oracle])
    report = VerificationReport(
        comparisons=comparisons,
        analytic_gate=analytic,
        oracle_gate=grid_matrix,
        fidelity=gate_fidelity(analytic, grid_matrix),
        grid_points=grid.n,
    )
    logger.info(f"✅ Desviación máxima {report.max_deviation:.3e}, fidelidad {report.fidelity:.8f}")
    return report


def sigma_map_table(mus: Iterable[float], nus: Iterable[float], omega: float,
                    grid: Optional[Grid] = None, n_jobs: int = 1) -> pd.DataFrame:
    """Desviación analítico-malla del pulso σ(μ, ν) sobre |0⟩ para una rejilla (μ, ν)"""
    envelope = Envelope.polynomial(omega)
    points = [(mu, nu) for mu in mus for nu in nus]

    def run(mu: float, nu: float) -> dict:
        schedule = PulseSchedule(omega=omega, pulses=[SigmaPulse(mu=mu, nu=nu)])
        comparison = compare_schedule(schedule, QubitState(1.0, 0.0, envelope), grid)
        return {
            "mu": mu,
            "nu": nu,
            "deviation": comparison.deviation,
            "analytic_leakage": comparison.analytic_leakage,
            "oracle_leakage": comparison.oracle_leakage,
        }

    rows = Parallel(n_jobs=n_jobs)(delayed(run)(mu, nu) for mu, nu in points)
    return pd.DataFrame(rows)
