"""
Compilador de compuertas a programas de pulsos
Primitivas: reflexiones σ(μ, ν) de medio periodo y paredes de Dirichlet con
potencial añadido (fase condicional exacta). Rz(α)·Ry(β)·Rz(δ) se realiza
como [pared, σ(0,0), σ(β,0), pared].
"""

import numpy as np
from dataclasses import dataclass
from loguru import logger
from typing import List

from app.physics.barrier import TWO_PI, as_unitary, reflection_params, sigma_matrix, wrap_angle
from app.physics.errors import NotQubitExact
from app.physics.gatelab import GateMatrix
from app.physics.pulses import FreePulse, PulseSchedule, SigmaPulse, WallPulse

ANGLE_EPS = 1e-12
GIMBAL_TOL = 1e-12


def rz(phi: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def ry(beta: float) -> np.ndarray:
    c, s = np.cos(beta / 2.0), np.sin(beta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class EulerAngles:
    """G = e^{iγ}·Rz(α)·Ry(β)·Rz(δ)"""
    gamma: float
    alpha: float
    beta: float
    delta: float

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.gamma) * rz(self.alpha) @ ry(self.beta) @ rz(self.delta)


def euler_decompose(g) -> EulerAngles:
    """
    Descomposición ZYZ con β ∈ [0, π] y α, δ ∈ [0, 2π)

    En los casos de gimbal (β = 0 o β = π) se fija δ = 0.
    """
    g = as_unitary(g, tol=1e-10)
    v = g / np.sqrt(np.linalg.det(g))

    beta = 2.0 * np.arctan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[1, 0]) < GIMBAL_TOL:
        alpha, delta = 2.0 * np.angle(v[1, 1]), 0.0
    elif abs(v[0, 0]) < GIMBAL_TOL:
        alpha, delta = 2.0 * np.angle(v[1, 0]), 0.0
    else:
        alpha = np.angle(v[1, 1]) + np.angle(v[1, 0])
        delta = np.angle(v[1, 1]) - np.angle(v[1, 0])

    alpha, delta = wrap_angle(alpha), wrap_angle(delta)
    rotation = rz(alpha) @ ry(beta) @ rz(delta)
    gamma = wrap_angle(np.angle(np.trace(rotation.conj().T @ g)))
    return EulerAngles(gamma, alpha, float(beta), delta)


def _is_zero_angle(angle: float) -> bool:
    return min(angle, TWO_PI - angle) < ANGLE_EPS


def phase_pulse(phi: float, omega: float) -> WallPulse:
    """Rz(φ) salvo fase global: Dirichlet en ambos lados y V₊ = (φ mod 2π)·ω/π"""
    return WallPulse(theta_plus=np.pi, theta_minus=np.pi,
                     v_plus=wrap_angle(phi) / np.pi * omega, v_minus=0.0)


def compile_gate(g, omega: float) -> PulseSchedule:
    """
    Programa de a lo sumo cuatro pulsos que realiza G salvo fase global

    Las reflexiones (G ∝ σ(μ, ν)) se emiten como un único pulso σ y G ∝ I
    como una espera con paredes de Neumann.
    """
    g = as_unitary(g, tol=1e-10)
    reflection = reflection_params(g)
    pulses: List = []

    if reflection is not None:
        mu, nu, _ = reflection
        pulses.append(SigmaPulse(mu=mu, nu=nu))
    else:
        angles = euler_decompose(g)
        if not _is_zero_angle(angles.delta):
            pulses.append(phase_pulse(angles.delta, omega))
        if angles.beta > ANGLE_EPS:
            pulses.extend([SigmaPulse(mu=0.0, nu=0.0), SigmaPulse(mu=angles.beta, nu=0.0)])
        if not _is_zero_angle(angles.alpha):
            pulses.append(phase_pulse(angles.alpha, omega))
        if not pulses:
            pulses.append(WallPulse(theta_plus=0.0, theta_minus=0.0))

    schedule = PulseSchedule(omega=omega, pulses=pulses)
    logger.info(f"🛠️  Compilado en {len(pulses)} pulsos: {[p.type for p in pulses]}")
    return schedule


def _wall_side_phase(theta: float, v: float, half_periods: int, omega: float) -> complex:
    if theta == 0.0:
        base = 1.0
    elif theta == np.pi:
        base = (-1.0) ** half_periods
    else:
        raise NotQubitExact(f"Pared con θ = {theta:.6g} no es una compuerta ideal de qubit")
    return base * np.exp(-1j * v * half_periods * np.pi / omega)


def pulse_matrix(pulse, omega: float) -> np.ndarray:
    """Matriz ideal de 2x2 de un pulso (fases relativas al fundamental libre)"""
    if isinstance(pulse, SigmaPulse):
        return np.linalg.matrix_power(sigma_matrix(pulse.mu, pulse.nu), pulse.half_periods)
    if isinstance(pulse, FreePulse):
        return np.linalg.matrix_power(sigma_matrix(np.pi, 0.0), pulse.half_periods)
    if isinstance(pulse, WallPulse):
        return np.diag([
            _wall_side_phase(pulse.theta_plus, pulse.v_plus, pulse.half_periods, omega),
            _wall_side_phase(pulse.theta_minus, pulse.v_minus, pulse.half_periods, omega),
        ])
    raise TypeError(f"Pulso desconocido: {type(pulse).__name__}")


def schedule_matrix(s: PulseSchedule) -> GateMatrix:
    """
    Producto de las matrices ideales, el primer pulso a la derecha

    Raises:
        NotQubitExact: si alguna pared tiene θ ∉ {0, π}
    """
    total = np.eye(2, dtype=complex)
    for pulse in s.pulses:
        total = pulse_matrix(pulse, s.omega) @ total
    return GateMatrix(total)
