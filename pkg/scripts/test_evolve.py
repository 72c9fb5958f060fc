"""
Tests de la evolución analítica por medios periodos
"""
import numpy as np
import pytest

from app.physics.barrier import HADAMARD, lambda_param, sigma_matrix
from app.physics.errors import LeakageOverflow
from app.physics.evolve import (
    effective_gate,
    run_schedule,
    sigma_half_period,
    wall_half_period,
)
from app.physics.gatelab import QubitState, encode_half_line, gate_fidelity
from app.physics.pulses import FreePulse, PulseSchedule, SigmaPulse, WallPulse
from app.physics.spectral import Envelope, Side, expand_localized, half_line_grid

OMEGA = 1.0


def schedule(*pulses, omega=OMEGA):
    return PulseSchedule(omega=omega, pulses=list(pulses))


# ===================================
# MAPA σ
# ===================================
def test_sigma_map_not_and_hadamard():
    assert sigma_half_period(1.0, 0.0, np.pi, 0.0) == (pytest.approx(0.0, abs=1e-15), pytest.approx(1.0))
    a0, a1 = sigma_half_period(1.0, 0.0, np.pi / 2, 0.0)
    assert (a0, a1) == (pytest.approx(1 / np.sqrt(2)), pytest.approx(1 / np.sqrt(2)))


def test_sigma_map_at_mu_zero_is_conditional_sign():
    a0, a1 = sigma_half_period(0.6, 0.8j, 0.0, 1.3)
    assert (a0, a1) == (pytest.approx(0.6), pytest.approx(-0.8j))


def test_sigma_map_nu_convention():
    a0, a1 = sigma_half_period(1.0, 0.0, np.pi / 2, np.pi / 2)
    assert (a0, a1) == (pytest.approx(1 / np.sqrt(2)), pytest.approx(-1j / np.sqrt(2)))


def test_sigma_map_is_involution():
    start = (0.36 + 0.48j, 0.8)
    for mu in np.linspace(0.0, np.pi, 16):
        for nu in np.linspace(0.0, 2 * np.pi, 16, endpoint=False):
            once = sigma_half_period(*start, mu, nu)
            twice = sigma_half_period(*once, mu, nu)
            assert np.max(np.abs(np.subtract(twice, start))) < 1e-12


def test_sigma_map_matches_eigenbasis_evolution():
    """La expansión en χ^λ_n evolucionada T/2 reproduce e^{−iπ/2}·σ(μ, ν)"""
    env = Envelope.coherent(OMEGA)
    grid = half_line_grid(OMEGA)
    for mu, nu in [(np.pi / 2, 0.0), (np.pi / 2, np.pi / 2), (2.3, 4.1)]:
        lam = lambda_param(mu, nu)
        coeffs = expand_localized(env, Side.RIGHT, lam).evolved(np.pi / OMEGA)
        right, left = coeffs.side_functions(grid.nodes)
        expected = 1j * np.array([right, left])  # quitar e^{−iωt/2}
        target = sigma_matrix(mu, nu) @ np.array([1.0, 0.0])
        profile = env(grid.nodes)
        assert grid.norm(expected[0] - target[0] * profile) < 1e-6
        assert grid.norm(expected[1] - target[1] * profile) < 1e-6


# ===================================
# PAREDES
# ===================================
def test_neumann_hold_is_identity():
    env = Envelope.ground(OMEGA)
    state = encode_half_line(QubitState(0.6, 0.8, env))
    result = wall_half_period(state, 0.0, 0.0, 0.0, 0.0, env)
    assert (result.alpha0, result.alpha1) == (pytest.approx(0.6), pytest.approx(0.8))
    assert result.leakage < 1e-9


def test_dirichlet_wall_gains_pi_on_both_sides():
    env = Envelope.ground(OMEGA)
    state = encode_half_line(QubitState(0.6, 0.8, env))
    result = wall_half_period(state, np.pi, np.pi, 0.0, 0.0, env)
    assert (result.alpha0, result.alpha1) == (pytest.approx(-0.6), pytest.approx(-0.8))


@pytest.mark.parametrize("eta", [0.25, 0.5])
def test_offset_wall_is_exact_phase_gate(eta):
    env = Envelope.ground(OMEGA)
    gate = effective_gate(schedule(WallPulse(theta_plus=np.pi, theta_minus=np.pi, v_plus=eta * OMEGA)), env)
    ideal = np.diag([np.exp(-1j * eta * np.pi), 1.0])
    assert gate_fidelity(gate, ideal) >= 1 - 1e-8
    assert gate.leakage < 1e-9


def test_generic_wall_leaks():
    gate = effective_gate(
        schedule(WallPulse(theta_plus=np.pi / 2, theta_minus=np.pi / 2)), Envelope.ground(OMEGA)
    )
    assert 1e-3 < gate.leakage < 0.5


# ===================================
# PROGRAMAS
# ===================================
def test_run_schedule_identity_hold():
    result = run_schedule(schedule(WallPulse()), QubitState(1.0, 0.0, Envelope.ground(OMEGA)))
    assert result.alpha0 == pytest.approx(1.0)
    assert result.leakage < 1e-9
    assert len(result.trajectory) == 1


def test_not_twice_and_reflection_squared():
    env = Envelope.ground(OMEGA)
    q = QubitState(0.6, 0.8j, env)
    result = run_schedule(schedule(SigmaPulse(mu=np.pi), SigmaPulse(mu=np.pi)), q)
    assert (result.alpha0, result.alpha1) == (pytest.approx(0.6), pytest.approx(0.8j))
    result = run_schedule(schedule(SigmaPulse(mu=np.pi / 2), SigmaPulse(mu=np.pi / 2)),
                          QubitState(1.0, 0.0, env))
    assert (result.alpha0, result.alpha1) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-12))
    assert [p.half_periods for p in result.trajectory] == [1, 2]


def test_free_pulse_is_not_gate():
    gate = effective_gate(schedule(FreePulse(half_periods=3)), Envelope.ground(OMEGA))
    assert np.allclose(gate.matrix, [[0, 1], [1, 0]])


def test_effective_gate_reflections():
    env = Envelope.ground(OMEGA)
    hadamard = effective_gate(schedule(SigmaPulse(mu=np.pi / 2)), env)
    assert np.allclose(hadamard.matrix, HADAMARD)
    assert hadamard.unitarity_defect() < 1e-8
    assert np.allclose(effective_gate(schedule(SigmaPulse(mu=0.0)), env).matrix, np.diag([1, -1]))


def test_half_wall_phase_gate():
    gate = effective_gate(
        schedule(WallPulse(theta_plus=np.pi, theta_minus=np.pi, v_plus=0.5 * OMEGA)), Envelope.ground(OMEGA)
    )
    assert gate_fidelity(gate, np.diag([np.exp(-0.5j * np.pi), 1.0])) >= 1 - 1e-8


def test_leakage_overflow_rejects_schedule():
    with pytest.raises(LeakageOverflow):
        run_schedule(schedule(WallPulse(theta_plus=np.pi / 2, theta_minus=np.pi / 2)),
                     QubitState(1.0, 0.0, Envelope.ground(OMEGA)), leakage_limit=1e-4)


def test_envelope_frequency_must_match():
    with pytest.raises(ValueError):
        run_schedule(schedule(FreePulse(), omega=2.0), QubitState(1.0, 0.0, Envelope.ground(OMEGA)))
