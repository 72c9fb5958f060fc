"""
Comparación analítico-frente-a-malla de programas de pulsos
"""
import numpy as np
import pytest

from app.physics.barrier import HADAMARD, SIGMA_1
from app.physics.compiler import compile_gate
from app.physics.gatelab import QubitState, gate_fidelity
from app.physics.oracle import Grid
from app.physics.pulses import PulseSchedule, SigmaPulse, WallPulse
from app.physics.spectral import Envelope
from app.physics.verification import (
    compare_schedule,
    oracle_gate,
    pulse_on_grid,
    schedule_on_grid,
    sigma_map_table,
    verify_schedule,
)

OMEGA = 1.0
pytestmark = pytest.mark.slow


def schedule(*pulses):
    return PulseSchedule(omega=OMEGA, pulses=list(pulses))


def test_pulse_on_grid_potentials():
    u, pot = pulse_on_grid(WallPulse(theta_plus=np.pi, theta_minus=np.pi, v_plus=0.5), OMEGA)
    assert np.allclose(u, -np.eye(2))
    assert pot(np.array([1.0, -1.0])) == pytest.approx([1.0, 0.5])


def test_not_gate_on_grid():
    env = Envelope.polynomial(OMEGA)
    comparison = compare_schedule(schedule(SigmaPulse(mu=np.pi)), QubitState(1.0, 0.0, env))
    assert abs(comparison.analytic[0]) < 1e-9
    assert abs(comparison.analytic[1] - 1.0) < 1e-9
    assert comparison.deviation < 1e-3
    assert comparison.oracle_leakage < 1e-3


def test_hadamard_gate_on_grid():
    report = verify_schedule(schedule(SigmaPulse(mu=np.pi / 2)))
    assert report.max_deviation < 1e-3
    assert gate_fidelity(report.analytic_gate, HADAMARD) >= 1 - 1e-6
    assert report.fidelity >= 1 - 1e-3
    populations = np.abs(report.comparisons[0].oracle) ** 2
    assert populations == pytest.approx([0.5, 0.5], abs=1e-3)


def test_nu_sign_convention_against_grid():
    env = Envelope.polynomial(OMEGA)
    run = schedule_on_grid(schedule(SigmaPulse(mu=np.pi / 2, nu=np.pi / 2)), QubitState(1.0, 0.0, env))
    assert run.alpha0 == pytest.approx(1 / np.sqrt(2), abs=1e-3)
    assert run.alpha1 == pytest.approx(-1j / np.sqrt(2), abs=1e-3)


def test_sigma_map_grid_agrees_with_analytic():
    mus = [0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi]
    nus = [0.0, np.pi / 2, np.pi]
    table = sigma_map_table(mus, nus, OMEGA)
    assert len(table) == 15
    assert table["deviation"].max() < 1e-3
    assert table["analytic_leakage"].max() < 1e-9
    assert table["oracle_leakage"].max() < 1e-3


@pytest.mark.parametrize("eta", [0.25, 0.5])
def test_offset_wall_phase_gate_on_grid(eta):
    s = schedule(WallPulse(theta_plus=np.pi, theta_minus=np.pi, v_plus=eta * OMEGA))
    matrix, leakage = oracle_gate(s, Envelope.polynomial(OMEGA))
    assert gate_fidelity(matrix, np.diag([np.exp(-1j * eta * np.pi), 1.0])) >= 1 - 1e-3
    assert leakage < 1e-3


def test_generic_wall_leakage_on_grid():
    s = schedule(WallPulse(theta_plus=np.pi / 2, theta_minus=np.pi / 2))
    run = schedule_on_grid(s, QubitState(1.0, 0.0, Envelope.ground(OMEGA)))
    assert run.leakage > 1e-3


def test_trajectory_records_each_pulse():
    s = schedule(SigmaPulse(mu=np.pi), SigmaPulse(mu=np.pi / 2))
    run = schedule_on_grid(s, QubitState(1.0, 0.0, Envelope.polynomial(OMEGA)), Grid.for_oscillator(OMEGA, 1024))
    assert len(run.trajectory) == 2
    assert abs(run.trajectory[0][1]) == pytest.approx(1.0, abs=1e-3)


def test_compiled_gates_on_grid(random_unitaries):
    targets = [SIGMA_1, HADAMARD] + random_unitaries(3)
    for g in targets:
        report = verify_schedule(compile_gate(g, OMEGA))
        assert gate_fidelity(report.oracle_gate, g) >= 1 - 1e-2
