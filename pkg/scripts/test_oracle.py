"""
Tests del oráculo de malla: Hamiltoniano, espectros, propagación y dispersión
"""
import numpy as np
import pytest

from app.physics.barrier import (
    HADAMARD,
    IDENTITY,
    MINUS_IDENTITY,
    SIGMA_1,
    boundary_residual,
    scattering_coefficients,
    sigma_matrix,
    wall_matrix,
)
from app.physics.errors import ResolutionError
from app.physics.gatelab import QubitState, encode_grid, gate_fidelity
from app.physics.oracle import (
    Grid,
    GridState,
    PacketSetup,
    build_hamiltonian,
    convergence_report,
    interface_coupling,
    interface_data,
    observed_orders,
    propagate,
    richardson_spectrum,
    stationary_spectrum,
    wavepacket_scatter,
)
from app.physics.pulses import PulseSchedule, WallPulse
from app.physics.spectral import Envelope, PotentialSpec, robin_spectrum
from app.physics.verification import oracle_gate

OMEGA = 1.0
POT = PotentialSpec(OMEGA)


@pytest.fixture(scope="module")
def grid():
    return Grid.for_oscillator(OMEGA)


# ===================================
# MALLA
# ===================================
def test_grid_layout():
    g = Grid(10.0, 8)
    assert g.h == pytest.approx(2.5)
    assert g.x[g.origin[0]] == pytest.approx(-1.25)
    assert g.x[g.origin[1]] == pytest.approx(1.25)
    with pytest.raises(ResolutionError):
        Grid(10.0, 7)


def test_grid_guards():
    with pytest.raises(ResolutionError):
        Grid.for_oscillator(OMEGA, 256).check(POT)
    with pytest.raises(ResolutionError):
        Grid(4.0, 2048).check(POT)
    Grid.for_oscillator(OMEGA, 512).check(POT)


def test_grid_state_normalization_and_csv(grid):
    state = GridState.from_function(lambda x: np.exp(-0.5 * x ** 2), grid)
    assert state.norm() == pytest.approx(1.0)
    right, left = state.probabilities()
    assert right == pytest.approx(0.5) and left == pytest.approx(0.5)
    assert abs(state.mean_position()) < 1e-12
    with pytest.raises(ValueError):
        GridState(2.0 * state.values, grid)
    text = state.to_csv()
    assert text.startswith("x,re_psi,im_psi\n")
    assert len(text.splitlines()) == grid.n + 1


# ===================================
# HAMILTONIANO
# ===================================
def test_interface_coupling_limits():
    h = 0.01
    assert np.allclose(interface_coupling(SIGMA_1, h), SIGMA_1)
    assert np.allclose(interface_coupling(IDENTITY, h), IDENTITY)
    assert np.allclose(interface_coupling(MINUS_IDENTITY, h), -IDENTITY)


def test_hamiltonian_is_hermitian(grid, random_unitaries):
    for u in random_unitaries(5):
        ham = build_hamiltonian(grid, POT, u)
        assert abs(ham - ham.conj().T).max() < 1e-12


def test_free_oscillator_levels(grid):
    levels = stationary_spectrum(grid, POT, SIGMA_1, 3)
    assert np.allclose(levels, [0.5, 1.5, 2.5], atol=1e-4)


def test_stationary_count_limit(grid):
    with pytest.raises(ValueError):
        stationary_spectrum(grid, POT, SIGMA_1, 13)


@pytest.mark.slow
def test_neumann_and_dirichlet_spectra(grid):
    n = np.repeat(np.arange(3), 2)
    neumann = richardson_spectrum(grid, POT, IDENTITY, 6)
    dirichlet = richardson_spectrum(grid, POT, MINUS_IDENTITY, 6)
    assert np.max(np.abs(neumann - OMEGA * (2 * n + 0.5)) / neumann) < 1e-4
    assert np.max(np.abs(dirichlet - OMEGA * (2 * n + 1.5)) / dirichlet) < 1e-4


@pytest.mark.slow
def test_robin_ground_level_two_ways(grid):
    theta = np.pi / 2
    analytic = robin_spectrum(theta, OMEGA, 1).levels[0]
    on_grid = richardson_spectrum(grid, POT, wall_matrix(theta, theta), 2)
    assert on_grid[0] == pytest.approx(analytic, abs=1e-6)
    assert on_grid[1] == pytest.approx(analytic, abs=1e-6)


def test_inverse_square_term_skips_resolution_guard():
    Grid.for_oscillator(OMEGA, 512).check(PotentialSpec(OMEGA, g=0.1))
    with pytest.raises(ResolutionError):
        Grid.for_oscillator(OMEGA, 256).check(PotentialSpec(OMEGA, g=0.1))
    with pytest.raises(ValueError):
        PotentialSpec(OMEGA, g=-0.2)


@pytest.mark.slow
@pytest.mark.parametrize("g, n, tol", [(1.0, 4096, 1e-3), (0.1, 8192, 1e-2)])
def test_inverse_square_dirichlet_levels(g, n, tol):
    l = 0.5 * (np.sqrt(1.0 + 8.0 * g) - 1.0)
    expected = OMEGA * (2 * np.repeat(np.arange(2), 2) + l + 1.5)
    levels = stationary_spectrum(Grid.for_oscillator(OMEGA, n), PotentialSpec(OMEGA, g=g), MINUS_IDENTITY, 4)
    assert np.max(np.abs(levels - expected)) < tol
    assert levels[1] - levels[0] < 1e-9


@pytest.mark.slow
def test_inverse_square_richardson():
    pot = PotentialSpec(OMEGA, g=1.0)
    levels = richardson_spectrum(Grid.for_oscillator(OMEGA, 2048), pot, MINUS_IDENTITY, 4)
    assert np.allclose(levels, [2.5, 2.5, 4.5, 4.5], atol=1e-4)


def test_sigma_family_is_isospectral(grid):
    samples = [(0.0, 0.0), (np.pi / 4, 0.3), (np.pi / 2, 0.0), (np.pi / 2, np.pi / 2),
               (2.0, 1.0), (3 * np.pi / 4, np.pi), (2.9, 5.0), (np.pi, 0.0)]
    spectra = np.array([stationary_spectrum(grid, POT, sigma_matrix(mu, nu), 6) for mu, nu in samples])
    assert np.max(np.abs(spectra - spectra[0]) / spectra[0]) < 1e-6
    assert np.allclose(spectra[0], np.arange(6) + 0.5, atol=1e-3)


# ===================================
# PROPAGACIÓN
# ===================================
def test_propagate_preserves_norm_and_time(grid):
    env = Envelope.polynomial(OMEGA)
    state = encode_grid(QubitState(1.0, 0.0, env), grid)
    ham = build_hamiltonian(grid, POT, HADAMARD)
    final = propagate(state, ham, np.pi, 2 * np.pi / 1024)
    assert abs(final.norm() - 1.0) < 1e-9
    assert final.t == pytest.approx(np.pi)
    assert propagate(state, ham, 0.0, 0.1) is state


def test_hadamard_pulse_splits_probability(grid):
    env = Envelope.polynomial(OMEGA)
    state = encode_grid(QubitState(1.0, 0.0, env), grid)
    final = propagate(state, build_hamiltonian(grid, POT, sigma_matrix(np.pi / 2, 0.0)),
                      np.pi, 2 * np.pi / 4096)
    right, left = final.probabilities()
    assert right == pytest.approx(0.5, abs=1e-3)
    assert left == pytest.approx(0.5, abs=1e-3)


def test_interface_residual_is_small(grid):
    u = sigma_matrix(2.0, 1.0)
    state = encode_grid(QubitState(1.0, 0.0, Envelope.polynomial(OMEGA)), grid)
    final = propagate(state, build_hamiltonian(grid, POT, u), 0.3 * np.pi, 2 * np.pi / 2048)
    bd = interface_data(final)
    assert np.max(np.abs(bd.values)) > 1e-3
    assert np.max(np.abs(boundary_residual(u, bd))) < 10.0 * grid.h


# ===================================
# DISPERSIÓN
# ===================================
@pytest.mark.slow
def test_hadamard_wavepacket_transmits_half():
    transmitted, reflected = wavepacket_scatter(HADAMARD, 5.0)
    assert 0.49 <= transmitted <= 0.51
    assert transmitted + reflected == pytest.approx(1.0, abs=1e-3)


@pytest.mark.slow
@pytest.mark.parametrize("mu, nu", [(np.pi / 3, 0.0), (2.0, 1.0)])
def test_wavepacket_matches_closed_form(mu, nu):
    u = sigma_matrix(mu, nu)
    transmitted, _ = wavepacket_scatter(u, 5.0)
    expected = abs(scattering_coefficients(u, 5.0).t_left) ** 2
    assert transmitted == pytest.approx(expected, abs=1e-2)


def test_wavepacket_rejects_unresolved_carrier():
    with pytest.raises(ResolutionError):
        wavepacket_scatter(HADAMARD, 80.0)
    with pytest.raises(ResolutionError):
        wavepacket_scatter(HADAMARD, 1.0, width=2.0)
    with pytest.raises(ResolutionError):
        wavepacket_scatter(HADAMARD, 0.0)


def test_wavepacket_rejects_domain_reached_by_packet():
    with pytest.raises(ResolutionError):
        wavepacket_scatter(HADAMARD, 2.0, half_width=40.0)


@pytest.mark.parametrize("k0", [0.5, 2.0, 10.0, 20.0])
def test_packet_setup_scales_with_wavenumber(k0):
    setup = PacketSetup.for_wavenumber(k0)
    assert setup.width * k0 >= 5.0
    assert setup.half_width / setup.n * 2.0 * k0 <= 0.25 + 1e-12
    assert setup.x0 + setup.k0 * setup.t_total == pytest.approx(-setup.x0)
    assert abs(setup.x0) > 6.0 * setup.final_spread
    assert abs(setup.x0) + 6.0 * setup.final_spread < setup.half_width


@pytest.mark.slow
@pytest.mark.parametrize("k0", [0.5, 2.0, 10.0, 20.0])
@pytest.mark.parametrize("u", [SIGMA_1, sigma_matrix(np.pi / 3, 0.0)], ids=["free", "mu_pi_3"])
def test_wavepacket_matches_closed_form_across_wavenumbers(u, k0):
    transmitted, reflected = wavepacket_scatter(u, k0)
    assert transmitted == pytest.approx(scattering_coefficients(u, k0).transmission, abs=1e-2)
    assert transmitted + reflected == pytest.approx(1.0, abs=1e-3)


# ===================================
# CONVERGENCIA
# ===================================
def test_observed_orders():
    orders = observed_orders([4e-4, 1e-4, 2.5e-5])
    assert np.isnan(orders[0])
    assert orders[1:] == pytest.approx([2.0, 2.0])


def test_free_oscillator_converges_at_second_order():
    grids = [Grid.for_oscillator(OMEGA, n) for n in (512, 1024, 2048)]
    report = convergence_report(lambda g: stationary_spectrum(g, POT, SIGMA_1, 1)[0], grids, reference=0.5)
    assert list(report.columns) == ["n", "h", "value", "error", "order"]
    assert np.all(np.abs(report["order"].iloc[1:] - 2.0) < 0.2)


@pytest.mark.slow
def test_hadamard_amplitude_self_convergence():
    env = Envelope.polynomial(OMEGA)
    u = sigma_matrix(np.pi / 2, 0.0)

    def amplitude(g: Grid) -> float:
        state = encode_grid(QubitState(1.0, 0.0, env), g)
        final = propagate(state, build_hamiltonian(g, POT, u), np.pi, 2 * np.pi / 4096)
        profile = encode_grid(QubitState(1.0, 0.0, env), g).values
        return abs(g.h * np.vdot(profile, final.values))

    grids = [Grid.for_oscillator(OMEGA, n) for n in (512, 1024, 2048, 4096)]
    report = convergence_report(amplitude, grids)
    errors = report["error"].to_numpy()
    assert np.all(np.diff(errors) < 0.0)
    assert np.all(report["order"].iloc[1:] >= 0.8)


def test_convergence_report_requires_halving():
    grids = [Grid.for_oscillator(OMEGA, n) for n in (512, 1024, 4096)]
    with pytest.raises(ValueError):
        convergence_report(lambda g: 0.0, grids)


@pytest.mark.slow
def test_offset_wall_phase_gate_converges():
    s = PulseSchedule(omega=OMEGA, pulses=[WallPulse(theta_plus=np.pi, theta_minus=np.pi, v_plus=0.5 * OMEGA)])
    target = np.diag([np.exp(-0.5j * np.pi), 1.0])
    env = Envelope.polynomial(OMEGA)

    def fidelity_loss(g: Grid) -> float:
        matrix, _ = oracle_gate(s, env, g, steps_per_period=8 * g.n)
        return 1.0 - gate_fidelity(matrix, target)

    grids = [Grid.for_oscillator(OMEGA, n) for n in (512, 1024, 2048)]
    report = convergence_report(fidelity_loss, grids, reference=0.0)
    errors = report["error"].to_numpy()
    assert np.all(np.diff(errors) < 0.0)
    assert errors[-1] < 1e-3
