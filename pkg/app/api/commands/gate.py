"""
Verbo gate: compuerta efectiva de un pulso o de un programa
"""
from loguru import logger

from app.api.commands.output import emit_json, load_schedule
from app.api.schemas import GateCommand, GateReport, matrix_pairs
from app.config import get_settings
from app.physics.barrier import wrap_angle
from app.physics.compiler import schedule_matrix
from app.physics.errors import NotQubitExact
from app.physics.evolve import effective_gate
from app.physics.gatelab import gate_fidelity
from app.physics.pulses import PulseSchedule, SigmaPulse, WallPulse
from app.physics.spectral import named_envelope


def build_schedule(cmd: GateCommand) -> PulseSchedule:
    if cmd.schedule is not None:
        return load_schedule(cmd.schedule)
    if cmd.mu is not None:
        pulse = SigmaPulse(mu=cmd.mu, nu=wrap_angle(cmd.nu), half_periods=cmd.half_periods)
    else:
        pulse = WallPulse(
            theta_plus=wrap_angle(cmd.theta_plus or 0.0),
            theta_minus=wrap_angle(cmd.theta_minus or 0.0),
            v_plus=cmd.v_plus,
            v_minus=cmd.v_minus,
            half_periods=cmd.half_periods,
        )
    return PulseSchedule(omega=cmd.omega, pulses=[pulse])


def run(cmd: GateCommand) -> str:
    schedule = build_schedule(cmd)
    settings = get_settings()
    envelope = named_envelope(cmd.envelope, schedule.omega, settings.n_max)
    gate = effective_gate(schedule, envelope, settings.leakage_limit)

    try:
        ideal = schedule_matrix(schedule).matrix
        fidelity = gate_fidelity(gate, ideal)
    except NotQubitExact:
        logger.info("🌊 Programa con paredes de Robin genéricas: sin compuerta ideal")
        ideal, fidelity = None, None

    return emit_json(GateReport(
        matrix=matrix_pairs(gate.matrix),
        leakage=gate.leakage,
        fidelity_vs_ideal=fidelity,
        ideal=matrix_pairs(ideal) if ideal is not None else None,
    ))
