"""
Verbo verify: programa analítico frente al oráculo de malla
"""
from app.api.commands.output import emit_json, load_schedule
from app.api.schemas import ComparisonReport, VerifyCommand, VerifyReport, complex_pair, matrix_pairs
from app.config import get_settings
from app.physics.oracle import Grid
from app.physics.spectral import named_envelope
from app.physics.verification import verify_schedule


def run(cmd: VerifyCommand) -> str:
    schedule = load_schedule(cmd.schedule)
    omega = schedule.omega
    settings = get_settings()
    grid = Grid.for_oscillator(omega, cmd.grid_points, settings.grid_half_width)
    envelope = named_envelope(cmd.envelope, omega, settings.n_max)
    report = verify_schedule(schedule, envelope, grid, cmd.steps_per_period)

    return emit_json(VerifyReport(
        omega=omega,
        grid_points=report.grid_points,
        max_deviation=report.max_deviation,
        max_oracle_leakage=report.max_oracle_leakage,
        fidelity=report.fidelity,
        analytic_gate=matrix_pairs(report.analytic_gate),
        oracle_gate=matrix_pairs(report.oracle_gate),
        comparisons=[
            ComparisonReport(
                initial=[complex_pair(z) for z in c.initial],
                analytic=[complex_pair(z) for z in c.analytic],
                oracle=[complex_pair(z) for z in c.oracle],
                deviation=c.deviation,
                analytic_leakage=c.analytic_leakage,
                oracle_leakage=c.oracle_leakage,
            )
            for c in report.comparisons
        ],
    ))
